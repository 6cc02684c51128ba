// Acceptance gate: criteria 1-11, one PASS/FAIL line each with its time
// budget. Exit status is nonzero if any criterion fails or overruns.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "r2sf/catalog.hpp"
#include "r2sf/error.hpp"
#include "r2sf/linset.hpp"
#include "r2sf/report.hpp"

using namespace r2sf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = "failed: " + what;
    pass = pass && ok;
  }
};

bool is_pm1(const Field& F, Elem v) { return v == F.one() || v == F.neg(F.one()); }

FamilySpec fspec(const char* fam, const Field& F) {
  FamilySpec s;
  s.family = fam;
  s.p = F.p();
  s.h = F.h();
  s.n = F.n();
  s.r = 1;
  return s;
}

Elem first_a(const Field& F, bool norm_minus1) {
  return first_by_code(F, [&](Elem x) {
    if (x.is_zero()) return false;
    const Elem nx = F.norm(x);
    return norm_minus1 ? nx == F.neg(F.one()) : !is_pm1(F, nx);
  });
}

// b with N(b) not in {1,-1}; optionally constrain whether N(b^2) = -1.
std::optional<Elem> find_b(const Field& F, std::optional<bool> b2_minus1) {
  for (Elem b : F.elements()) {
    if (b.is_zero() || is_pm1(F, F.norm(b))) continue;
    if (b2_minus1 && (F.norm(F.mul(b, b)) == F.neg(F.one())) != *b2_minus1) continue;
    return b;
  }
  return std::nullopt;
}

SpreadMap dA(const FieldPtr& F, Elem a) {
  FamilySpec s = fspec("dA", *F);
  s.a = F->format(a);
  return build_family(F, s);
}

SpreadMap with_b(const char* fam, const FieldPtr& F, Elem b) {
  FamilySpec s = fspec(fam, *F);
  s.b = F->format(b);
  return build_family(F, s);
}

std::uint64_t weighted_total(const Signature& s) {
  std::uint64_t t = 0;
  for (std::size_t w = 0; w < s.spectrum.size(); ++w) t += s.spectrum[w] * ((ipow(s.q, w + 1) - 1) / (s.q - 1));
  return t;
}

std::uint64_t x_w(const Signature& s, unsigned w) { return w <= s.spectrum.size() ? s.spectrum[w - 1] : 0; }

SignatureOptions opts(const std::string& mode, std::uint64_t cap = 100000000ull) {
  SignatureOptions o;
  o.mode = mode;
  o.exhaustive_cap = cap;
  return o;
}

// ----- criteria -----

Outcome c1() {
  Outcome o;
  std::mt19937_64 rng(1);
  for (auto [p, n] : {std::pair{3u, 3u}, std::pair{5u, 3u}, std::pair{3u, 5u}}) {
    const FieldPtr Fp = Field::make(p, 1, n);
    const Field& F = *Fp;
    const auto E = F.elements();
    const auto base = F.base_elements();
    std::uint64_t bad = 0;
    for (Elem x : E) {
      bad += F.trace(F.frob(x, 1)) != F.trace(x);
      bad += !F.in_base(F.trace(x)) || !F.in_base(F.norm(x));
      for (Elem c : base) bad += F.trace(F.mul(c, x)) != F.mul(c, F.trace(x));
      for (Elem y : E) {
        bad += F.frob(F.add(x, y), 1) != F.add(F.frob(x, 1), F.frob(y, 1));
        bad += F.trace(F.add(x, y)) != F.add(F.trace(x), F.trace(y));
        bad += F.norm(F.mul(x, y)) != F.mul(F.norm(x), F.norm(y));
      }
    }
    o.require(bad == 0, "field laws at q^n = " + std::to_string(F.size()));

    for (int k = 0; k < 3; ++k) {
      std::vector<Elem> co(n);
      for (auto& c : co) c = F.from_code(rng() % F.size());
      const LinPoly f(Fp, co);
      const LinPoly fh = lp_adjoint(f);
      std::uint64_t dual_bad = 0;
      for (Elem x : E)
        for (Elem y : E) dual_bad += F.trace(F.mul(x, f.eval(y))) != F.trace(F.mul(fh.eval(x), y));
      o.require(dual_bad == 0, "adjoint duality");
      const LinPoly back = lp_interpolate(Fp, [&](Elem x) { return f.eval(x); });
      o.require(back == f, "interpolation round trip");
    }
    for (long long r = 1; r < static_cast<long long>(n); ++r) {
      if (std::gcd(r, static_cast<long long>(n)) != 1) continue;
      for (Elem b : E) {
        if (b.is_zero() || F.norm(b) == F.one()) continue;
        const LinPoly H = family_H(Fp, b, r);
        const LinPoly Hi = lp_inverse(H);
        std::uint64_t inv_bad = 0;
        for (Elem x : E) inv_bad += H.eval(Hi.eval(x)) != x || Hi.eval(H.eval(x)) != x;
        o.require(inv_bad == 0, "H o H^{-1} = id");
      }
    }
  }
  if (o.pass) o.detail = "q^n in {27,125,243}, full enumeration, 0 failures";
  return o;
}

Outcome c2() {
  Outcome o;
  const FieldPtr Fp = Field::make(5, 1, 3);
  const Field& F = *Fp;
  int na = 0, nb = 0;
  for (Elem x : F.elements()) {
    if (x.is_zero()) continue;
    for (long long r : {1LL, 2LL}) {
      if (F.norm(x) != F.one()) {
        ++na;
        o.require(lp_adjoint(family_A(Fp, x, r)) == family_A(Fp, F.frob(x, r), -r), "adjoint of A");
      }
      if (!is_pm1(F, F.norm(x))) {
        ++nb;
        o.require(lp_adjoint(family_B(Fp, x, r)) == family_B(Fp, F.frob(x, -r), -r), "adjoint of B");
      }
    }
  }
  o.require(na >= 20 && nb >= 20, "at least 20 instances each");
  if (o.pass) o.detail = std::to_string(na) + " A and " + std::to_string(nb) + " B instances, coefficient-exact";
  return o;
}

Outcome c3() {
  Outcome o;
  const FieldPtr F3 = Field::make(3, 1, 3), F5 = Field::make(5, 1, 3);
  const Elem b = *find_b(*F5, std::nullopt);
  const std::vector<SpreadMap> maps{dA(F3, first_a(*F3, true)), dA(F5, first_a(*F5, false)), with_b("dB", F5, b),
                                    with_b("dAB", F5, b)};
  for (const auto& S : maps) {
    const auto& d = *S.dempwolff();
    const DempwolffCheck dc = dempwolff_condition(d.F1, d.F2, d.xi);
    const std::uint64_t half = S.field().order() / 2;
    const std::string who = S.family() + " q=" + std::to_string(S.field().q());
    o.require(dc.image1 == half && dc.image2 == half, who + " image sizes");
    o.require(dc.disjoint, who + " disjointness");
    o.require(zero_divisor_check(S), who + " zero divisors");
  }
  if (o.pass) o.detail = "dA q=3; dA, dB, dAB q=5: images (q^n-1)/2, disjoint, no zero divisors";
  return o;
}

bool same(const NucleiReport& r, std::uint64_t l, std::uint64_t m, std::uint64_t rt, std::uint64_t c) {
  return r.left == l && r.middle == m && r.right == rt && r.center == c;
}

Outcome c4() {
  Outcome o;
  const FieldPtr F3 = Field::make(3, 1, 3), F5 = Field::make(5, 1, 3);
  const SpreadMap A3 = dA(F3, first_a(*F3, true));
  const NucleiReport bf = nuclei_bruteforce(A3);
  const NucleiReport fast = nuclei_spreadset(normalize_spread(A3));
  o.require(same(bf, 27, 3, 9, 3), "brute force dA q=3");
  o.require(bf == fast, "fast path agrees with brute force");
  const Elem b = *find_b(*F5, std::nullopt);
  o.require(same(nuclei_spreadset(normalize_spread(dA(F5, first_a(*F5, false)))), 125, 5, 25, 5), "dA q=5");
  o.require(same(nuclei_spreadset(normalize_spread(with_b("dB", F5, b))), 125, 5, 25, 5), "dB q=5");
  o.require(same(nuclei_spreadset(normalize_spread(with_b("dAB", F5, b))), 125, 5, 5, 5), "dAB q=5");
  if (o.pass) o.detail = "brute force (27,3,9,3) = fast; q=5: dA, dB (125,5,25,5), dAB (125,5,5,5)";
  return o;
}

Outcome c5() {
  Outcome o;
  const FieldPtr F3 = Field::make(3, 1, 3), F35 = Field::make(3, 1, 5), F5 = Field::make(5, 1, 3);
  const Signature s33 = signature_of_set(build_linear_set(dA(F3, first_a(*F3, true))), opts("exhaustive")).sig;
  o.require(s33.size == 352 && x_w(s33, 2) == 4 && weighted_total(s33) == 364, "q=3,n=3 counts");
  const Signature s35 = signature_of_set(build_linear_set(dA(F35, first_a(*F35, true))), opts("candidates")).sig;
  o.require(s35.size == 29404 && x_w(s35, 2) == 40, "q=3,n=5 counts");
  const LinearSet L5 = build_linear_set(dA(F5, first_a(*F5, false)));
  const LongLines ll = long_lines_exhaustive(L5);
  const SpacePR sp = space_pr_test(L5, ll);
  o.require(L5.scattered() && L5.size() == 3906, "q=5,n=3 scattered size");
  o.require(sp.accepted, "q=5,n=3 space pseudoregulus test");
  if (o.pass)
    o.detail = "352/x2=4/364; 29404/x2=40; q=5 scattered 3906 with " + std::to_string(ll.long_lines.size()) +
               " long lines, accepted";
  return o;
}

Outcome c6() {
  Outcome o;
  const FieldPtr F5 = Field::make(5, 1, 3);
  const LinearSet L = build_linear_set(with_b("dB", F5, *find_b(*F5, std::nullopt)));
  o.require(L.scattered() && L.size() == 3906, "scattered, 3906 points");
  const LongLines ll = long_lines_exhaustive(L);
  o.require(ll.long_lines.size() == 126, "126 long lines");
  bool disjoint = true;
  for (std::size_t i = 0; i < ll.long_lines.size(); ++i)
    for (std::size_t j = i + 1; j < ll.long_lines.size(); ++j)
      disjoint = disjoint && !lines_meet(*F5, ll.long_lines[i].line, ll.long_lines[j].line);
  o.require(disjoint, "pairwise disjoint");
  const SpacePR sp = space_pr_test(L, ll);
  o.require(sp.accepted && sp.transversals.size() == 2, "space pseudoregulus test");
  if (sp.accepted) {
    const auto& T = sp.transversals;
    o.require(classify_line(*F5, T[0]) == QuadricClass::external && classify_line(*F5, T[1]) == QuadricClass::external,
              "transversals external");
    o.require(perp_line(*F5, T[0]) == T[1], "transversals polar");
  }
  if (o.pass) o.detail = "3906 points, 126 disjoint long lines, transversals external and polar";
  return o;
}

Outcome c7() {
  Outcome o;
  // Case iii at q=5, n=3.
  const FieldPtr F5 = Field::make(5, 1, 3);
  const auto b3 = find_b(*F5, true);
  o.require(b3.has_value(), "b with N(b^2) = -1 at q=5");
  if (!b3) return o;
  const LinearSet L3 = build_linear_set(with_b("dAB", F5, *b3));
  const auto x = weight_spectrum(L3);
  o.require(L3.size() == 3901 && x[2] == 1, "q=5,n=3 case iii counts");

  // Case i needs N(b^2) != -1; over F_5, N(b) in {2,3} forces N(b)^2 = -1, so
  // the case is run at q=7.
  o.require(!find_b(*F5, false).has_value(), "no case i parameter exists at q=5");
  const FieldPtr F7 = Field::make(7, 1, 3);
  const auto b1 = find_b(*F7, false);
  o.require(b1.has_value(), "case i parameter at q=7");
  if (!b1) return o;
  const LinearSet L1 = build_linear_set(with_b("dAB", F7, *b1));
  o.require(L1.scattered(), "q=7,n=3 scattered");
  const LongLines ll = long_lines_exhaustive(L1, 400000000ull);
  const SpacePR sp = space_pr_test(L1, ll);
  o.require(ll.long_lines.size() == 7 * 7 * 7 + 1 && sp.accepted, "q=7,n=3 pseudoregulus type");

  // Case ii line level: q=5, n=5 in candidate mode, then q=7, n=5 where
  // N(b^2) != -1 is available.
  const FieldPtr F55 = Field::make(5, 1, 5);
  const LinearSet L55 = build_linear_set(with_b("dAB", F55, *find_b(*F55, std::nullopt)));
  const LinePR r1 = line_pr_test(L55, line_r1(*F55));
  const LinePR r1p = line_pr_test(L55, line_r1_perp(*F55));
  o.require(r1.accepted() && !r1p.accepted(), "q=5,n=5 r1 passes, r1 perp fails");
  const FieldPtr F75 = Field::make(7, 1, 5);
  const auto b75 = find_b(*F75, false);
  o.require(b75.has_value(), "case ii parameter at q=7,n=5");
  if (!b75) return o;
  const auto d = *with_b("dAB", F75, *b75).dempwolff();
  const LinPoly g1 = d.F2.scaled(d.xi);
  const LinePR gr1 = line_pr_test_graph(g1), or1 = line_pr_test_oracle(build_line_graph(g1));
  const LinePR gr2 = line_pr_test_graph(d.F1), or2 = line_pr_test_oracle(build_line_graph(d.F1));
  o.require(gr1.accepted() && or1.accepted(), "q=7,n=5 r1 pseudoregulus by both routes");
  o.require(gr2.verdict == "not_pseudoregulus" && or2.verdict == "not_pseudoregulus",
            "q=7,n=5 r1 perp scattered, not pseudoregulus by both routes");
  if (o.pass)
    o.detail = "q5n3 iii: 3901, x2=1; case i at q=7 (none at q=5): 344 long lines, accepted; "
               "q5n5 r1 pass / r1 perp " + r1p.verdict + "; q7n5 r1 pass / r1 perp not_pseudoregulus";
  return o;
}

Outcome c8() {
  Outcome o;
  const FieldPtr F = Field::make(2, 1, 5);
  const LinearSet L12 = build_Lst(F, 1, 2);
  const auto ll12 = long_lines_exhaustive(L12);
  o.require(ll12.long_lines.size() == 2, "L_{1,2} has 2 long lines");
  std::string det = "L_{1,2}: 2";
  for (int t : {1, 4}) {
    const LinearSet L = build_Lst(F, 1, t);
    const auto ll = long_lines_exhaustive(L);
    const SpacePR sp = space_pr_test(L, ll);
    o.require(ll.long_lines.size() == 33 && sp.accepted, "L_{1," + std::to_string(t) + "} 33 lines, accepted");
    det += "; L_{1," + std::to_string(t) + "}: " + std::to_string(ll.long_lines.size()) + " accepted";
  }
  if (o.pass) o.detail = det;
  return o;
}

Outcome c9() {
  Outcome o;
  const FieldPtr F = Field::make(3, 1, 4);
  FamilySpec s = fspec("gd", *F);
  s.s = 2;
  s.t = 1;
  s.f = F->format(F->least_nonsquare());
  const LinearSet L = build_linear_set(build_family(F, s));
  const std::uint64_t want = (6561 - 81) / 2 + (81 - 1) / (9 - 1);
  o.require(L.size() == want, "|L| = " + std::to_string(want));
  if (o.pass) o.detail = "|L| = 3250";
  return o;
}

Outcome c10() {
  Outcome o;
  const FieldPtr F5 = Field::make(5, 1, 3);
  const SpreadMap B = with_b("dB", F5, *find_b(*F5, std::nullopt));
  const Signature sB = signature(B, opts("exhaustive")).sig;
  const Verdict vB = distinguish(sB);
  o.require(vB.compatible() == std::vector<std::string>{"GTF"}, "dB leaves only GTF");

  const QuadExt E(F5);
  std::optional<QElem> c;
  for (std::uint64_t a1 = 0; a1 < F5->size() && !c; ++a1)
    for (std::uint64_t a0 = 0; a0 < F5->size() && !c; ++a0) {
      const QElem v{F5->from_code(a0), F5->from_code(a1)};
      if (gtf_parameter_valid(E, v, 2)) c = v;
    }
  o.require(c.has_value(), "GTF parameter");
  if (!c) return o;
  const Signature sG = signature(gtf_spread(E, *c, 2), opts("exhaustive")).sig;
  o.require(sB.matches(sG), "signature(dB) matches signature(GTF)");

  const FieldPtr F55 = Field::make(5, 1, 5);
  const Elem b = *find_b(*F55, std::nullopt);
  for (const SpreadMap& S : {dA(F55, first_a(*F55, false)), with_b("dAB", F55, b)}) {
    const Verdict v = distinguish(signature(S, opts("candidates")).sig);
    for (const auto& f : v.families) {
      if (f.status == "not_applicable") continue;
      o.require(f.status == "excluded" && !f.reason.empty() && !f.citation.empty(),
                S.family() + " q=5,n=5 excludes " + f.family);
    }
  }
  if (o.pass) o.detail = "q5n3 dB: only GTF, signatures match; q5n5 dA and dAB: every applicable family excluded";
  return o;
}

Outcome c11() {
  Outcome o;
  const FieldPtr F3 = Field::make(3, 1, 3), F5 = Field::make(5, 1, 3);
  const Elem b = *find_b(*F5, std::nullopt);
  struct Inst {
    FieldPtr F;
    FamilySpec spec;
  };
  std::vector<Inst> inst;
  {
    FamilySpec s = fspec("dA", *F3);
    s.a = F3->format(first_a(*F3, true));
    inst.push_back({F3, s});
    s = fspec("dA", *F5);
    s.a = F5->format(first_a(*F5, false));
    inst.push_back({F5, s});
    for (const char* fam : {"dB", "dAB"}) {
      s = fspec(fam, *F5);
      s.b = F5->format(b);
      inst.push_back({F5, s});
    }
  }
  for (const auto& [F, spec] : inst) {
    const std::string who = spec.family + " q=" + std::to_string(F->q());
    const SpreadMap S = build_family(F, spec);
    const auto& d = *S.dempwolff();

    // Transpose: the transposed spread set is S(F1^{-1}, F2).
    const SpreadMap T = transpose_spread(S);
    const SpreadMap R = dempwolff_map(F, lp_inverse(d.F1), d.F2, d.xi);
    o.require(dempwolff_condition(lp_inverse(d.F1), d.F2, d.xi).holds(), who + " transpose condition");
    o.require(signature(R).sig.matches(signature(T).sig), who + " transpose signature");

    // Translation dual: the same family with parameters from the adjoint identities.
    FamilySpec ds = spec;
    ds.r = -spec.r;
    if (spec.family == "dA") ds.a = F->format(F->frob(F->parse(spec.a), spec.r));
    if (spec.family == "dB") ds.b = F->format(F->frob(F->parse(spec.b), -spec.r));
    if (spec.family == "dAB") ds.b = F->format(F->frob(F->parse(spec.b), spec.r));
    const SpreadMap D = translation_dual(S);
    const SpreadMap RD = build_family(F, ds);
    const auto& dd = *D.dempwolff();
    const auto& rd = *RD.dempwolff();
    o.require(dd.F1 == rd.F1 && dd.F2 == rd.F2 && dd.xi == rd.xi, who + " dual reconstruction");
    o.require(signature(D).sig.matches(signature(RD).sig), who + " dual signature");
  }
  FamilySpec k = fspec("k17", *F5);
  k.f = F5->format(F5->least_nonsquare());
  const NucleiReport nk = nuclei_spreadset(normalize_spread(transpose_spread(build_family(F5, k))));
  o.require(nk.right == 125, "transpose(k17) right nucleus q^n");
  if (o.pass) o.detail = "4 Dempwolff instances: transpose and dual reconstructed and matched; transpose(k17) right 125";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> crit{{1, 10, c1},   {2, 10, c2},   {3, 30, c3},  {4, 600, c4},
                                    {5, 300, c5},  {6, 600, c6},  {7, 1800, c7}, {8, 300, c8},
                                    {9, 120, c9},  {10, 3600, c10}, {11, 600, c11}};
  int failed = 0;
  for (const auto& c : crit) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget) {
      o.pass = false;
      o.detail += " (over budget)";
    }
    failed += !o.pass;
    std::printf("criterion %2d: %s (%.2f s, budget %.0f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, c.budget,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

#include "r2sf/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "r2sf/catalog.hpp"
#include "r2sf/error.hpp"
#include "r2sf/linset.hpp"

namespace r2sf {

using json = nlohmann::json;

namespace {

// Citation labels attached to checks. Cross-checks between independent
// routes carry a "cross-check" label instead of a formula.
namespace cite {
const char* const kCondition = "Dempwolff condition: |P_F1(F*)| = |P_F2(F*)| = (q^n-1)/2, P_F1 and xi P_F2 disjoint";
const char* const kSpread = "spread set: every nonzero matrix is nonsingular";
const char* const kNuclei = "nuclei of D_A, D_B, D_AB: left q^n, middle q, center q, right q^2 (D_A, D_B) or q (D_AB)";
const char* const kGdNuclei = "generalized Dickson nuclei: middle q^gcd(t-s,n), right q^gcd(t+s,n)";
const char* const kCount = "linear set counts: sum x_w (q^w-1) = q^k-1, sum x_w (q^w-1)/(q-1) = (q^k-1)/(q-1), |L| = 1 mod q";
const char* const kThmA = "structure of L_{D_A}";
const char* const kThmB = "structure of L_{D_B}: maximum scattered, pseudoregulus type, transversals external and polar";
const char* const kThmAB = "structure of L_{D_AB}";
const char* const kLineA = "line set L_A = {(x, A_{a,r}(x))}";
const char* const kLineB = "line set L_B = {(x, B_{b,r}(x))}: maximum scattered of pseudoregulus type";
const char* const kLst = "L_{s,t}: pseudoregulus type iff s = t or s = n-t, otherwise r and r^perp are the only long lines";
const char* const kAdjoint = "adjoints: hat A_{a,r} = A_{a^{q^r},-r}, hat B_{b,r} = B_{b^{q^-r},-r}";
const char* const kDual = "translation dual of D_A, D_B, D_AB stays in the family";
const char* const kTranspose = "transposition: S(F1,F2) and S(F1^{-1},F2) have transposed spread sets";
const char* const kKnuth = "transpose of K17 is of type K19 (right nucleus q^n)";
const char* const kGd = "non-scattered generalized Dickson spectra";
const char* const kMain = "D_B isotopic to a generalized twisted field; D_A, D_AB new for n > 3";
const char* const kQ3 = "F_3* = {1, -1}";
const char* const kCross = "cross-check: independent routes agree";
}  // namespace cite

std::uint64_t qp(std::uint64_t q, long long e) { return ipow(q, static_cast<unsigned>(e)); }

json vec_json(const Field& F, const Vec4& v, unsigned dim = 4) {
  json a = json::array();
  for (unsigned i = 0; i < dim; ++i) a.push_back(F.format(v[i]));
  return a;
}

json line_json(const Field& F, const ProjLine& l) { return json::array({vec_json(F, l.r0), vec_json(F, l.r1)}); }

json linpr_json(const Field& F, const LinePR& r) {
  json j{{"verdict", r.verdict}};
  if (r.accepted()) {
    j["m"] = r.m;
    j["transversal_points"] = json::array({json::array({F.format(r.t1[0]), F.format(r.t1[1])}),
                                           json::array({F.format(r.t2[0]), F.format(r.t2[1])})});
  }
  return j;
}

json signature_json(const Signature& s) {
  json j{{"q", s.q},
         {"n", s.n},
         {"rank", s.rank},
         {"size", s.size},
         {"spectrum", s.spectrum},
         {"scattered", s.scattered},
         {"mode", s.mode},
         {"long_line_count", s.long_line_count},
         {"long_line_count_exact", s.mode == "exhaustive"},
         {"long_lines_pseudoregulus", s.long_lines_pr},
         {"long_lines_not_pseudoregulus", s.long_lines_not_pr},
         {"long_lines_pairwise_disjoint", s.long_lines_disjoint},
         {"pseudoregulus", s.pseudoregulus},
         {"transversal_classes", s.transversal_classes},
         {"disjoint_from_quadric", s.disjoint_from_q},
         {"span_dimension", s.span_dim},
         {"contained_lines", s.contained_lines},
         {"half_weight_points", s.half_weight_points},
         {"pseudoregulus_witness_consistent", s.pseudoregulus_consistent}};
  j["transversals_polar"] = s.transversals_polar ? json(*s.transversals_polar) : json(nullptr);
  if (!s.nuclei.method.empty()) j["nuclei"] = nuclei_json(s.nuclei);
  return j;
}

json spread_json(const SpreadMap& S) {
  const char* names[4] = {"m11", "m12", "m21", "m22"};
  json j{{"family", S.family()}};
  for (int i = 0; i < 4; ++i)
    j["entries"][names[i]] = {{"x", S.entry(i).fx.to_string()}, {"y", S.entry(i).gy.to_string()}};
  if (const auto& d = S.dempwolff())
    j["dempwolff_form"] = {{"F1", d->F1.to_string()}, {"F2", d->F2.to_string()}, {"xi", S.field().format(d->xi)}};
  return j;
}

struct Ctx {
  Report& rep;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  std::uint64_t cap = 100000000ull;
};

std::string join(const std::string& pfx, const std::string& name) { return pfx.empty() ? name : pfx + "." + name; }

// ----- analysis blocks -----

json condition_block(Ctx& c, const std::string& pfx, const SpreadMap& S) {
  const Field& F = S.field();
  json out;
  const bool zdf = zero_divisor_check(S, c.workers);
  out["zero_divisor_free"] = zdf;
  c.rep.check(join(pfx, "zero_divisor_free"), zdf, cite::kSpread, true, zdf);
  if (const auto& d = S.dempwolff()) {
    const DempwolffCheck dc = dempwolff_condition(d->F1, d->F2, d->xi);
    out["condition"] = {{"image_P_F1", dc.image1},
                        {"image_P_F2", dc.image2},
                        {"expected_image", dc.expected},
                        {"xi_shift_disjoint", dc.disjoint},
                        {"holds", dc.holds()}};
    const std::uint64_t half = (F.order()) / 2;
    c.rep.check(join(pfx, "condition.image_P_F1"), dc.image1 == half, cite::kCondition, half, dc.image1);
    c.rep.check(join(pfx, "condition.image_P_F2"), dc.image2 == half, cite::kCondition, half, dc.image2);
    c.rep.check(join(pfx, "condition.xi_shift_disjoint"), dc.disjoint, cite::kCondition, true, dc.disjoint);
    c.rep.check(join(pfx, "condition_iff_zero_divisor_free"), dc.holds() == zdf, cite::kCross,
                zdf, dc.holds());
  }
  return out;
}

std::optional<NucleiReport> expected_nuclei(const Field& F, const std::string& family) {
  const std::uint64_t q = F.q();
  if (family == "dA" || family == "dB") return NucleiReport{qp(q, F.n()), q, q * q, q, ""};
  if (family == "dAB") return NucleiReport{qp(q, F.n()), q, q, q, ""};
  return std::nullopt;
}

NucleiReport nuclei_block(Ctx& c, const std::string& pfx, const SpreadMap& S, const std::string& method, json& out,
                          const std::string& family) {
  const Field& F = S.field();
  std::vector<std::string> methods;
  if (method == "all") {
    methods = {"spreadset", "sampled"};
    if (F.size() * F.size() <= 729) methods.push_back("bruteforce");
    else out["bruteforce_skipped"] = "q^{2n} > 729";
  } else if (method == "spreadset" || method == "sampled" || method == "bruteforce") {
    methods = {method};
  } else {
    throw InvalidArgument("nuclei method must be spreadset, bruteforce, sampled or all");
  }
  std::vector<NucleiReport> got;
  for (const auto& m : methods) {
    NucleiReport r;
    if (m == "spreadset") r = nuclei_spreadset(normalize_spread(S));
    else if (m == "sampled") r = nuclei_sampled(S, c.seed);
    else r = nuclei_bruteforce(S, 729, c.workers);
    out[m] = nuclei_json(r);
    got.push_back(r);
  }
  for (std::size_t i = 1; i < got.size(); ++i)
    c.rep.check(join(pfx, "nuclei." + methods[i] + "_agrees_with_" + methods[0]), got[i] == got[0], cite::kCross,
                nuclei_json(got[0]), nuclei_json(got[i]));
  if (const auto e = expected_nuclei(F, family)) {
    const NucleiReport& r = got.back();
    const std::pair<const char*, std::pair<std::uint64_t, std::uint64_t>> parts[] = {
        {"left", {e->left, r.left}}, {"middle", {e->middle, r.middle}},
        {"right", {e->right, r.right}}, {"center", {e->center, r.center}}};
    for (const auto& [name, v] : parts)
      c.rep.check(join(pfx, std::string("nuclei.") + name), v.first == v.second, cite::kNuclei, v.first, v.second);
  }
  return got.front();
}

struct LineRes {
  json j;
  unsigned rank = 0;
  std::uint64_t size = 0;
  std::vector<std::uint64_t> spectrum;  // x_1..x_n
  bool scattered = false;
  std::string verdict;  // pseudoregulus | not_pseudoregulus | not_scattered | not_long
};

// Both pseudoregulus routes on a linear set of PG(1,q^n).
LineRes line_block(Ctx& c, const std::string& pfx, const LinearSet& Ll) {
  const Field& F = Ll.field();
  LineRes r;
  r.rank = Ll.rank();
  r.size = Ll.size();
  const auto x = weight_spectrum(Ll);
  r.spectrum.assign(x.begin() + 1, x.end());
  r.scattered = Ll.scattered();
  r.j = {{"rank", r.rank}, {"size", r.size}, {"spectrum", r.spectrum}, {"scattered", r.scattered}};
  if (r.rank != F.n()) {
    r.verdict = "not_long";
    r.j["verdict"] = r.verdict;
    return r;
  }
  const LineGraph lg = line_graph(Ll);
  const LinePR g = line_pr_test_graph(lg.G);
  const LinePR o = line_pr_test_oracle(Ll);
  r.verdict = o.verdict;
  r.j["graph_route"] = linpr_json(F, g);
  r.j["oracle_route"] = linpr_json(F, o);
  r.j["verdict"] = r.verdict;
  c.rep.check(join(pfx, "pseudoregulus_routes_agree"), g.verdict == o.verdict, cite::kCross, g.verdict, o.verdict);
  return r;
}

std::vector<std::uint64_t> count_checks(Ctx& c, const std::string& pfx, const LinearSet& L) {
  const Field& F = L.field();
  const std::uint64_t q = F.q();
  const auto x = weight_spectrum(L);
  std::uint64_t vectors = 0, weighted = 0, pts = 0;
  for (std::size_t w = 1; w < x.size(); ++w) {
    vectors += x[w] * (qp(q, static_cast<long long>(w)) - 1);
    weighted += x[w] * ((qp(q, static_cast<long long>(w)) - 1) / (q - 1));
    pts += x[w];
  }
  const std::uint64_t qk = qp(q, L.rank());
  c.rep.check(join(pfx, "counts.vectors"), vectors == qk - 1, cite::kCount, qk - 1, vectors);
  c.rep.check(join(pfx, "counts.weighted_total"), weighted == (qk - 1) / (q - 1), cite::kCount, (qk - 1) / (q - 1),
              weighted);
  c.rep.check(join(pfx, "counts.size_mod_q"), L.size() % q == 1 && pts == L.size(), cite::kCount, 1,
              L.size() % q);
  return std::vector<std::uint64_t>(x.begin() + 1, x.end());
}

SignatureOptions sig_options(const Ctx& c, const std::string& mode) {
  SignatureOptions o;
  o.mode = mode;
  o.exhaustive_cap = c.cap;
  o.seed = c.seed;
  o.workers = c.workers;
  return o;
}

struct SetRes {
  SignatureRun run;
  json j;
};

SetRes linset_block(Ctx& c, const std::string& pfx, const LinearSet& L, const std::string& mode) {
  const Field& F = L.field();
  SetRes out;
  const auto spec = count_checks(c, pfx, L);
  out.run = signature_of_set(L, sig_options(c, mode));
  const Signature& s = out.run.sig;
  out.j["signature"] = signature_json(s);
  json lines = json::array();
  auto ll = out.run.lines.long_lines;
  std::sort(ll.begin(), ll.end(), [](const LineInfo& a, const LineInfo& b) { return a.line < b.line; });
  for (const auto& li : ll) {
    const LinePR pr = line_pr_test(L, li.line);
    lines.push_back({{"line", line_json(F, li.line)},
                     {"points", li.points},
                     {"quadric", to_string(classify_line(F, li.line))},
                     {"pseudoregulus", pr.verdict}});
  }
  out.j["long_lines"] = {{"mode", out.run.lines.mode},
                         {"count", ll.size()},
                         {"heavy_lines", out.run.lines.heavy.size()},
                         {"contained_lines", out.run.lines.contained},
                         {"lines", lines}};
  const SpacePR& sp = out.run.space;
  json tr = json::array();
  for (const auto& t : sp.transversals) tr.push_back({{"line", line_json(F, t)}, {"quadric", to_string(classify_line(F, t))}});
  out.j["space_pseudoregulus"] = {{"accepted", sp.accepted},
                                  {"reason", sp.reason},
                                  {"transversals", tr},
                                  {"witness_consistent", sp.witness_consistent}};
  if (s.mode == "exhaustive" && sp.accepted)
    c.rep.check(join(pfx, "transversal_witnesses_consistent"), sp.witness_consistent, cite::kCross, true,
                sp.witness_consistent);
  return out;
}

// ----- family expectations -----

struct DempLines {
  std::optional<LineRes> r1, r1p;
};

DempLines dempwolff_lines(Ctx& c, const std::string& pfx, const LinearSet& L, json& out) {
  const Field& F = L.field();
  DempLines d;
  d.r1 = line_block(c, join(pfx, "r1"), restrict_to_line(L, line_r1(F)));
  d.r1p = line_block(c, join(pfx, "r1_perp"), restrict_to_line(L, line_r1_perp(F)));
  out["r1"] = d.r1->j;
  out["r1_perp"] = d.r1p->j;
  return d;
}

void line_A_checks(Ctx& c, const std::string& pfx, const Field& F, Elem a, const LineRes& r) {
  const std::uint64_t q = F.q();
  const unsigned n = F.n();
  const Elem m1 = F.neg(F.one());
  if (F.norm(a) != m1) {
    c.rep.check(join(pfx, "scattered"), r.scattered, cite::kLineA, true, r.scattered);
    if (n > 3)
      c.rep.check(join(pfx, "not_pseudoregulus"), !(r.verdict == "pseudoregulus"), cite::kLineA, "not_pseudoregulus",
                  r.verdict);
  } else {
    const std::uint64_t x2 = (qp(q, n - 1) - 1) / (q * q - 1);
    const std::uint64_t sz = qp(q, n - 1) + x2;
    const std::uint64_t got2 = r.spectrum.size() > 1 ? r.spectrum[1] : 0;
    std::uint64_t heavier = 0;
    for (std::size_t w = 2; w < r.spectrum.size(); ++w) heavier += r.spectrum[w];
    c.rep.check(join(pfx, "x2"), got2 == x2, cite::kLineA, x2, got2);
    c.rep.check(join(pfx, "no_weight_above_2"), heavier == 0, cite::kLineA, 0, heavier);
    c.rep.check(join(pfx, "size"), r.size == sz, cite::kLineA, sz, r.size);
  }
}

void line_B_checks(Ctx& c, const std::string& pfx, const LineRes& r) {
  c.rep.check(join(pfx, "scattered"), r.scattered, cite::kLineB, true, r.scattered);
  c.rep.check(join(pfx, "pseudoregulus"), r.verdict == "pseudoregulus", cite::kLineB, "pseudoregulus", r.verdict);
}

void scattered_full_checks(Ctx& c, const std::string& pfx, const Signature& s, const char* citation) {
  const std::uint64_t q = s.q, full = (qp(q, 2 * s.n) - 1) / (q - 1);
  c.rep.check(join(pfx, "scattered"), s.scattered, citation, true, s.scattered);
  c.rep.check(join(pfx, "size"), s.size == full, citation, full, s.size);
}

void weight2_checks(Ctx& c, const std::string& pfx, const Signature& s, std::uint64_t x2, std::uint64_t size,
                    const char* citation) {
  std::uint64_t heavier = 0;
  for (std::size_t w = 2; w < s.spectrum.size(); ++w) heavier += s.spectrum[w];
  const std::uint64_t got2 = s.spectrum.size() > 1 ? s.spectrum[1] : 0;
  c.rep.check(join(pfx, "x2"), got2 == x2, citation, x2, got2);
  c.rep.check(join(pfx, "no_weight_above_2"), heavier == 0, citation, 0, heavier);
  c.rep.check(join(pfx, "size"), s.size == size, citation, size, s.size);
}

void pr_yes_checks(Ctx& c, const std::string& pfx, const Signature& s, const char* citation) {
  if (s.mode != "exhaustive") return;
  const std::uint64_t lines = qp(s.q, s.n) + 1;
  c.rep.check(join(pfx, "long_lines"), s.long_line_count == lines, citation, lines, s.long_line_count);
  c.rep.check(join(pfx, "long_lines_pairwise_disjoint"), s.long_lines_disjoint, citation, true, s.long_lines_disjoint);
  c.rep.check(join(pfx, "space_pseudoregulus"), s.pseudoregulus == "yes", citation, "yes", s.pseudoregulus);
}

void two_long_lines_checks(Ctx& c, const std::string& pfx, const Signature& s, const char* citation) {
  if (s.mode == "exhaustive") {
    c.rep.check(join(pfx, "long_lines"), s.long_line_count == 2, citation, 2, s.long_line_count);
  } else {
    c.rep.check(join(pfx, "long_lines_at_least"), s.long_line_count >= 2, citation, ">= 2", s.long_line_count);
  }
}

// Family theorems for D_A, D_B, D_AB on the computed signature and the r1,
// r1^perp restrictions.
void dempwolff_checks(Ctx& c, const std::string& pfx, const FieldPtr& Fp, const FamilySpec& spec, const Signature& s,
                      const DempLines& dl) {
  const Field& F = *Fp;
  const std::uint64_t q = F.q();
  const unsigned n = F.n();
  const Elem m1 = F.neg(F.one());
  if (spec.family == "dA") {
    const Elem a = F.parse(spec.a);
    const bool minus1 = F.norm(a) == m1;
    if (!minus1) {
      scattered_full_checks(c, pfx, s, cite::kThmA);
      if (n == 3) {
        pr_yes_checks(c, pfx, s, cite::kThmA);
      } else {
        two_long_lines_checks(c, pfx, s, cite::kThmA);
        c.rep.check(join(pfx, "space_not_pseudoregulus"), s.pseudoregulus == "no", cite::kThmA, "no", s.pseudoregulus);
      }
    } else {
      const std::uint64_t x2 = (qp(q, n - 1) - 1) / (q - 1);
      weight2_checks(c, pfx, s, x2, (qp(q, 2 * n) - qp(q, n)) / (q - 1) + 1, cite::kThmA);
    }
    // L n r1 = {(x, xi A(x))}, L n r1^perp = {(y, A(y))}: both of type L_A.
    line_A_checks(c, join(pfx, "r1"), F, a, *dl.r1);
    line_A_checks(c, join(pfx, "r1_perp"), F, a, *dl.r1p);
  } else if (spec.family == "dB") {
    scattered_full_checks(c, pfx, s, cite::kThmB);
    pr_yes_checks(c, pfx, s, cite::kThmB);
    if (s.mode == "exhaustive") {
      const std::vector<std::string> ext{"external", "external"};
      c.rep.check(join(pfx, "transversals_external"), s.transversal_classes == ext, cite::kThmB, ext,
                  s.transversal_classes);
      const bool polar = s.transversals_polar.value_or(false);
      c.rep.check(join(pfx, "transversals_polar"), polar, cite::kThmB, true, polar);
    }
    line_B_checks(c, join(pfx, "r1"), *dl.r1);
    line_B_checks(c, join(pfx, "r1_perp"), *dl.r1p);
  } else if (spec.family == "dAB") {
    const Elem b = F.parse(spec.b);
    const Elem b2 = F.mul(b, b);
    const bool minus1 = F.norm(b2) == m1;
    if (!minus1) {
      scattered_full_checks(c, pfx, s, cite::kThmAB);
      if (n == 3) {
        pr_yes_checks(c, pfx, s, cite::kThmAB);
      } else {
        two_long_lines_checks(c, pfx, s, cite::kThmAB);
        c.rep.check(join(pfx, "space_not_pseudoregulus"), s.pseudoregulus == "no", cite::kThmAB, "no",
                    s.pseudoregulus);
      }
    } else {
      const std::uint64_t x2 = (qp(q, n - 1) - 1) / (q * q - 1);
      const std::uint64_t size = (qp(q, 2 * n + 1) + qp(q, 2 * n) - qp(q, n) - 1) / (q * q - 1);
      weight2_checks(c, pfx, s, x2, size, cite::kThmAB);
    }
    // r1 carries xi B_{b,-r}, r1^perp carries A_{b^2,r}.
    line_B_checks(c, join(pfx, "r1"), *dl.r1);
    line_A_checks(c, join(pfx, "r1_perp"), F, b2, *dl.r1p);
  }
}

bool is_dempwolff(const std::string& fam) { return fam == "dA" || fam == "dB" || fam == "dAB"; }

// ----- commands on a family instance -----

struct Instance {
  FieldPtr F;
  FamilySpec spec;
  SpreadMap S;
};

Instance make_instance(const FamilySpec& spec) {
  FieldPtr F = Field::make(spec.p, spec.h, spec.n);
  SpreadMap S = build_family(F, spec);
  return {F, spec, std::move(S)};
}

json linset_section(Ctx& c, const std::string& pfx, const Instance& I, const std::string& mode, Signature* sig_out) {
  const LinearSet L = build_linear_set(I.S, c.workers);
  SetRes sr = linset_block(c, pfx, L, mode);
  json j = sr.j;
  if (is_dempwolff(I.spec.family)) {
    const DempLines dl = dempwolff_lines(c, pfx, L, j);
    dempwolff_checks(c, pfx, I.F, I.spec, sr.run.sig, dl);
  }
  if (sig_out) *sig_out = sr.run.sig;
  return j;
}

void distinguish_checks(Ctx& c, const std::string& pfx, const Signature& s, const std::string& family,
                        const Verdict& v) {
  const auto comp = v.compatible();
  if ((family == "dA" || family == "dAB") && s.n > 3) {
    c.rep.check(join(pfx, "no_known_family_compatible"), comp.empty(), cite::kMain, json::array(), comp);
  }
  if (family == "dB" && s.mode == "exhaustive") {
    const std::vector<std::string> want{"GTF"};
    c.rep.check(join(pfx, "only_gtf_compatible"), comp == want, cite::kMain, want, comp);
  }
}

json distinguish_section(Ctx& c, const std::string& pfx, const SpreadMap& S, const std::string& family,
                         const std::string& mode, Signature* sig_out = nullptr) {
  const SignatureRun run = signature(S, sig_options(c, mode));
  const Verdict v = distinguish(run.sig);
  distinguish_checks(c, pfx, run.sig, family, v);
  if (sig_out) *sig_out = run.sig;
  return {{"signature", signature_json(run.sig)}, {"verdicts", to_json(v)}, {"compatible", v.compatible()},
          {"wording", "compatible means not excluded by recorded invariants"}};
}

// Points of both linear sets agree after the X1 <-> X2 swap, with weights.
bool swapped_equal(const LinearSet& A, const LinearSet& B) {
  if (A.size() != B.size()) return false;
  for (std::size_t i = 0; i < A.size(); ++i) {
    const Vec4 p = normalize_point(A.field(), swap12(A.point(i)));
    if (B.weight_of(p) != A.weight(i)) return false;
  }
  return true;
}

bool pointwise_equal(const LinearSet& A, const LinearSet& B) {
  if (A.size() != B.size()) return false;
  for (std::size_t i = 0; i < A.size(); ++i)
    if (B.weight_of(A.point(i)) != A.weight(i)) return false;
  return true;
}

std::string derive_mode(const Ctx& c, const Field& F, const std::string& mode) {
  if (mode != "auto") return mode;
  const std::uint64_t approx = (F.size() * F.size() - 1) / (F.q() - 1);
  return approx * approx <= c.cap ? "exhaustive" : "candidates";
}

json transpose_section(Ctx& c, const std::string& pfx, const Instance& I, const std::string& mode) {
  const Field& F = *I.F;
  json j;
  const SpreadMap T = transpose_spread(I.S);
  j["transpose"] = spread_json(T);
  const bool zdf = zero_divisor_check(T, c.workers);
  c.rep.check(join(pfx, "transpose.zero_divisor_free"), zdf, cite::kSpread, true, zdf);

  const NucleiReport nS = nuclei_spreadset(normalize_spread(I.S));
  const NucleiReport nT = nuclei_spreadset(normalize_spread(T));
  j["nuclei"] = nuclei_json(nS);
  j["transpose_nuclei"] = nuclei_json(nT);
  const bool swapped = nT.left == nS.left && nT.center == nS.center && nT.middle == nS.right && nT.right == nS.middle;
  c.rep.check(join(pfx, "transpose.middle_right_swapped"), swapped, cite::kTranspose,
              json{{"middle", nS.right}, {"right", nS.middle}}, json{{"middle", nT.middle}, {"right", nT.right}});
  if (I.spec.family == "k17") {
    const std::uint64_t qn = qp(F.q(), F.n());
    c.rep.check(join(pfx, "transpose.right_nucleus"), nT.right == qn, cite::kKnuth, qn, nT.right);
  }

  const LinearSet LS = build_linear_set(I.S, c.workers);
  const LinearSet LT = build_linear_set(T, c.workers);
  const bool sw = swapped_equal(LS, LT);
  c.rep.check(join(pfx, "transpose.linear_set_is_swap12"), sw, cite::kCross, true, sw);

  if (const auto& d = I.S.dempwolff()) {
    const SpreadMap R = dempwolff_map(I.F, lp_inverse(d->F1), d->F2, d->xi, I.S.family() + "^t");
    j["reconstructed"] = spread_json(R);
    const DempwolffCheck dc = dempwolff_condition(lp_inverse(d->F1), d->F2, d->xi);
    c.rep.check(join(pfx, "transpose.reconstructed_condition"), dc.holds(), cite::kCondition, true, dc.holds());
    const LinearSet LR = build_linear_set(R, c.workers);
    const bool same = pointwise_equal(LR, LT);
    c.rep.check(join(pfx, "transpose.reconstructed_linear_set_equal"), same, cite::kTranspose, true, same);
    const std::string md = derive_mode(c, F, mode);
    SignatureRun sR = signature(R, sig_options(c, md));
    SignatureRun sT = signature(T, sig_options(c, md));
    j["signature_reconstructed"] = signature_json(sR.sig);
    j["signature_transpose"] = signature_json(sT.sig);
    const bool match = sR.sig.matches(sT.sig);
    c.rep.check(join(pfx, "transpose.signature_match"), match, cite::kTranspose, true, match);
  }
  return j;
}

// Spec of the translation dual inside the same family.
FamilySpec dual_spec(const Field& F, const FamilySpec& s) {
  FamilySpec d = s;
  d.r = -s.r;
  if (s.family == "dA") d.a = F.format(F.frob(F.parse(s.a), s.r));
  else if (s.family == "dB") d.b = F.format(F.frob(F.parse(s.b), -s.r));
  else if (s.family == "dAB") d.b = F.format(F.frob(F.parse(s.b), s.r));
  return d;
}

json dual_section(Ctx& c, const std::string& pfx, const Instance& I, const std::string& mode) {
  const Field& F = *I.F;
  json j;
  const SpreadMap D = translation_dual(I.S);
  j["translation_dual"] = spread_json(D);
  const bool zdf = zero_divisor_check(D, c.workers);
  c.rep.check(join(pfx, "dual.zero_divisor_free"), zdf, cite::kSpread, true, zdf);
  const SpreadMap DD = translation_dual(D);
  bool invol = true;
  for (int i = 0; i < 4; ++i)
    invol = invol && DD.entry(i).fx == I.S.entry(i).fx && DD.entry(i).gy == I.S.entry(i).gy;
  c.rep.check(join(pfx, "dual.involution"), invol, cite::kCross, true, invol);
  if (!is_dempwolff(I.spec.family)) return j;

  const FamilySpec ds = dual_spec(F, I.spec);
  j["reconstructed_spec"] = spec_json(ds);
  const SpreadMap R = build_family(I.F, ds);
  const auto& dD = D.dempwolff();
  const auto& dR = R.dempwolff();
  const bool coeff = dD && dR && dD->F1 == dR->F1 && dD->F2 == dR->F2 && dD->xi == dR->xi;
  c.rep.check(join(pfx, "dual.reconstructed_coefficients"), coeff, cite::kDual,
              json{{"F1", dR->F1.to_string()}, {"F2", dR->F2.to_string()}},
              dD ? json{{"F1", dD->F1.to_string()}, {"F2", dD->F2.to_string()}} : json(nullptr));
  const std::string md = derive_mode(c, F, mode);
  SignatureRun sD = signature(D, sig_options(c, md));
  SignatureRun sR = signature(R, sig_options(c, md));
  j["signature_dual"] = signature_json(sD.sig);
  j["signature_reconstructed"] = signature_json(sR.sig);
  const bool match = sD.sig.matches(sR.sig);
  c.rep.check(join(pfx, "dual.signature_match"), match, cite::kDual, true, match);
  const auto e = expected_nuclei(F, ds.family);
  const bool nuc = e && *e == sD.sig.nuclei;
  c.rep.check(join(pfx, "dual.nuclei"), nuc, cite::kNuclei, e ? nuclei_json(*e) : json(nullptr),
              nuclei_json(sD.sig.nuclei));
  return j;
}

// ----- parameter helpers -----

Elem first_norm(const Field& F, const std::function<bool(Elem)>& pred) {
  return first_by_code(F, [&](Elem x) { return !x.is_zero() && pred(F.norm(x)); });
}

bool is_pm1(const Field& F, Elem v) { return v == F.one() || v == F.neg(F.one()); }

FamilySpec fam_spec(const char* fam, unsigned p, unsigned n) {
  FamilySpec s;
  s.family = fam;
  s.p = p;
  s.h = 1;
  s.n = n;
  s.r = 1;
  return s;
}

FamilySpec dA_spec(const FieldPtr& F, bool minus1) {
  FamilySpec s = fam_spec("dA", F->p(), F->n());
  const Elem m1 = F->neg(F->one());
  s.a = F->format(first_norm(*F, [&](Elem nv) { return minus1 ? nv == m1 : !is_pm1(*F, nv); }));
  return s;
}

FamilySpec b_spec(const char* fam, const FieldPtr& F, std::optional<bool> b2_minus1 = std::nullopt) {
  FamilySpec s = fam_spec(fam, F->p(), F->n());
  const Elem m1 = F->neg(F->one());
  s.b = F->format(first_by_code(*F, [&](Elem b) {
    if (b.is_zero() || is_pm1(*F, F->norm(b))) return false;
    return !b2_minus1 || ((F->norm(F->mul(b, b)) == m1) == *b2_minus1);
  }));
  return s;
}

// First valid GTF parameter in code order (a1 outer, a0 inner).
QElem first_gtf_c(const QuadExt& E, long long t) {
  const Field& F = E.base();
  for (std::uint64_t a1 = 0; a1 < F.size(); ++a1)
    for (std::uint64_t a0 = 0; a0 < F.size(); ++a0) {
      const QElem c{F.from_code(a0), F.from_code(a1)};
      if (gtf_parameter_valid(E, c, t)) return c;
    }
  throw InvalidArgument("no valid GTF parameter");
}

json instance_header(const Instance& I) {
  return {{"field", field_json(*I.F)}, {"spec", spec_json(I.spec)}, {"spread", spread_json(I.S)}};
}

// Condition, nuclei, linear set and both derivatives of one Dempwolff instance.
json full_instance(Ctx& c, const std::string& pfx, const FamilySpec& spec, const std::string& mode,
                   const std::string& nuclei, bool derive, Signature* sig_out = nullptr) {
  const Instance I = make_instance(spec);
  json j = instance_header(I);
  j["condition"] = condition_block(c, pfx, I.S);
  json nj;
  nuclei_block(c, pfx, I.S, nuclei, nj, spec.family);
  j["nuclei"] = nj;
  j["linear_set"] = linset_section(c, pfx, I, mode, sig_out);
  if (derive) {
    j["transpose"] = transpose_section(c, pfx, I, mode);
    j["translation_dual"] = dual_section(c, pfx, I, mode);
  }
  return j;
}

// ----- suites -----

json suite_q3n3(Ctx& c) {
  json R;
  const FieldPtr F = Field::make(3, 1, 3);
  FamilySpec a = fam_spec("dA", 3, 3);
  a.a = "g";
  const Elem ng = F->norm(F->gen());
  c.rep.check("q3n3.norm_g_is_minus_1", ng == F->neg(F->one()), cite::kQ3, F->format(F->neg(F->one())), F->format(ng));
  Signature s;
  R["dA"] = full_instance(c, "q3n3.dA", a, "exhaustive", "all", true, &s);
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < s.spectrum.size(); ++w) total += s.spectrum[w] * ((qp(3, w + 1) - 1) / 2);
  c.rep.check("q3n3.dA.weighted_total_364", total == 364, cite::kCount, 364, total);

  // D_B needs N(b) != +-1, impossible over F_3.
  FamilySpec b = fam_spec("dB", 3, 3);
  b.b = "g";
  std::string msg;
  try {
    build_family(F, b);
  } catch (const ConstraintViolation& e) {
    msg = e.what();
  }
  const std::string want = "N_q(b) ∈ {±1} for all b when q=3";
  R["dB"] = {{"spec", spec_json(b)}, {"error", msg}};
  c.rep.check("q3n3.dB.rejected", msg == want, cite::kQ3, want, msg);

  FamilySpec k = fam_spec("k17", 3, 3);
  k.f = F->format(F->least_nonsquare());
  const Instance K = make_instance(k);
  json kj = instance_header(K);
  json kn;
  nuclei_block(c, "q3n3.k17", K.S, "all", kn, "k17");
  kj["nuclei"] = kn;
  kj["transpose"] = transpose_section(c, "q3n3.k17", K, "exhaustive");
  R["k17"] = kj;
  return R;
}

json adjoint_identities(Ctx& c, const std::string& pfx, const FieldPtr& Fp) {
  const Field& F = *Fp;
  const long long n = F.n();
  std::uint64_t countA = 0, countB = 0, failA = 0, failB = 0;
  json bad = json::array();
  for (Elem x : F.elements()) {
    if (x.is_zero()) continue;
    for (long long r = 1; r < n; ++r) {
      if (std::gcd(r, n) != 1) continue;
      if (F.norm(x) != F.one()) {
        ++countA;
        if (!(lp_adjoint(family_A(Fp, x, r)) == family_A(Fp, F.frob(x, r), -r))) {
          ++failA;
          bad.push_back({{"A", F.format(x)}, {"r", r}});
        }
      }
      if (!is_pm1(F, F.norm(x))) {
        ++countB;
        if (!(lp_adjoint(family_B(Fp, x, r)) == family_B(Fp, F.frob(x, -r), -r))) {
          ++failB;
          bad.push_back({{"B", F.format(x)}, {"r", r}});
        }
      }
    }
  }
  c.rep.check(join(pfx, "adjoint_A.instances"), countA >= 20 && failA == 0, cite::kAdjoint,
              json{{"failures", 0}, {"instances", ">= 20"}}, json{{"failures", failA}, {"instances", countA}});
  c.rep.check(join(pfx, "adjoint_B.instances"), countB >= 20 && failB == 0, cite::kAdjoint,
              json{{"failures", 0}, {"instances", ">= 20"}}, json{{"failures", failB}, {"instances", countB}});
  return {{"A_instances", countA}, {"B_instances", countB}, {"failures", bad}};
}

json suite_q5n3(Ctx& c) {
  json R;
  const FieldPtr F = Field::make(5, 1, 3);
  R["adjoints"] = adjoint_identities(c, "q5n3", F);

  R["dA"] = full_instance(c, "q5n3.dA", dA_spec(F, false), "exhaustive", "all", true);
  {
    const FamilySpec s = dA_spec(F, true);
    const Instance I = make_instance(s);
    json j = instance_header(I);
    j["linear_set"] = linset_section(c, "q5n3.dA_norm_minus_1", I, "exhaustive", nullptr);
    R["dA_norm_minus_1"] = j;
  }
  Signature sB;
  const FamilySpec bs = b_spec("dB", F);
  R["dB"] = full_instance(c, "q5n3.dB", bs, "exhaustive", "all", true, &sB);
  FamilySpec abs = bs;
  abs.family = "dAB";
  const Elem b = F->parse(abs.b);
  const bool forced = F->norm(F->mul(b, b)) == F->neg(F->one());
  c.rep.check("q5n3.dAB.norm_b2_is_minus_1", forced, cite::kThmAB, true, forced);
  R["dAB"] = full_instance(c, "q5n3.dAB", abs, "exhaustive", "all", true);

  // D_B against a generalized twisted field with the same nuclei profile.
  {
    const QuadExt E(F);
    const long long t = 2;
    const QElem cc = first_gtf_c(E, t);
    const SpreadMap G = gtf_spread(E, cc, t);
    FamilySpec gs = fam_spec("gtf", 5, 3);
    gs.t = t;
    gs.c = E.format(cc);
    const SignatureRun sg = signature(G, sig_options(c, "exhaustive"));
    json dj = distinguish_section(c, "q5n3.dB.distinguish", build_family(F, bs), "dB", "exhaustive");
    // The linear-set signature carries no nuclei; attach them before comparing.
    Signature sBn = sB;
    sBn.nuclei = nuclei_spreadset(normalize_spread(build_family(F, bs)));
    const bool m = sBn.matches(sg.sig);
    c.rep.check("q5n3.dB.signature_matches_gtf", m, cite::kMain, true, m);
    R["gtf"] = {{"spec", spec_json(gs)}, {"signature", signature_json(sg.sig)}};
    R["dB_distinguish"] = dj;
    R["gtf_nuclei"] = gtf_nuclei_measurement(F);
  }

  // Case i of D_AB needs N(b^2) != -1, which needs q != 5.
  {
    const FieldPtr F7 = Field::make(7, 1, 3);
    const FamilySpec s7 = b_spec("dAB", F7, false);
    Ctx c7 = c;
    c7.cap = std::max<std::uint64_t>(c.cap, 400000000ull);
    R["q7n3_dAB"] = full_instance(c7, "q7n3.dAB", s7, "exhaustive", "spreadset", false);
  }
  return R;
}

json suite_q3n5(Ctx& c) {
  json R;
  const FieldPtr F = Field::make(3, 1, 5);
  const FamilySpec s = dA_spec(F, true);
  R["dA"] = full_instance(c, "q3n5.dA", s, "candidates", "all", false);
  return R;
}

json lst_section(Ctx& c, const std::string& pfx, const FieldPtr& F, long long s, long long t, const std::string& mode) {
  const LinearSet L = build_Lst(F, s, t, c.workers);
  SetRes sr = linset_block(c, pfx, L, mode);
  const Signature& sg = sr.run.sig;
  const long long n = F->n();
  const bool scat_case = std::gcd(s, n) == 1 && std::gcd(t, n) == 1 && s > 0 && t > 0;
  if (scat_case) {
    scattered_full_checks(c, pfx, sg, cite::kLst);
    if (s == t || s == n - t) {
      pr_yes_checks(c, pfx, sg, cite::kLst);
    } else if (sg.mode == "exhaustive") {
      c.rep.check(join(pfx, "long_lines"), sg.long_line_count == 2, cite::kLst, 2, sg.long_line_count);
      // In these coordinates the two long lines are X2 = X3 = 0 and X0 = X1 = 0.
      const Field& Fr = *F;
      const Elem o = Fr.one(), z{};
      const Vec4 e0{o, z, z, z}, e1{z, o, z, z}, e2{z, z, o, z}, e3{z, z, z, o};
      const LineInfo r = line_weight(L, line_through(Fr, e0, e1)), rp = line_weight(L, line_through(Fr, e2, e3));
      const bool rr = r.weight == n && rp.weight == n;
      c.rep.check(join(pfx, "long_lines_are_coordinate_lines"), rr, cite::kLst, true, rr);
    }
  }
  json j = sr.j;
  j["field"] = field_json(*F);
  j["s"] = s;
  j["t"] = t;
  return j;
}

json suite_q2n5(Ctx& c) {
  json R;
  const FieldPtr F = Field::make(2, 1, 5);
  for (auto [s, t] : {std::pair{1, 2}, std::pair{1, 1}, std::pair{1, 4}}) {
    const std::string key = "L_" + std::to_string(s) + "_" + std::to_string(t);
    R[key] = lst_section(c, "q2n5." + key, F, s, t, "exhaustive");
  }
  return R;
}

json gd_instance(Ctx& c, const std::string& pfx, unsigned n, long long s, long long t) {
  FamilySpec sp = fam_spec("gd", 3, n);
  const FieldPtr F = Field::make(3, 1, n);
  sp.s = s;
  sp.t = t;
  sp.f = F->format(F->least_nonsquare());
  const Instance I = make_instance(sp);
  json j = instance_header(I);
  const std::uint64_t q = F->q(), Qn = qp(q, n);
  const long long h = std::gcd(s, static_cast<long long>(n)), k = std::gcd(t, static_cast<long long>(n));

  const NucleiReport nr = nuclei_spreadset(normalize_spread(I.S));
  j["nuclei"] = nuclei_json(nr);
  const std::uint64_t mid = qp(q, std::gcd(t - s, static_cast<long long>(n)));
  const std::uint64_t right = qp(q, std::gcd(t + s, static_cast<long long>(n)));
  c.rep.check(join(pfx, "nuclei.middle"), nr.middle == mid, cite::kGdNuclei, mid, nr.middle);
  c.rep.check(join(pfx, "nuclei.right"), nr.right == right, cite::kGdNuclei, right, nr.right);

  const LinearSet L = build_linear_set(I.S, c.workers);
  const auto x = count_checks(c, pfx, L);
  std::uint64_t size = (h > 1 && k > 1) ? (Qn - 1) * (Qn - 1) / (q - 1) : (Qn * Qn - Qn) / (q - 1);
  if (h > 1) size += (Qn - 1) / (qp(q, h) - 1);
  if (k > 1) size += (Qn - 1) / (qp(q, k) - 1);
  c.rep.check(join(pfx, "size"), L.size() == size, cite::kGd, size, L.size());

  // Heavy points: on r (X1 = X2 = 0) with weight h, on r^perp (X0 = X3 = 0) with weight k.
  std::uint64_t on_r = 0, on_rp = 0, misplaced = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (L.weight(i) <= 1) continue;
    const Vec4 p = L.point(i);
    const unsigned w = L.weight(i);
    if (p[1].is_zero() && p[2].is_zero() && w == h) ++on_r;
    else if (p[0].is_zero() && p[3].is_zero() && w == k) ++on_rp;
    else ++misplaced;
  }
  const std::uint64_t want_r = h > 1 ? (Qn - 1) / (qp(q, h) - 1) : 0;
  const std::uint64_t want_rp = k > 1 ? (Qn - 1) / (qp(q, k) - 1) : 0;
  c.rep.check(join(pfx, "heavy_points_on_r"), on_r == want_r, cite::kGd, want_r, on_r);
  c.rep.check(join(pfx, "heavy_points_on_r_perp"), on_rp == want_rp, cite::kGd, want_rp, on_rp);
  c.rep.check(join(pfx, "heavy_points_elsewhere"), misplaced == 0, cite::kGd, 0, misplaced);
  j["linear_set"] = {{"size", L.size()}, {"spectrum", x}, {"gcd_s_n", h}, {"gcd_t_n", k}};
  return j;
}

json suite_q3n4_gd(Ctx& c) {
  json R;
  R["gd_q3n4_s2_t1"] = gd_instance(c, "q3n4.gd_s2_t1", 4, 2, 1);
  R["gd_q3n4_s1_t2"] = gd_instance(c, "q3n4.gd_s1_t2", 4, 1, 2);
  R["gd_q3n6_s2_t3"] = gd_instance(c, "q3n6.gd_s2_t3", 6, 2, 3);
  return R;
}

// Line-level test of the two restrictions of D_AB where the full linear set
// is too large to enumerate.
json dab_lines_only(Ctx& c, const std::string& pfx, const FieldPtr& Fp, const FamilySpec& spec) {
  const Instance I = make_instance(spec);
  const auto& d = *I.S.dempwolff();
  json j = instance_header(I);
  const LineRes r1 = line_block(c, join(pfx, "r1"), build_line_graph(d.F2.scaled(d.xi)));
  const LineRes rp = line_block(c, join(pfx, "r1_perp"), build_line_graph(d.F1));
  j["r1"] = r1.j;
  j["r1_perp"] = rp.j;
  const Elem b = Fp->parse(spec.b);
  const bool case_ii = Fp->norm(Fp->mul(b, b)) != Fp->neg(Fp->one());
  c.rep.check(join(pfx, "norm_b2_not_minus_1"), case_ii, cite::kThmAB, true, case_ii);
  c.rep.check(join(pfx, "r1.pseudoregulus"), r1.verdict == "pseudoregulus", cite::kThmAB, "pseudoregulus", r1.verdict);
  c.rep.check(join(pfx, "r1_perp.scattered"), rp.scattered, cite::kLineA, true, rp.scattered);
  c.rep.check(join(pfx, "r1_perp.not_pseudoregulus"), rp.verdict == "not_pseudoregulus", cite::kThmAB,
              "not_pseudoregulus", rp.verdict);
  return j;
}

json suite_q5n5(Ctx& c) {
  json R;
  const FieldPtr F = Field::make(5, 1, 5);
  {
    const FamilySpec s = dA_spec(F, false);
    const Instance I = make_instance(s);
    json j = instance_header(I);
    json nj;
    nuclei_block(c, "q5n5.dA", I.S, "spreadset", nj, "dA");
    j["nuclei"] = nj;
    j["linear_set"] = linset_section(c, "q5n5.dA", I, "candidates", nullptr);
    j["distinguish"] = distinguish_section(c, "q5n5.dA", I.S, "dA", "candidates");
    R["dA"] = j;
  }
  {
    const FamilySpec s = b_spec("dAB", F);
    const Instance I = make_instance(s);
    json j = instance_header(I);
    json nj;
    nuclei_block(c, "q5n5.dAB", I.S, "spreadset", nj, "dAB");
    j["nuclei"] = nj;
    j["linear_set"] = linset_section(c, "q5n5.dAB", I, "candidates", nullptr);
    j["distinguish"] = distinguish_section(c, "q5n5.dAB", I.S, "dAB", "candidates");
    R["dAB"] = j;
  }
  {
    const FieldPtr F7 = Field::make(7, 1, 5);
    R["q7n5_dAB_lines"] = dab_lines_only(c, "q7n5.dAB", F7, b_spec("dAB", F7, false));
  }
  return R;
}

// ----- command dispatch -----

void cmd_family(Ctx& c, const RunConfig& cfg) {
  const Instance I = make_instance(cfg.spec);
  Report& rep = c.rep;
  rep.results = instance_header(I);
  const std::string& cmd = cfg.command;
  if (cmd == "build") return;
  if (cmd == "check") {
    rep.results["check"] = condition_block(c, "", I.S);
  } else if (cmd == "nuclei") {
    json nj;
    nuclei_block(c, "", I.S, cfg.nuclei, nj, I.spec.family);
    rep.results["nuclei"] = nj;
  } else if (cmd == "linset") {
    rep.results["linear_set"] = linset_section(c, "", I, cfg.mode, nullptr);
  } else if (cmd == "derive") {
    if (cfg.derive == "transpose") rep.results["derive"] = transpose_section(c, "", I, cfg.mode);
    else if (cfg.derive == "translation-dual") rep.results["derive"] = dual_section(c, "", I, cfg.mode);
    else throw InvalidArgument("derive needs --transpose or --translation-dual");
  } else if (cmd == "distinguish") {
    rep.results["distinguish"] = distinguish_section(c, "", I.S, I.spec.family, cfg.mode);
    rep.results["known_table"] = json::array();
    for (const auto& r : known_table(I.F->q(), I.F->n())) rep.results["known_table"].push_back(to_json(r));
  } else {
    throw InvalidArgument("unknown command '" + cmd + "'");
  }
}

json config_json(const RunConfig& cfg) {
  json j{{"command", cfg.command}, {"mode", cfg.mode}, {"nuclei", cfg.nuclei}, {"cap", cfg.cap}, {"seed", cfg.seed}};
  if (!cfg.derive.empty()) j["derive"] = cfg.derive;
  if (!cfg.suite.empty()) j["suite"] = cfg.suite;
  if (cfg.command == "lst") {
    j["field"] = {{"p", cfg.spec.p}, {"h", cfg.spec.h}, {"n", cfg.spec.n}};
    j["s"] = cfg.spec.s;
    j["t"] = cfg.spec.t;
  } else if (cfg.command != "verify-paper") {
    j["spec"] = spec_json(cfg.spec);
  }
  return j;
}

}  // namespace

// ----- public -----

Elem first_by_code(const Field& F, const std::function<bool(Elem)>& pred) {
  for (std::uint64_t c = 0; c < F.size(); ++c) {
    const Elem x = F.from_code(c);
    if (pred(x)) return x;
  }
  throw InvalidArgument("no field element satisfies the requested property");
}

json field_json(const Field& F) {
  return {{"p", F.p()},
          {"h", F.h()},
          {"n", F.n()},
          {"q", F.q()},
          {"size", F.size()},
          {"modulus", F.modulus_string()},
          {"generator", "g"}};
}

json spec_json(const FamilySpec& s) {
  json j{{"family", s.family}, {"p", s.p}, {"h", s.h}, {"n", s.n}};
  if (s.family == "gd") {
    j["s"] = s.s;
    j["t"] = s.t;
  } else if (s.family == "gtf") {
    j["t"] = s.t;
  } else {
    j["r"] = s.r;
  }
  for (const auto& [k, v] : {std::pair{"a", &s.a}, std::pair{"b", &s.b}, std::pair{"c", &s.c}, std::pair{"f", &s.f},
                             std::pair{"g", &s.g}, std::pair{"xi", &s.xi}})
    if (!v->empty()) j[k] = *v;
  return j;
}

json nuclei_json(const NucleiReport& n) {
  return {{"left", n.left}, {"middle", n.middle}, {"right", n.right}, {"center", n.center}, {"method", n.method}};
}

Report::Report(const RunConfig& cfg) : config_(config_json(cfg)) {}

void Report::check(std::string name, bool pass, std::string citation, json expected, json observed) {
  checks.push_back({std::move(name), pass, std::move(citation), std::move(expected), std::move(observed)});
}

const Check* Report::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

int Report::exit_code() const {
  if (!error_type.empty()) return error_type == "InternalError" ? 1 : 2;
  return first_failure() ? 1 : 0;
}

json Report::to_json() const {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = "r2sf";
  j["config"] = config_;
  j["conventions"] = {
      {"modulus", "lex-first monic primitive polynomial, coefficients from the leading end"},
      {"elements", "0, g^k, or [c0,c1,...] base-p coefficients; parameter choices take the least integer code"},
      {"nuclei", "computed for the semifield of the normalized spread set M(1,0)^{-1} S; left nucleus of a rank-two "
                 "spread set is q^n, transposition exchanges middle and right"},
      {"long_lines", "exact counts only in exhaustive mode; candidate mode gives lower bounds"}};
  j["results"] = results;
  json cs = json::array();
  std::size_t passed = 0;
  for (const auto& c : checks) {
    cs.push_back({{"name", c.name},
                  {"pass", c.pass},
                  {"citation", c.citation},
                  {"expected", c.expected},
                  {"observed", c.observed}});
    passed += c.pass;
  }
  j["checks"] = cs;
  j["counts"] = {{"total", checks.size()}, {"passed", passed}, {"failed", checks.size() - passed}};
  const Check* f = first_failure();
  j["first_failure"] = f ? json{{"name", f->name}, {"citation", f->citation}, {"expected", f->expected},
                                {"observed", f->observed}}
                         : json(nullptr);
  j["error"] = error_type.empty() ? json(nullptr) : json{{"type", error_type}, {"message", error_message}};
  const int code = exit_code();
  j["exit_code"] = code;
  j["status"] = code == 0 ? "pass" : (code == 1 ? "fail" : "error");
  return j;
}

std::string Report::summary() const {
  std::ostringstream os;
  const int code = exit_code();
  std::size_t passed = 0;
  for (const auto& c : checks) passed += c.pass;
  os << "r2sf " << config_.value("command", std::string()) << ": "
     << (code == 0 ? "PASS" : code == 1 ? "FAIL" : "ERROR") << " (" << passed << "/" << checks.size()
     << " checks)\n";
  if (!error_type.empty()) os << "  error [" << error_type << "]: " << error_message << "\n";
  for (const auto& c : checks) {
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name;
    if (!c.pass) os << ": expected " << c.expected.dump() << ", observed " << c.observed.dump();
    os << "\n";
  }
  if (const Check* f = first_failure()) os << "first failure: " << f->name << " (" << f->citation << ")\n";
  return os.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"q3n3", "q5n3", "q3n5", "q2n5-lst", "q3n4-gd", "q5n5-candidates"};
  return names;
}

Report run(const RunConfig& cfg) {
  Report rep(cfg);
  Ctx c{rep, std::max(1u, cfg.workers), cfg.seed, cfg.cap};
  try {
    if (cfg.mode != "exhaustive" && cfg.mode != "candidates" && cfg.mode != "auto")
      throw InvalidArgument("mode must be exhaustive, candidates or auto");
    if (cfg.command == "verify-paper") {
      const std::string& s = cfg.suite;
      if (s == "q3n3") rep.results = suite_q3n3(c);
      else if (s == "q5n3") rep.results = suite_q5n3(c);
      else if (s == "q3n5") rep.results = suite_q3n5(c);
      else if (s == "q2n5-lst") rep.results = suite_q2n5(c);
      else if (s == "q3n4-gd") rep.results = suite_q3n4_gd(c);
      else if (s == "q5n5-candidates") rep.results = suite_q5n5(c);
      else throw InvalidArgument("unknown suite '" + s + "'");
    } else if (cfg.command == "lst") {
      const FieldPtr F = Field::make(cfg.spec.p, cfg.spec.h, cfg.spec.n);
      const long long n = F->n();
      if (cfg.spec.s < 0 || cfg.spec.t < 0 || cfg.spec.s >= n || cfg.spec.t >= n)
        throw ConstraintViolation("s and t must lie in {0, ..., n-1}");
      rep.results = lst_section(c, "", F, cfg.spec.s, cfg.spec.t, cfg.mode);
    } else {
      cmd_family(c, cfg);
    }
  } catch (const InternalError& e) {
    rep.error_type = "InternalError";
    rep.error_message = e.what();
  } catch (const ConstraintViolation& e) {
    rep.error_type = "ConstraintViolation";
    rep.error_message = e.what();
  } catch (const CapExceeded& e) {
    rep.error_type = "CapExceeded";
    rep.error_message = e.what();
  } catch (const InvalidArgument& e) {
    rep.error_type = "InvalidArgument";
    rep.error_message = e.what();
  }
  return rep;
}

}  // namespace r2sf

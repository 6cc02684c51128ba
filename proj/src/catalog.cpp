#include "r2sf/catalog.hpp"

#include <numeric>

#include "r2sf/error.hpp"

namespace r2sf {

namespace {

constexpr const char* kCompatible = "not excluded by recorded invariants";

std::uint64_t qp(std::uint64_t q, unsigned e) { return ipow(q, e); }

unsigned g(long long a, long long b) { return static_cast<unsigned>(std::gcd(std::llabs(a), std::llabs(b))); }

std::string pair_str(std::uint64_t a, std::uint64_t b) {
  return "(" + (a ? std::to_string(a) : std::string("?")) + ", " + (b ? std::to_string(b) : std::string("?")) + ")";
}

bool profile_matches(const NucleiProfile& p, std::uint64_t m, std::uint64_t r) {
  auto eq = [](std::uint64_t want, std::uint64_t got) { return want == 0 || want == got; };
  // A family and its transpose: middle and right exchange.
  return (eq(p.middle, m) && eq(p.right, r)) || (eq(p.middle, r) && eq(p.right, m));
}

std::string profiles_str(const std::vector<NucleiProfile>& ps) {
  std::string s;
  for (const auto& p : ps) {
    if (!s.empty()) s += ", ";
    s += pair_str(p.middle, p.right);
    if (!p.params.empty()) s += " [" + p.params + "]";
  }
  return "{" + s + "}";
}

struct GdClass {
  unsigned s, t;
  bool scattered;
};

std::vector<GdClass> gd_classes(unsigned n, bool zero) {
  std::vector<GdClass> out;
  for (unsigned s = 0; s < n; ++s)
    for (unsigned t = 0; t < n; ++t) {
      if (s == 0 && t == 0) continue;
      if (std::gcd(std::gcd(s, t), n) != 1) continue;
      if (zero != (s == 0 || t == 0)) continue;
      out.push_back({s, t, std::gcd(s, n) == 1 && std::gcd(t, n) == 1});
    }
  return out;
}

NucleiProfile gd_profile(std::uint64_t q, unsigned n, unsigned s, unsigned t) {
  return {"s=" + std::to_string(s) + ",t=" + std::to_string(t), qp(q, g(static_cast<long long>(t) - s, n)),
          qp(q, g(static_cast<long long>(t) + s, n))};
}

// x_1..x_n of a non-scattered GD linear set with s, t > 0.
std::vector<std::uint64_t> gd_spectrum(std::uint64_t q, unsigned n, unsigned s, unsigned t) {
  const unsigned h = std::gcd(s, n), k = std::gcd(t, n);
  const std::uint64_t Qn = qp(q, n);
  std::vector<std::uint64_t> x(n, 0);
  if (h > 1 && k > 1) {
    x[0] = (Qn - 1) * (Qn - 1) / (q - 1);
  } else {
    x[0] = (Qn * Qn - Qn) / (q - 1);
  }
  if (h > 1) x[h - 1] += (Qn - 1) / (qp(q, h) - 1);
  if (k > 1) x[k - 1] += (Qn - 1) / (qp(q, k) - 1);
  return x;
}

std::string vec_str(const std::vector<std::uint64_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

FieldPtr field_for(std::uint64_t q, unsigned n) {
  const auto pf = prime_factors(q);
  if (pf.size() != 1) throw InvalidArgument("q must be a prime power");
  unsigned h = 0;
  for (std::uint64_t t = q; t > 1; t /= pf[0]) ++h;
  return Field::make(static_cast<unsigned>(pf[0]), h, n);
}

}  // namespace

nlohmann::json gtf_nuclei_measurement(const FieldPtr& F) {
  const QuadExt E(F);
  const std::uint64_t q = F->q();
  const unsigned n = F->n();
  nlohmann::json out = nlohmann::json::array();
  for (unsigned t = 1; t < 2 * n; ++t) {
    if (std::gcd(t, n) != 1) continue;
    QElem c{};
    bool found = false;
    for (std::uint64_t k = 1; k < F->size() && !found; ++k) {
      c = QElem{F->from_code(k), F->one()};
      found = gtf_parameter_valid(E, c, t);
    }
    if (!found) throw InternalError("no valid GTF parameter found");
    const auto S = gtf_spread(E, c, t);
    const auto fast = nuclei_spreadset(normalize_spread(S));
    const auto sampled = nuclei_sampled(S, 0);
    const std::uint64_t pm = qp(q, g(t + n, 2)), pr = qp(q, g(t, 2));
    out.push_back({{"t", t},
                   {"c", E.format(c)},
                   {"fast", {fast.left, fast.middle, fast.right, fast.center}},
                   {"sampled", {sampled.left, sampled.middle, sampled.right, sampled.center}},
                   {"printed_middle_right", {pm, pr}},
                   {"routes_agree", fast == sampled},
                   {"printed_matches", fast.middle == pm && fast.right == pr}});
  }
  return out;
}

std::vector<KnownFamilyRecord> known_table(std::uint64_t q, unsigned n) {
  if (n < 2) throw InvalidArgument("known families need n >= 2");
  const std::uint64_t Qn = qp(q, n);
  std::vector<KnownFamilyRecord> T;

  {
    KnownFamilyRecord r;
    r.name = "K17";
    r.constraint = "gcd(r,n)=1";
    r.nuclei = {{"", Qn, 0}};
    r.nuclei_source = {"middle nucleus of order q^n", "known families: Knuth K17 nuclei"};
    r.geometry = {{"scattered, of pseudoregulus type, both transversals contained in Q",
                   "known families: Knuth K17 linear set"}};
    T.push_back(r);
  }
  {
    KnownFamilyRecord r;
    r.name = "K19";
    r.constraint = "gcd(r,n)=1";
    r.nuclei = {{"", 0, Qn}};
    r.nuclei_source = {"right nucleus of order q^n", "known families: Knuth K19 nuclei"};
    r.geometry = {{"scattered, of pseudoregulus type, both transversals contained in Q",
                   "known families: Knuth K19 linear set"}};
    T.push_back(r);
  }
  for (const char* name : {"TP", "TP-perp"}) {
    KnownFamilyRecord r;
    r.name = name;
    r.applicable = q == 3;
    r.constraint = r.applicable ? "q=3, n>=2" : "requires q=3 (semifields of order 3^{2n})";
    r.nuclei_source = {"nuclei not used", "known families: symplectic TP"};
    if (std::string(name) == "TP")
      r.geometry = {{"union of lines contained in a plane", "known families: symplectic TP linear set"}};
    else
      r.geometry = {{"union of lines through a point", "known families: TP translation dual linear set"}};
    T.push_back(r);
  }
  {
    KnownFamilyRecord r;
    r.name = "GD(s=0 or t=0)";
    r.constraint = "s=0 or t=0, gcd(s,t,n)=1";
    for (const auto& c : gd_classes(n, true)) r.nuclei.push_back(gd_profile(q, n, c.s, c.t));
    r.nuclei_source = {"middle q^{gcd(t-s,n)}, right q^{gcd(t+s,n)}", "known families: generalized Dickson nuclei"};
    r.geometry = {{"union of lines through (1,0,0,1) contained in the plane x0=x3",
                   "known families: generalized Dickson, s or t zero"}};
    T.push_back(r);
  }
  {
    KnownFamilyRecord r;
    r.name = "GD scattered";
    r.constraint = "s,t>0, gcd(s,n)=gcd(t,n)=1";
    for (const auto& c : gd_classes(n, false))
      if (c.scattered) r.nuclei.push_back(gd_profile(q, n, c.s, c.t));
    r.nuclei_source = {"middle q^{gcd(t-s,n)}, right q^{gcd(t+s,n)}", "known families: generalized Dickson nuclei"};
    r.geometry = {{"pseudoregulus type iff s=t or s+t=n; otherwise r and r-perp are the only long lines, both of "
                   "pseudoregulus type",
                   "known families: generalized Dickson, scattered case"}};
    T.push_back(r);
  }
  {
    KnownFamilyRecord r;
    r.name = "GD non-scattered";
    r.constraint = "s,t>0, gcd(s,n)>1 or gcd(t,n)>1";
    for (const auto& c : gd_classes(n, false))
      if (!c.scattered) r.nuclei.push_back(gd_profile(q, n, c.s, c.t));
    // Kept applicable for odd n even without parameters, so that the weight
    // argument below is reported as an exclusion.
    r.applicable = !r.nuclei.empty() || n % 2 == 1;
    r.nuclei_source = {"middle q^{gcd(t-s,n)}, right q^{gcd(t+s,n)}", "known families: generalized Dickson nuclei"};
    r.geometry = {{"points of weight > 1 lie on r (weight gcd(s,n)) and r-perp (weight gcd(t,n))",
                   "known families: generalized Dickson, non-scattered spectra"}};
    T.push_back(r);
  }
  {
    KnownFamilyRecord r;
    r.name = "GTF";
    r.constraint = "gcd(t,n)=1";
    for (unsigned t = 1; t < 2 * n; ++t)
      if (std::gcd(t, n) == 1) r.nuclei.push_back({"t=" + std::to_string(t), qp(q, g(t + n, 2)), qp(q, g(t, 2))});
    r.nuclei_source = {"middle q^{gcd(t+n,2)}, right q^{gcd(t,2)}", "known families: generalized twisted field nuclei"};
    r.geometry = {{"pseudoregulus type, transversal lines external to Q and polar to each other",
                   "known families: generalized twisted field linear set"}};
    r.extra["printed_formula"] = "middle q^{gcd(t+n,2)}, right q^{gcd(t,2)}";
    if (q == 5 && n == 3) {
      const auto meas = gtf_nuclei_measurement(field_for(q, n));
      bool ok = true;
      for (const auto& m : meas) ok = ok && m["printed_matches"].get<bool>() && m["routes_agree"].get<bool>();
      r.extra["measured_q5n3"] = meas;
      r.extra["discrepancy"] = !ok;
    }
    T.push_back(r);
  }
  {
    KnownFamilyRecord r;
    r.name = "JMPT";
    r.applicable = n >= 3 && n % 2 == 1;
    r.constraint = r.applicable ? "n>=3 odd" : "requires n>=3 odd";
    r.nuclei = {{"", qp(q, 2), qp(q, 2)}};
    r.nuclei_source = {"middle and right nuclei of order q^2", "known families: JMPT nuclei"};
    r.geometry = {{"contains a unique line, with at least q+1 points of weight (n+1)/2",
                   "known families: JMPT linear set"}};
    T.push_back(r);
  }
  {
    KnownFamilyRecord r;
    r.name = "EMPT1";
    r.applicable = n >= 3 && n % 2 == 1;
    r.constraint = r.applicable ? "n>=3 odd" : "requires n>=3 odd";
    r.nuclei = {{"", q, q}};
    r.nuclei_source = {"middle and right nuclei of order q", "known families: EMPT odd case nuclei"};
    r.geometry = {{"contains a unique line, with q+1 points of weight (n+1)/2",
                   "known families: EMPT odd case linear set"}};
    T.push_back(r);
  }
  {
    KnownFamilyRecord r;
    r.name = "EMPT2";
    r.applicable = n >= 4 && n % 2 == 0;
    r.constraint = r.applicable ? "n>=4 even" : "requires n>=4 even";
    r.nuclei = {{"", qp(q, 2), qp(q, 2)}};
    r.nuclei_source = {"middle and right nuclei of order q^2", "known families: EMPT even case nuclei"};
    T.push_back(r);
  }
  return T;
}

std::vector<std::string> Verdict::compatible() const {
  std::vector<std::string> out;
  for (const auto& f : families)
    if (f.status == "compatible") out.push_back(f.family);
  return out;
}

namespace {

struct Eval {
  FamilyVerdict v;
  bool done = false;
  bool unknown = false;
  std::string unknown_reason;

  void exclude(std::string reason, std::string citation, std::string mode) {
    if (done) return;
    v.status = "excluded";
    v.reason = std::move(reason);
    v.citation = std::move(citation);
    v.evidence_mode = std::move(mode);
    done = true;
  }
  void undetermined(std::string reason) {
    if (!unknown) unknown_reason = std::move(reason);
    unknown = true;
  }
  FamilyVerdict finish(const std::string& citation) {
    if (!done) {
      v.status = unknown ? "undetermined" : "compatible";
      v.reason = unknown ? unknown_reason : kCompatible;
      v.citation = citation;
      v.evidence_mode = "static";
    }
    return v;
  }
};

bool has_nuclei(const Signature& s) { return !s.nuclei.method.empty(); }

void check_nuclei(Eval& e, const Signature& s, const KnownFamilyRecord& r) {
  if (!has_nuclei(s)) {
    e.undetermined("nuclei not computed");
    return;
  }
  for (const auto& p : r.nuclei)
    if (profile_matches(p, s.nuclei.middle, s.nuclei.right)) return;
  e.exclude("nuclei (middle, right) = " + pair_str(s.nuclei.middle, s.nuclei.right) + "; " + r.name +
                " (or its transpose) has " + profiles_str(r.nuclei),
            r.nuclei_source.citation + "; exclusion argument: comparison of nuclei", "nuclei");
}

// Pseudoregulus requirement: want = true (must be of pseudoregulus type).
void check_pr(Eval& e, const Signature& s, bool want, const std::string& who, const std::string& cite) {
  if (!s.scattered && want) {
    e.exclude("linear set is not scattered; " + who + " has a scattered linear set of pseudoregulus type", cite,
              "static");
    return;
  }
  if (s.pseudoregulus == "unknown") {
    e.undetermined("pseudoregulus type not decided in " + s.mode + " mode");
    return;
  }
  const bool is = s.pseudoregulus == "yes";
  if (is == want) return;
  std::string why = is ? "linear set is of pseudoregulus type" : "linear set is not of pseudoregulus type";
  if (!is && s.long_lines_not_pr > 0)
    why += " (" + std::to_string(s.long_lines_not_pr) + " long line(s) not of pseudoregulus type)";
  e.exclude(why + "; " + who + (want ? " requires pseudoregulus type" : " is not of pseudoregulus type"),
            cite + "; exclusion argument: pseudoregulus comparison", s.mode);
}

}  // namespace

Verdict distinguish(const Signature& s) {
  Verdict out;
  const std::uint64_t q = s.q;
  const unsigned n = s.n;
  const std::uint64_t Qn = qp(q, n);
  for (const auto& r : known_table(q, n)) {
    Eval e;
    e.v.family = r.name;
    const std::string cite = r.geometry.empty() ? r.nuclei_source.citation : r.geometry[0].citation;
    if (!r.applicable) {
      e.v.status = "not_applicable";
      e.v.reason = r.constraint;
      e.v.citation = r.nuclei_source.citation;
      e.v.evidence_mode = "static";
      out.families.push_back(e.v);
      continue;
    }
    if (s.rank != 2 * n) {
      e.exclude("rank " + std::to_string(s.rank) + " differs from 2n = " + std::to_string(2 * n), cite, "static");
      out.families.push_back(e.finish(cite));
      continue;
    }
    const std::string& name = r.name;
    if (name == "K17" || name == "K19") {
      check_nuclei(e, s, r);
      check_pr(e, s, true, name, cite);
      if (!e.done && s.pseudoregulus == "yes") {
        const std::vector<std::string> want{"contained", "contained"};
        if (s.transversal_classes != want)
          e.exclude("transversal lines are " + s.transversal_classes[0] + " and " + s.transversal_classes[1] +
                        " w.r.t. Q; " + name + " has both contained in Q",
                    cite, s.mode);
      }
    } else if (name == "TP") {
      if (s.span_dim > 3)
        e.exclude("linear set spans PG(3,q^n) (span dimension " + std::to_string(s.span_dim) +
                      "); TP is a union of lines contained in a plane (span dimension <= 3)",
                  cite + "; exclusion argument: geometric structure", "static");
    } else if (name == "TP-perp") {
      // A union of m lines through a point has 1 + m q^n points and >= m contained lines.
      const std::uint64_t rest = s.size - 1;
      if (rest % Qn != 0 || s.contained_lines < rest / Qn)
        e.exclude("|L| = " + std::to_string(s.size) + " with " + std::to_string(s.contained_lines) +
                      " contained line(s); a union of lines through a point needs |L| = 1 + m q^n with at least m "
                      "contained lines",
                  cite + "; exclusion argument: geometric structure", "static");
    } else if (name == "GD(s=0 or t=0)") {
      if (s.span_dim > 3)
        e.exclude("linear set spans PG(3,q^n) (span dimension " + std::to_string(s.span_dim) +
                      "); GD with s=0 or t=0 lies in the plane x0=x3",
                  cite + "; exclusion argument: geometric structure", "static");
    } else if (name == "GD scattered") {
      if (!s.scattered) {
        e.exclude("linear set is not scattered (spectrum " + vec_str(s.spectrum) + "); this GD class is scattered",
                  cite, "static");
      } else {
        check_nuclei(e, s, r);
        if (!e.done) {
          // Classes surviving nuclei decide the geometric requirement.
          bool pr_class = false, other_class = false;
          for (const auto& c : gd_classes(n, false)) {
            if (!c.scattered) continue;
            if (has_nuclei(s) && !profile_matches(gd_profile(q, n, c.s, c.t), s.nuclei.middle, s.nuclei.right))
              continue;
            (c.s == c.t || c.s + c.t == n ? pr_class : other_class) = true;
          }
          if (!pr_class && other_class) {
            if (s.long_lines_not_pr > 0)
              e.exclude(std::to_string(s.long_lines_not_pr) +
                            " long line(s) not of pseudoregulus type; the long lines of a scattered GD set are r and "
                            "r-perp, both of pseudoregulus type",
                        cite + "; exclusion argument: comparison with generalized Dickson", s.mode);
            else if (s.mode == "exhaustive" && s.long_line_count != 2)
              e.exclude(std::to_string(s.long_line_count) + " long lines; these GD classes have exactly 2", cite,
                        "exhaustive");
          } else if (pr_class && !other_class) {
            check_pr(e, s, true, "GD with s=t or s+t=n", cite);
          } else if (s.mode != "exhaustive") {
            e.undetermined("GD classes of both kinds survive nuclei; long-line data incomplete");
          }
        }
      }
    } else if (name == "GD non-scattered") {
      if (s.scattered) {
        e.exclude("linear set is scattered; this GD class is not", cite, "static");
      } else {
        std::vector<unsigned> bad;
        for (unsigned w = 2; w <= s.spectrum.size(); ++w)
          if (s.spectrum[w - 1] > 0 && n % w != 0) bad.push_back(w);
        if (!bad.empty()) {
          std::string why = "points of weight " + std::to_string(bad[0]) +
                            " occur; non-scattered GD weights are gcd(s,n) or gcd(t,n), which divide n = " +
                            std::to_string(n);
          if (bad[0] == 2) why += " (the condition {gcd(s,n),gcd(t,n)} = {1,2} would force n even)";
          e.exclude(why, cite + "; exclusion argument: D_AB case arithmetic condition", "static");
        } else if (r.nuclei.empty()) {
          e.exclude("no GD parameters with s,t>0 give a non-scattered set for n = " + std::to_string(n), cite,
                    "static");
        } else {
          check_nuclei(e, s, r);
          if (!e.done) {
            bool any = false;
            for (const auto& c : gd_classes(n, false))
              if (!c.scattered && gd_spectrum(q, n, c.s, c.t) == s.spectrum &&
                  (!has_nuclei(s) ||
                   profile_matches(gd_profile(q, n, c.s, c.t), s.nuclei.middle, s.nuclei.right)))
                any = true;
            if (!any)
              e.exclude("spectrum " + vec_str(s.spectrum) + " matches no non-scattered GD class with these nuclei",
                        cite, "static");
          }
        }
      }
    } else if (name == "GTF") {
      check_nuclei(e, s, r);
      check_pr(e, s, true, "GTF", cite);
      if (!e.done && s.pseudoregulus == "yes") {
        const std::vector<std::string> want{"external", "external"};
        if (s.transversal_classes != want)
          e.exclude("transversal lines are " + s.transversal_classes[0] + " and " + s.transversal_classes[1] +
                        " w.r.t. Q; GTF transversals are external",
                    cite, s.mode);
        else if (!s.transversals_polar.value_or(false))
          e.exclude("transversal lines are not polar to each other; GTF transversals are", cite, s.mode);
      }
    } else if (name == "JMPT" || name == "EMPT1") {
      check_nuclei(e, s, r);
      const unsigned hw = (n + 1) / 2;
      if (s.half_weight_points < q + 1)
        e.exclude(std::to_string(s.half_weight_points) + " point(s) of weight " + std::to_string(hw) + "; " + name +
                      " has at least q+1 = " + std::to_string(q + 1),
                  cite + "; exclusion argument: weight comparison", "static");
      if (s.contained_lines != 1)
        e.exclude(std::to_string(s.contained_lines) + " contained line(s); " + name + " contains a unique line",
                  cite, "static");
    } else if (name == "EMPT2") {
      check_nuclei(e, s, r);
    }
    out.families.push_back(e.finish(cite));
  }
  return out;
}

nlohmann::json to_json(const KnownFamilyRecord& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["applicable"] = r.applicable;
  j["constraint"] = r.constraint;
  j["nuclei"] = nlohmann::json::array();
  for (const auto& p : r.nuclei) j["nuclei"].push_back({{"params", p.params}, {"middle", p.middle}, {"right", p.right}});
  j["nuclei_source"] = {{"text", r.nuclei_source.text}, {"citation", r.nuclei_source.citation}};
  j["geometry"] = nlohmann::json::array();
  for (const auto& d : r.geometry) j["geometry"].push_back({{"text", d.text}, {"citation", d.citation}});
  if (!r.extra.empty()) j["extra"] = r.extra;
  return j;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : v.families)
    j[f.family] = {{"status", f.status}, {"reason", f.reason}, {"citation", f.citation}, {"evidence", f.evidence_mode}};
  return j;
}

}  // namespace r2sf

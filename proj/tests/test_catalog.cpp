#include <doctest.h>

#include <algorithm>
#include <set>

#include "r2sf/catalog.hpp"
#include "r2sf/error.hpp"

using namespace r2sf;

namespace {

const KnownFamilyRecord& record(const std::vector<KnownFamilyRecord>& T, const std::string& name) {
  const auto it = std::find_if(T.begin(), T.end(), [&](const auto& r) { return r.name == name; });
  REQUIRE(it != T.end());
  return *it;
}

const FamilyVerdict& verdict(const Verdict& v, const std::string& name) {
  const auto it = std::find_if(v.families.begin(), v.families.end(), [&](const auto& f) { return f.family == name; });
  REQUIRE(it != v.families.end());
  return *it;
}

Signature sig_of(const FamilySpec& spec, const std::string& mode) {
  SignatureOptions o;
  o.mode = mode;
  return signature(build_family(spec), o).sig;
}

FamilySpec spec(const char* fam, unsigned p, unsigned n) {
  FamilySpec s;
  s.family = fam;
  s.p = p;
  s.h = 1;
  s.n = n;
  return s;
}

}  // namespace

TEST_CASE("known table applicability and recorded nuclei") {
  const auto T53 = known_table(5, 3);
  CHECK_FALSE(record(T53, "TP").applicable);
  CHECK_FALSE(record(T53, "TP-perp").applicable);
  CHECK_FALSE(record(T53, "EMPT2").applicable);
  CHECK(record(T53, "JMPT").applicable);
  CHECK(record(T53, "EMPT1").applicable);
  CHECK(record(T53, "K17").nuclei.at(0).middle == 125);
  CHECK(record(T53, "K19").nuclei.at(0).right == 125);

  // GTF: one profile per t in [1, 2n) coprime to n; the printed formula
  // matches both measured routes at q=5, n=3.
  const auto& gtf = record(T53, "GTF");
  CHECK(gtf.nuclei.size() == 4);
  CHECK(gtf.extra["discrepancy"] == false);
  CHECK(gtf.extra["measured_q5n3"].size() == 4);

  const auto T34 = known_table(3, 4);
  CHECK(record(T34, "TP").applicable);
  CHECK(record(T34, "EMPT2").applicable);
  CHECK_FALSE(record(T34, "JMPT").applicable);
  for (const auto& p : record(T34, "GD non-scattered").nuclei) CHECK(p.middle > 0);

  CHECK_THROWS_AS(known_table(5, 1), InvalidArgument);
}

TEST_CASE("verdict statuses and wording") {
  FamilySpec s = spec("dB", 5, 3);
  s.b = "g";
  const Verdict v = distinguish(sig_of(s, "exhaustive"));
  const std::set<std::string> allowed{"excluded", "compatible", "not_applicable", "undetermined"};
  for (const auto& f : v.families) {
    CHECK(allowed.count(f.status) == 1);
    CHECK_FALSE(f.reason.empty());
    if (f.status == "compatible") CHECK(f.reason.find("not excluded by recorded invariants") != std::string::npos);
    if (f.status == "excluded") CHECK_FALSE(f.citation.empty());
  }
  CHECK(v.compatible() == std::vector<std::string>{"GTF"});
  const auto j = to_json(v);
  CHECK(j["GTF"]["status"] == "compatible");
  CHECK(j["TP"]["status"] == "not_applicable");
}

TEST_CASE("Knuth K17 and its transpose are recognized") {
  // Nuclei profiles are matched up to transposition, so K17 and K19 stay
  // compatible with each other's instances.
  const FieldPtr F = Field::make(5, 1, 3);
  FamilySpec k = spec("k17", 5, 3);
  k.r = 1;
  k.f = F->format(F->least_nonsquare());
  const SpreadMap S = build_family(F, k);
  SignatureOptions o;
  const Signature s = signature(S, o).sig;
  CHECK(s.nuclei.middle == 125);
  const Verdict v = distinguish(s);
  CHECK(verdict(v, "K17").status == "compatible");
  CHECK(verdict(v, "K19").status == "compatible");
  CHECK(verdict(v, "GTF").status == "excluded");

  const Signature st = signature(transpose_spread(S), o).sig;
  CHECK(st.nuclei.right == 125);
  const Verdict vt = distinguish(st);
  CHECK(verdict(vt, "K19").status == "compatible");
  CHECK(verdict(vt, "K17").status == "compatible");
}

TEST_CASE("D_A and D_AB at n = 5 exclude every applicable family") {
  const FieldPtr F = Field::make(5, 1, 5);
  // Least codes with N(a) not in {1,-1} and N(b) not in {1,-1}.
  Elem a{};
  for (std::uint32_t c = 2;; ++c) {
    const Elem x{c}, nx = F->norm(x);
    if (nx != F->one() && nx != F->neg(F->one())) {
      a = x;
      break;
    }
  }
  for (const char* fam : {"dA", "dAB"}) {
    FamilySpec s = spec(fam, 5, 5);
    (std::string(fam) == "dA" ? s.a : s.b) = F->format(a);
    const Verdict v = distinguish(sig_of(s, "candidates"));
    CHECK(v.compatible().empty());
    for (const auto& f : v.families) {
      CHECK(f.status != "compatible");
      if (f.status == "excluded") CHECK_FALSE(f.citation.empty());
    }
  }
}

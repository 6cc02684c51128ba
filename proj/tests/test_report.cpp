#include <doctest.h>

#include "r2sf/error.hpp"
#include "r2sf/report.hpp"

using namespace r2sf;

namespace {

RunConfig family_cfg(const char* cmd, const char* fam, unsigned p, unsigned n) {
  RunConfig c;
  c.command = cmd;
  c.spec.family = fam;
  c.spec.p = p;
  c.spec.h = 1;
  c.spec.n = n;
  return c;
}

}  // namespace

TEST_CASE("D_B over F_3 is an infeasible request") {
  RunConfig c = family_cfg("build", "dB", 3, 3);
  c.spec.b = "g";
  const Report r = run(c);
  CHECK(r.exit_code() == 2);
  CHECK(r.error_message == "N_q(b) ∈ {±1} for all b when q=3");
  CHECK(r.to_json()["status"] == "error");
}

TEST_CASE("linset report for D_A at q=3, n=3") {
  RunConfig c = family_cfg("linset", "dA", 3, 3);
  c.spec.a = "g";
  const Report r = run(c);
  REQUIRE(r.exit_code() == 0);
  const auto j = r.to_json();
  const auto& s = j["results"]["linear_set"]["signature"];
  CHECK(s["size"] == 352);
  CHECK(s["spectrum"][1] == 4);
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["first_failure"].is_null());
  CHECK(j["field"].is_null());
  CHECK(j["results"]["field"]["modulus"].is_string());
  for (const auto& ch : j["checks"]) CHECK_FALSE(ch["citation"].get<std::string>().empty());
}

TEST_CASE("reports are byte-identical across worker counts") {
  RunConfig c = family_cfg("linset", "dB", 5, 3);
  c.spec.b = "g";
  c.workers = 1;
  const std::string a = run(c).to_json().dump();
  c.workers = 3;
  const std::string b = run(c).to_json().dump();
  CHECK(a == b);
  CHECK(a.find("workers") == std::string::npos);
}

TEST_CASE("usage errors and failing checks map to exit codes") {
  CHECK(run(family_cfg("build", "nope", 3, 3)).exit_code() == 2);
  RunConfig v;
  v.command = "verify-paper";
  v.suite = "q9n9";
  CHECK(run(v).exit_code() == 2);
  RunConfig m = family_cfg("linset", "dA", 3, 3);
  m.spec.a = "g";
  m.mode = "sideways";
  CHECK(run(m).exit_code() == 2);
  // Exhaustive search over the cap without the auto fallback.
  RunConfig capped = family_cfg("linset", "dA", 3, 3);
  capped.spec.a = "g";
  capped.cap = 1000;
  CHECK(run(capped).error_type == "CapExceeded");
  capped.mode = "auto";
  CHECK(run(capped).exit_code() == 0);

  Report r(family_cfg("check", "dA", 3, 3));
  r.check("first", true, "label", 1, 1);
  r.check("second", false, "label", 1, 2);
  r.check("third", false, "label", 1, 3);
  CHECK(r.exit_code() == 1);
  REQUIRE(r.first_failure() != nullptr);
  CHECK(r.first_failure()->name == "second");
  CHECK(r.to_json()["first_failure"]["name"] == "second");
}

TEST_CASE("first_by_code picks the least code") {
  const FieldPtr F = Field::make(5, 1, 3);
  const Elem x = first_by_code(*F, [&](Elem e) { return !e.is_zero() && !F->is_square(e); });
  for (std::uint64_t c = 1; c < x.code; ++c) CHECK(F->is_square(F->from_code(c)));
  CHECK_THROWS_AS(first_by_code(*F, [](Elem) { return false; }), InvalidArgument);
}

TEST_CASE("small suites pass") {
  for (const char* s : {"q3n3", "q2n5-lst", "q3n4-gd"}) {
    RunConfig c;
    c.command = "verify-paper";
    c.suite = s;
    const Report r = run(c);
    INFO(s);
    CHECK(r.exit_code() == 0);
    CHECK(r.checks.size() > 10);
  }
}

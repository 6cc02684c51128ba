#pragma once

// Invariants of the known rank-two (pre)semifield families that are
// 2-dimensional over the left nucleus and 2n-dimensional over the center,
// and an exclusion engine comparing them with a computed signature.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "r2sf/linset.hpp"

namespace r2sf {

struct NucleiProfile {
  std::string params;  // e.g. "t=1" or "s=1,t=2"
  std::uint64_t middle = 0, right = 0;  // 0 = not recorded
};

struct Descriptor {
  std::string text;
  std::string citation;
};

struct KnownFamilyRecord {
  std::string name;
  bool applicable = true;
  std::string constraint;  // why not applicable, or the parameter range
  std::vector<NucleiProfile> nuclei;
  Descriptor nuclei_source;
  std::vector<Descriptor> geometry;
  // GTF only: the printed exponents and values measured on gtf_spread at
  // q=5, n=3 by two independent nuclei routes.
  nlohmann::json extra = nlohmann::json::object();
};

// Records instantiated at (q, n); q must be odd, n >= 2.
std::vector<KnownFamilyRecord> known_table(std::uint64_t q, unsigned n);

struct FamilyVerdict {
  std::string family;
  std::string status;  // excluded | compatible | not_applicable | undetermined
  std::string reason;
  std::string citation;
  std::string evidence_mode;  // nuclei | exhaustive | candidates | static
};

struct Verdict {
  std::vector<FamilyVerdict> families;
  // Names of families with status compatible.
  std::vector<std::string> compatible() const;
};

Verdict distinguish(const Signature& sig);

nlohmann::json to_json(const KnownFamilyRecord& r);
nlohmann::json to_json(const Verdict& v);

// GTF nuclei by the fast and sampled routes, for each t in [1, 2n) with
// gcd(t, n) = 1, together with the printed formula's values.
nlohmann::json gtf_nuclei_measurement(const FieldPtr& F);

}  // namespace r2sf

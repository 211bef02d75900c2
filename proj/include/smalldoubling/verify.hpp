#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "smalldoubling/json_io.hpp"
#include "smalldoubling/lab.hpp"

namespace smalldoubling {

enum class FamilyMode {
  Exhaustive,  // every A in [0, zmax] x H containing 0
  Sampled,     // uniform random subsets of that window
  Structured,  // random dense subsets of coset progressions P + K
};

const char* to_string(FamilyMode m) noexcept;
FamilyMode family_mode_from_string(const std::string& s);

// Names accepted in FamilyDescriptor::checkers.
const std::vector<std::string>& known_checkers();

struct FamilyDescriptor {
  std::vector<std::int64_t> torsion;
  std::int64_t zmax = 6;
  std::int64_t max_size = 0;  // 0: no limit
  bool require_max = false;   // keep only sets with max psi = zmax
  FamilyMode mode = FamilyMode::Exhaustive;
  std::uint64_t samples = 0;  // sampled / structured modes
  std::uint64_t seed = 0;
  std::vector<std::string> checkers{"small", "lower", "a0al", "c3a2a", "propo"};
  std::size_t max_witnesses = 10000;
};

// Exhaustive enumeration is limited to 2^24 index values.
inline constexpr int kMaxExhaustiveBits = 24;

struct CheckerTally {
  std::uint64_t applicable = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t equalities = 0;
};

struct InstanceRecord {
  std::uint64_t index = 0;
  std::string checker;
  std::string detail;
  GSet set;
};

struct VerificationRun {
  FamilyDescriptor family;
  std::uint64_t indices = 0;  // size of the index space visited
  std::uint64_t checked = 0;  // instances that passed the filters
  std::map<std::string, CheckerTally> tallies;
  std::vector<InstanceRecord> violations;  // sorted by (index, checker)
  std::vector<InstanceRecord> witnesses;   // first max_witnesses equality cases
  std::uint64_t witness_total = 0;
  std::int64_t elapsed_ms = 0;
  std::string digest;  // over everything above except elapsed_ms
};

// Runs one named checker on one set.
Verdict evaluate_checker(const std::string& name, const GSet& a);

// The instance at `index`, or an empty set if filtered out.
GSet family_instance(const FamilyDescriptor& family, std::uint64_t index);
std::uint64_t family_index_count(const FamilyDescriptor& family);

// Deterministic for a fixed descriptor regardless of `jobs`.
VerificationRun verify_family(const FamilyDescriptor& family, unsigned jobs = 1);

json to_json(const FamilyDescriptor& f);
json to_json(const VerificationRun& run, bool include_timing = false);

// Writes each violation as a GSet file into `dir`; returns the paths.
std::vector<std::filesystem::path> persist_violations(const VerificationRun& run, const std::filesystem::path& dir);

}  // namespace smalldoubling

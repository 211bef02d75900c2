#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "smalldoubling/quotient.hpp"
#include "smalldoubling/rational.hpp"
#include "smalldoubling/subgroup.hpp"

namespace smalldoubling {

// The progression {start, start + diff, ..., start + (length-1) diff} in Z.
struct IntProgression {
  std::int64_t start = 0;
  std::int64_t diff = 0;  // 0 only when length == 1
  std::int64_t length = 1;
};

// Shortest arithmetic progression containing the (nonempty) integer set.
IntProgression min_ap_cover_Z(std::span<const std::int64_t> values);

// P + K with P = {start + j diff : 0 <= j < length} and K a subgroup of H.
struct CosetProgression {
  Element start;
  Element diff;
  std::int64_t length = 1;
  Subgroup k;

  // psi(diff) == 0: P + K sits inside one H-coset.
  bool degenerate() const noexcept { return diff.z == 0; }
  std::int64_t cost() const noexcept { return (length - 1) * static_cast<std::int64_t>(k.order()); }
  GSet to_set() const;
  bool covers(const GSet& a) const;
  // |P + K| == |P| |K|.
  bool is_proper() const;
};

struct StructureReport {
  std::int64_t n = 0;
  std::int64_t l = 0;  // max psi - min psi
  std::int64_t size = 0;
  std::int64_t doubling_size = 0;
  Rational tau;
  bool hypothesis_small = false;  // n >= 3 and tau < 3(1 - 1/n)
  CosetProgression best_cover;
  std::int64_t cost = 0;
  bool degenerate = false;
  bool bound_ok = false;  // cost <= |2A| - |A|, nondegenerate covers only
  std::int64_t cover_number = 0;
  Subgroup cover_subgroup;
  // Infimum of the reals n' with |2A| < 3(1 - 1/n')|A|; absent if none.
  std::optional<Rational> hypothesis_big_threshold;
  bool hypothesis_big = false;  // cover_number exceeds the threshold
};

struct CoverNumber {
  std::int64_t count = 0;
  Subgroup witness;
};

// Least number of cosets of one finite subgroup covering A.
CoverNumber cover_number(const GSet& a);

// Exact minimum of (|P|-1)|K| over all covers A in P + K, K ranging over the
// subgroup lattice of H. Ties: smaller |K|, then smaller diff.
StructureReport find_structure(const GSet& a);

struct ReductionCertificate {
  std::int64_t modulus_order = 0;
  std::int64_t deficiency_a = 0;     // Dfc(A, L)
  std::int64_t deficiency_2a = 0;    // Dfc(2A, L)
  bool sumset_condition = false;     // Dfc(2A, L) <= Dfc(A, L)
  bool small_deficiency = false;     // Dfc(A, L) <= |L| - 1
  bool hypothesis_before = false;    // |2A| < 3(1 - 1/n)|A|
  bool hypothesis_after = false;     // same for the quotient
};

struct Reduction {
  QuotientMap map;
  GSet reduced;
  ReductionCertificate certificate;
};

// Passes A to G/L. Throws PreconditionViolated unless L is nontrivial and
// one of the two deficiency conditions holds.
Reduction reduce_by_subgroup(const GSet& a, const Subgroup& l);

// Pulls a cover of the quotient back along the map: K = phi^-1(K~), P keeps
// the length of P~.
CosetProgression lift_structure(const CosetProgression& reduced_cover, const QuotientMap& map);

}  // namespace smalldoubling

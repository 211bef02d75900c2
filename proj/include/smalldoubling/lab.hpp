#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smalldoubling/structure.hpp"
#include "smalldoubling/sumset.hpp"

namespace smalldoubling {

// Checkers are total: either the hypothesis fails, or the claim is
// evaluated and passes or fails.
enum class Outcome { NotApplicable, Pass, Fail };

struct Verdict {
  Outcome outcome = Outcome::NotApplicable;
  bool equality = false;  // the bound is attained
  std::string detail;

  bool failed() const noexcept { return outcome == Outcome::Fail; }
  bool applicable() const noexcept { return outcome != Outcome::NotApplicable; }
};

const char* to_string(Outcome o) noexcept;

// |B+C| <= |B|+|C|-1  =>  |B+C| = |B+L|+|C+L|-|L| with L the period of B+C.
Verdict check_kneser(const GSet& b, const GSet& c);
// |B+C| < |B|+|C|-1  =>  B+C periodic.
Verdict check_kneser_periodic(const GSet& b, const GSet& c);
// |2B| < 3|B|/2  =>  B-B is a subgroup L and 2B is an L-coset.
Verdict check_lemma_1_5(const GSet& b);

enum class PairsCase { I, II, III };
const char* to_string(PairsCase c) noexcept;

struct PairsDecomposition {
  PairsCase kind = PairsCase::I;
  // The sums b_i + c_i enumerate 2B \ B, each exactly once.
  std::vector<std::pair<Element, Element>> pairs;
  std::optional<Subgroup> l;  // cases ii, iii
  std::optional<Element> g;   // cases ii, iii
};

// For 0 in B, |B| = N+1, |2B| = 2N+1, N >= 2. Case i is searched
// exhaustively by backtracking (N <= max_n); otherwise ii/iii are recognized.
// Throws PreconditionViolated when the shape is wrong, CapExceeded for
// N > max_n, and std::logic_error if no case applies.
PairsDecomposition decompose_pairs(const GSet& b, std::size_t max_n = 8);
// Re-checks sums and the case conditions from scratch.
bool validate_pairs(const GSet& b, const PairsDecomposition& dec, std::string* why = nullptr);

// Integer sets: returns (b_i, c_i) for every b_i != b1, with the sums pairwise
// distinct and outside b1 + C. Built from a system of distinct
// representatives of n copies of b1 + C and the sets b_i + C.
std::vector<std::pair<std::int64_t, std::int64_t>> bp_matching(std::span<const std::int64_t> b,
                                                               std::span<const std::int64_t> c, std::int64_t b1);
// m |B+C| >= (m + n - 1)|B| with m, n the projection sizes.
Verdict check_bp_distinct(const GSet& b, const GSet& c);

// |2A1| + |A1+A2| + |2A2| >= 3(1 - 1/(n1+n2))(|A1| + |A2|).
Verdict check_prop_two_cosets(const GSet& a1, const GSet& a2);

// |2A| >= (2 - 1/n)|A|.
Verdict check_lower_bound(const GSet& a);
// |2A| + |A*| >= sigma n on the normalized instance.
Verdict check_a0al(const NormalizedInstance& inst);
// Under tau < 3(1 - 1/n): (3-tau)(tau|A|+|A*|) > 3 sigma, 3|A| - |2A| > sigma,
// and |2A| < 3|A| - 2|A*|.
Verdict check_3a2a(const NormalizedInstance& inst);
// Small-doubling hypothesis => bound_ok, 3 <= |P| <= (tau-1)n + 1, proper cover.
Verdict check_small_theorem(const StructureReport& report);
// The rank-one form with the cover number in place of n.
Verdict check_big_theorem(const StructureReport& report);
// H trivial and |2A| <= 3|A| - 4  =>  min AP length - 1 <= |2A| - |A|.
Verdict check_freiman(const GSet& a);
// Some K-coset holds >= |K|/(tau-1) elements, when 2 < tau < 3 and
// n >= (4 tau - 6)/((tau - 2)(3 - tau)).
Verdict check_theorem_propo(const StructureReport& report, const GSet& a);

struct Cylinder {
  GSet set;
  std::int64_t predicted_size = 0;
  std::int64_t predicted_doubling = 0;
};

// ([0, n-2] u {l}) + K, requires l >= n - 1 >= 2.
Cylinder gen_cylinder(std::int64_t n, std::int64_t l, const Subgroup& k);

}  // namespace smalldoubling

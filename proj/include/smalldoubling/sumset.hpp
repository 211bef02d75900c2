#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "smalldoubling/gset.hpp"
#include "smalldoubling/rational.hpp"
#include "smalldoubling/subgroup.hpp"

namespace smalldoubling {

// A + B. Empty if either operand is empty.
GSet sumset(const GSet& a, const GSet& b);
// A - B.
GSet difference_set(const GSet& a, const GSet& b);
// S + K for a subgroup K of H.
GSet saturate(const GSet& s, const Subgroup& k);

// The period {h in H : S + h = S}; {0} for the empty set.
Subgroup stabilizer(const GSet& s);

// r_S(g) = |S intersect (S + g)|, the number of ways to write g as s1 - s2.
std::int64_t rep_count(const GSet& s, const Element& g);

// |(g + L) \ S| when S meets g + L, else 0.
std::int64_t deficiency(const GSet& s, const Element& g, const Subgroup& l);

struct DeficiencyReport {
  // Least element of each L-coset meeting S, with the deficiency there.
  std::vector<std::pair<Element, std::int64_t>> per_coset;
  std::int64_t total = 0;
};

// Dfc(S, L) = |(S + L) \ S|, broken down by coset.
DeficiencyReport total_deficiency(const GSet& s, const Subgroup& l);

enum class DeltaRule { CanonicalLeast, CanonicalGreatest };

// A translated so that min psi(A) = 0 and 0 lies in A_0, together with the
// quantities built from the extreme slices A_0 and A_l.
struct NormalizedInstance {
  GSet set;
  Element translation;  // set = original + translation
  std::int64_t l = 0;   // max psi
  std::int64_t n = 0;   // |psi(A)|
  std::map<std::int64_t, GSet> slices;
  Element delta;        // the fixed element of A_l
  GSet a_star;          // A_0 intersect (A_l - delta)
  std::int64_t sigma = 0;  // |A_0| + |A_l|
  std::int64_t doubling_size = 0;  // |2A|
  Rational tau;         // |2A| / |A|
};

NormalizedInstance normalize(const GSet& a, DeltaRule rule = DeltaRule::CanonicalLeast);

// Number of classes of A modulo the infinite cyclic subgroup <delta>
// (requires delta.z != 0). Computed from explicit class representatives.
std::int64_t cyclic_class_count(const GSet& a, const Element& delta);

// |2A| / |A| as an exact rational.
Rational doubling(const GSet& a);

}  // namespace smalldoubling

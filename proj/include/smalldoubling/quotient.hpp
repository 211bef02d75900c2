#pragma once

#include <cstdint>
#include <vector>

#include "smalldoubling/subgroup.hpp"

namespace smalldoubling {

// The canonical homomorphism Z + H -> Z + H/L for a subgroup L of H.
//
// H/L is re-expressed as Z/e1 + ... + Z/em (invariant factors, e1 | e2 | ...),
// so quotient sets are ordinary GSets over the target group. Each coset also
// has a representative in H: its least element in canonical order.
class QuotientMap {
 public:
  explicit QuotientMap(Subgroup modulus);

  const GroupSpec& source() const noexcept { return modulus_.group(); }
  const GroupSpec& target() const noexcept { return target_; }
  const Subgroup& modulus() const noexcept { return modulus_; }

  std::uint32_t image_index(std::uint32_t source_idx) const noexcept { return image_[source_idx]; }
  Point apply(Point p) const noexcept { return Point{p.z, image_[p.idx]}; }
  Element apply(const Element& e) const;
  GSet apply(const GSet& s) const;

  // Least element of e + L.
  Element representative(const Element& e) const;
  // Least preimage of a target element.
  Point lift(Point q) const noexcept { return Point{q.z, least_preimage_[q.idx]}; }
  Element lift(const Element& q) const;

  // Full preimages: S + L and the subgroup containing L.
  GSet preimage(const GSet& s) const;
  Subgroup preimage(const Subgroup& s) const;

 private:
  Subgroup modulus_;
  GroupSpec target_;
  std::vector<std::uint32_t> image_;
  std::vector<std::uint32_t> least_preimage_;
};

// phi_L(S) over the quotient group.
GSet quotient(const GSet& s, const Subgroup& modulus);

}  // namespace smalldoubling

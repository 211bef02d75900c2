#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smalldoubling/group.hpp"

namespace smalldoubling {

// A finite subset of Z + H.
//
// Stored twice: as the canonical sorted point list (order (z, idx), which is
// lexicographic order on (z, h)) and as a dense bitset over the z-window
// [z_min, z_max] x H, bit (z - z_min) * |H| + idx. The bitset drives the set
// kernels; the point list drives iteration and serialization.
class GSet {
 public:
  GSet() = default;  // empty subset of Z
  explicit GSet(GroupSpec group) : group_(std::move(group)) {}
  GSet(GroupSpec group, std::span<const Element> elements);
  GSet(GroupSpec group, std::initializer_list<Element> elements)
      : GSet(std::move(group), std::span<const Element>(elements.begin(), elements.size())) {}

  // Points may be unsorted and contain duplicates.
  static GSet from_points(GroupSpec group, std::vector<Point> points);
  // Bits indexed as described above; empty border slices are trimmed.
  static GSet from_bits(GroupSpec group, std::int64_t z_min, std::size_t slices, std::vector<std::uint64_t> bits);
  // Convenience for sets inside H (all z = 0) given by residue vectors.
  static GSet in_torsion(GroupSpec group, std::span<const std::vector<std::int64_t>> residues);
  // Convenience for subsets of pure Z.
  static GSet of_integers(std::span<const std::int64_t> values);
  static GSet of_integers(std::initializer_list<std::int64_t> values) {
    return of_integers(std::span<const std::int64_t>(values.begin(), values.size()));
  }

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::span<const Point> points() const noexcept { return points_; }
  std::vector<Element> elements() const;
  Element element(std::size_t i) const { return group_.to_element(points_[i]); }

  bool contains(Point p) const noexcept;
  bool contains(const Element& e) const;

  // Undefined for the empty set.
  std::int64_t z_min() const noexcept { return z_min_; }
  std::int64_t z_max() const noexcept { return z_min_ + static_cast<std::int64_t>(slices_) - 1; }
  std::size_t slice_count() const noexcept { return slices_; }
  std::span<const std::uint64_t> bits() const noexcept { return bits_; }

  // A_z = A intersect (z + H).
  GSet slice(std::int64_t z) const;
  std::size_t slice_size(std::int64_t z) const;

  friend bool operator==(const GSet& a, const GSet& b) noexcept {
    return a.group_ == b.group_ && a.points_ == b.points_;
  }

 private:
  GroupSpec group_;
  std::vector<Point> points_;
  std::int64_t z_min_ = 0;
  std::size_t slices_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Sorted distinct Z-coordinates: the projection along H.
std::vector<std::int64_t> project_z(const GSet& s);

GSet translate(const GSet& s, const Element& g);
GSet translate(const GSet& s, Point g);
GSet negate(const GSet& s);
GSet set_union(const GSet& a, const GSet& b);
GSet set_intersection(const GSet& a, const GSet& b);
GSet set_difference(const GSet& a, const GSet& b);
bool is_subset(const GSet& a, const GSet& b);

}  // namespace smalldoubling

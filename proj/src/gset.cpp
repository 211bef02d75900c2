#include "smalldoubling/gset.hpp"

#include <algorithm>
#include <bit>

#include "smalldoubling/errors.hpp"

namespace smalldoubling {

GSet::GSet(GroupSpec group, std::span<const Element> elements) : group_(std::move(group)) {
  std::vector<Point> pts;
  pts.reserve(elements.size());
  for (const auto& e : elements) pts.push_back(group_.to_point(e));
  *this = from_points(group_, std::move(pts));
}

GSet GSet::from_points(GroupSpec group, std::vector<Point> points) {
  GSet s(std::move(group));
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty()) return s;
  const std::uint64_t order = s.group_.torsion_order();
  s.z_min_ = points.front().z;
  const std::uint64_t span = static_cast<std::uint64_t>(points.back().z - points.front().z) + 1;
  if (span * order > (std::uint64_t{1} << 32)) throw CapExceeded("set spans too many z-values for the bitset");
  s.slices_ = static_cast<std::size_t>(span);
  s.bits_.assign((s.slices_ * order + 63) / 64, 0);
  for (const auto& p : points) {
    const std::uint64_t bit = static_cast<std::uint64_t>(p.z - s.z_min_) * order + p.idx;
    s.bits_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
  }
  s.points_ = std::move(points);
  return s;
}

GSet GSet::from_bits(GroupSpec group, std::int64_t z_min, std::size_t slices, std::vector<std::uint64_t> bits) {
  const std::uint32_t order = group.torsion_order();
  std::vector<Point> pts;
  for (std::size_t w = 0; w < bits.size(); ++w) {
    std::uint64_t word = bits[w];
    while (word != 0) {
      const std::uint64_t bit = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
      word &= word - 1;
      if (bit >= slices * order) break;
      pts.push_back(Point{z_min + static_cast<std::int64_t>(bit / order), static_cast<std::uint32_t>(bit % order)});
    }
  }
  // Points come out sorted and distinct; from_points rebuilds the trimmed bitset.
  return from_points(std::move(group), std::move(pts));
}

GSet GSet::in_torsion(GroupSpec group, std::span<const std::vector<std::int64_t>> residues) {
  std::vector<Point> pts;
  pts.reserve(residues.size());
  for (const auto& h : residues) pts.push_back(Point{0, group.index_of(h)});
  return from_points(std::move(group), std::move(pts));
}

GSet GSet::of_integers(std::span<const std::int64_t> values) {
  std::vector<Point> pts;
  pts.reserve(values.size());
  for (auto v : values) pts.push_back(Point{v, 0});
  return from_points(GroupSpec(), std::move(pts));
}

std::vector<Element> GSet::elements() const {
  std::vector<Element> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(group_.to_element(p));
  return out;
}

bool GSet::contains(Point p) const noexcept {
  if (points_.empty() || p.z < z_min_ || p.z > z_max()) return false;
  if (p.idx >= group_.torsion_order()) return false;
  const std::uint64_t bit = static_cast<std::uint64_t>(p.z - z_min_) * group_.torsion_order() + p.idx;
  return (bits_[bit >> 6] >> (bit & 63)) & 1U;
}

bool GSet::contains(const Element& e) const { return contains(group_.to_point(e)); }

GSet GSet::slice(std::int64_t z) const {
  auto lo = std::lower_bound(points_.begin(), points_.end(), Point{z, 0});
  auto hi = std::lower_bound(points_.begin(), points_.end(), Point{z + 1, 0});
  return from_points(group_, std::vector<Point>(lo, hi));
}

std::size_t GSet::slice_size(std::int64_t z) const {
  auto lo = std::lower_bound(points_.begin(), points_.end(), Point{z, 0});
  auto hi = std::lower_bound(points_.begin(), points_.end(), Point{z + 1, 0});
  return static_cast<std::size_t>(hi - lo);
}

std::vector<std::int64_t> project_z(const GSet& s) {
  std::vector<std::int64_t> zs;
  for (const auto& p : s.points()) {
    if (zs.empty() || zs.back() != p.z) zs.push_back(p.z);
  }
  return zs;
}

GSet translate(const GSet& s, Point g) {
  const GroupSpec& grp = s.group();
  std::vector<Point> pts;
  pts.reserve(s.size());
  for (const auto& p : s.points()) pts.push_back(Point{p.z + g.z, grp.add_index(p.idx, g.idx)});
  return GSet::from_points(grp, std::move(pts));
}

GSet translate(const GSet& s, const Element& g) { return translate(s, s.group().to_point(g)); }

GSet negate(const GSet& s) {
  const GroupSpec& grp = s.group();
  std::vector<Point> pts;
  pts.reserve(s.size());
  for (const auto& p : s.points()) pts.push_back(Point{-p.z, grp.neg_index(p.idx)});
  return GSet::from_points(grp, std::move(pts));
}

GSet set_union(const GSet& a, const GSet& b) {
  require_same_group(a.group(), b.group(), "set_union");
  std::vector<Point> pts;
  pts.reserve(a.size() + b.size());
  std::set_union(a.points().begin(), a.points().end(), b.points().begin(), b.points().end(), std::back_inserter(pts));
  return GSet::from_points(a.group(), std::move(pts));
}

GSet set_intersection(const GSet& a, const GSet& b) {
  require_same_group(a.group(), b.group(), "set_intersection");
  std::vector<Point> pts;
  for (const auto& p : a.points()) {
    if (b.contains(p)) pts.push_back(p);
  }
  return GSet::from_points(a.group(), std::move(pts));
}

GSet set_difference(const GSet& a, const GSet& b) {
  require_same_group(a.group(), b.group(), "set_difference");
  std::vector<Point> pts;
  for (const auto& p : a.points()) {
    if (!b.contains(p)) pts.push_back(p);
  }
  return GSet::from_points(a.group(), std::move(pts));
}

bool is_subset(const GSet& a, const GSet& b) {
  require_same_group(a.group(), b.group(), "is_subset");
  return std::all_of(a.points().begin(), a.points().end(), [&](Point p) { return b.contains(p); });
}

}  // namespace smalldoubling

#include "smalldoubling/sumset.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "smalldoubling/errors.hpp"

namespace smalldoubling {
GSet sumset(const GSet& a, const GSet& b) {
  require_same_group(a.group(), b.group(), "sumset");
  const GroupSpec& group = a.group();
  if (a.empty() || b.empty()) return GSet(group);
  const std::uint64_t order = group.torsion_order();
  const std::size_t slices = a.slice_count() + b.slice_count() - 1;
  std::vector<std::uint64_t> out((slices * order + 63) / 64, 0);

  if (order == 1) {
    // Pure Z: OR shifted copies of A's bit-vector, one per element of B.
    const auto src = a.bits();
    for (const auto& p : b.points()) {
      const std::uint64_t shift = static_cast<std::uint64_t>(p.z - b.z_min());
      const std::uint64_t ws = shift >> 6;
      const unsigned bs = shift & 63;
      for (std::size_t w = 0; w < src.size(); ++w) {
        if (src[w] == 0) continue;
        out[w + ws] |= src[w] << bs;
        if (bs != 0 && w + ws + 1 < out.size()) out[w + ws + 1] |= src[w] >> (64 - bs);
      }
    }
  } else {
    std::vector<std::vector<std::uint32_t>> a_slices(a.slice_count());
    std::vector<std::vector<std::uint32_t>> b_slices(b.slice_count());
    for (const auto& p : a.points()) a_slices[static_cast<std::size_t>(p.z - a.z_min())].push_back(p.idx);
    for (const auto& p : b.points()) b_slices[static_cast<std::size_t>(p.z - b.z_min())].push_back(p.idx);
    for (std::size_t sa = 0; sa < a_slices.size(); ++sa) {
      if (a_slices[sa].empty()) continue;
      for (std::size_t sb = 0; sb < b_slices.size(); ++sb) {
        if (b_slices[sb].empty()) continue;
        const std::uint64_t base = (sa + sb) * order;
        for (auto x : a_slices[sa]) {
          for (auto y : b_slices[sb]) {
            const std::uint64_t bit = base + group.add_index(x, y);
            out[bit >> 6] |= std::uint64_t{1} << (bit & 63);
          }
        }
      }
    }
  }
  return GSet::from_bits(group, a.z_min() + b.z_min(), slices, std::move(out));
}

GSet difference_set(const GSet& a, const GSet& b) { return sumset(a, negate(b)); }

GSet saturate(const GSet& s, const Subgroup& k) {
  require_same_group(s.group(), k.group(), "saturate");
  if (k.is_trivial()) return s;
  std::vector<Point> pts;
  pts.reserve(s.size() * k.order());
  for (const auto& p : s.points()) {
    for (auto h : k.indices()) pts.push_back(Point{p.z, s.group().add_index(p.idx, h)});
  }
  return GSet::from_points(s.group(), std::move(pts));
}

Subgroup stabilizer(const GSet& s) {
  const GroupSpec& group = s.group();
  if (s.empty()) return Subgroup::trivial(group);
  // Any period maps the least point onto a point of the same slice.
  const Point first = s.points().front();
  std::vector<std::uint32_t> period;
  for (const auto& cand : s.points()) {
    if (cand.z != first.z) break;
    const std::uint32_t h = group.sub_index(cand.idx, first.idx);
    const bool stable = std::all_of(s.points().begin(), s.points().end(), [&](Point p) {
      return s.contains(Point{p.z, group.add_index(p.idx, h)});
    });
    if (stable) period.push_back(h);
  }
  return Subgroup::generated_by(group, period);
}

std::int64_t rep_count(const GSet& s, const Element& g) {
  const GSet shifted = translate(s, g);
  if (s.empty()) return 0;
  // Popcount of the AND over the overlapping part of the two windows.
  const std::uint64_t order = s.group().torsion_order();
  const std::int64_t lo = std::max(s.z_min(), shifted.z_min());
  const std::int64_t hi = std::min(s.z_max(), shifted.z_max());
  if (lo > hi) return 0;
  std::int64_t count = 0;
  const auto sb = s.bits();
  const auto tb = shifted.bits();
  const std::uint64_t s_off = static_cast<std::uint64_t>(lo - s.z_min()) * order;
  const std::uint64_t t_off = static_cast<std::uint64_t>(lo - shifted.z_min()) * order;
  const std::uint64_t len = static_cast<std::uint64_t>(hi - lo + 1) * order;
  auto word_at = [](std::span<const std::uint64_t> bits, std::uint64_t pos) {
    const std::uint64_t w = pos >> 6;
    const unsigned b = pos & 63;
    std::uint64_t v = w < bits.size() ? bits[w] >> b : 0;
    if (b != 0 && w + 1 < bits.size()) v |= bits[w + 1] << (64 - b);
    return v;
  };
  for (std::uint64_t pos = 0; pos < len; pos += 64) {
    std::uint64_t v = word_at(sb, s_off + pos) & word_at(tb, t_off + pos);
    if (len - pos < 64) v &= (std::uint64_t{1} << (len - pos)) - 1;
    count += std::popcount(v);
  }
  return count;
}

std::int64_t deficiency(const GSet& s, const Element& g, const Subgroup& l) {
  require_same_group(s.group(), l.group(), "deficiency");
  const GroupSpec& group = s.group();
  const Point base = group.to_point(g);
  std::int64_t present = 0;
  for (auto h : l.indices()) {
    if (s.contains(Point{base.z, group.add_index(base.idx, h)})) ++present;
  }
  return present == 0 ? 0 : static_cast<std::int64_t>(l.order()) - present;
}

DeficiencyReport total_deficiency(const GSet& s, const Subgroup& l) {
  require_same_group(s.group(), l.group(), "total_deficiency");
  const GroupSpec& group = s.group();
  const auto reps = coset_representatives(l);
  std::map<Point, std::int64_t> hits;
  for (const auto& p : s.points()) ++hits[Point{p.z, reps[p.idx]}];
  DeficiencyReport report;
  for (const auto& [rep, count] : hits) {
    const std::int64_t d = static_cast<std::int64_t>(l.order()) - count;
    report.per_coset.emplace_back(group.to_element(rep), d);
    report.total += d;
  }
  return report;
}

NormalizedInstance normalize(const GSet& a, DeltaRule rule) {
  if (a.empty()) throw InvalidArgument("normalize: empty set");
  const GroupSpec& group = a.group();
  NormalizedInstance inst;
  const Point least = a.points().front();
  const Point shift{-least.z, group.neg_index(least.idx)};
  inst.translation = group.to_element(shift);
  inst.set = translate(a, shift);
  const GSet& s = inst.set;

  inst.l = s.z_max();
  const auto zs = project_z(s);
  inst.n = static_cast<std::int64_t>(zs.size());
  for (auto z : zs) inst.slices.emplace(z, s.slice(z));
  const GSet& a0 = inst.slices.at(0);
  const GSet& al = inst.slices.at(inst.l);
  const Point delta = rule == DeltaRule::CanonicalLeast ? al.points().front() : al.points().back();
  inst.delta = group.to_element(delta);
  inst.a_star = set_intersection(a0, translate(al, Point{-delta.z, group.neg_index(delta.idx)}));
  inst.sigma = static_cast<std::int64_t>(a0.size() + al.size());
  inst.doubling_size = static_cast<std::int64_t>(sumset(s, s).size());
  inst.tau = Rational(inst.doubling_size, static_cast<std::int64_t>(s.size()));
  return inst;
}

std::int64_t cyclic_class_count(const GSet& a, const Element& delta) {
  const GroupSpec& group = a.group();
  const Point d = group.to_point(delta);
  if (d.z == 0) throw InvalidArgument("cyclic_class_count: delta must have nonzero z");
  const std::int64_t step = d.z < 0 ? -d.z : d.z;
  const Point unit = d.z < 0 ? Point{-d.z, group.neg_index(d.idx)} : d;
  std::set<Point> classes;
  for (const auto& p : a.points()) {
    // Subtract t * delta to bring z into [0, |delta.z|).
    std::int64_t t = p.z / step;
    if (p.z % step < 0) --t;
    classes.insert(Point{p.z - t * step, group.sub_index(p.idx, group.scale_index(unit.idx, t))});
  }
  return static_cast<std::int64_t>(classes.size());
}

Rational doubling(const GSet& a) {
  if (a.empty()) throw InvalidArgument("doubling: empty set");
  return Rational(static_cast<std::int64_t>(sumset(a, a).size()), static_cast<std::int64_t>(a.size()));
}

}  // namespace smalldoubling

#include "smalldoubling/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "smalldoubling/errors.hpp"
#include "smalldoubling/sumset.hpp"

namespace smalldoubling {
namespace {

// |2A| < 3(1 - 1/n)|A|, cleared of denominators.
bool small_doubling(std::int64_t doubling_size, std::int64_t size, std::int64_t n) {
  return static_cast<__int128>(doubling_size) * n < static_cast<__int128>(3) * (n - 1) * size;
}

std::vector<std::int64_t> divisors_descending(std::int64_t g) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d * d <= g; ++d) {
    if (g % d != 0) continue;
    out.push_back(d);
    if (d != g / d) out.push_back(g / d);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

std::uint32_t least_in_coset(const GroupSpec& group, std::uint32_t idx, const Subgroup& k) {
  std::uint32_t best = idx;
  for (auto h : k.indices()) best = std::min(best, group.add_index(idx, h));
  return best;
}

}  // namespace

IntProgression min_ap_cover_Z(std::span<const std::int64_t> values) {
  if (values.empty()) throw InvalidArgument("min_ap_cover_Z: empty set");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  std::int64_t g = 0;
  for (auto v : values) g = std::gcd(g, v - *lo);
  if (g == 0) return IntProgression{*lo, 0, 1};
  return IntProgression{*lo, g, (*hi - *lo) / g + 1};
}

GSet CosetProgression::to_set() const {
  const GroupSpec& group = k.group();
  Point p = group.to_point(start);
  const Point step = group.to_point(diff);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(length) * k.order());
  for (std::int64_t j = 0; j < length; ++j) {
    for (auto h : k.indices()) pts.push_back(Point{p.z, group.add_index(p.idx, h)});
    p = Point{p.z + step.z, group.add_index(p.idx, step.idx)};
  }
  return GSet::from_points(group, std::move(pts));
}

bool CosetProgression::covers(const GSet& a) const { return is_subset(a, to_set()); }

bool CosetProgression::is_proper() const {
  return to_set().size() == static_cast<std::size_t>(length) * k.order();
}

CoverNumber cover_number(const GSet& a) {
  if (a.empty()) throw InvalidArgument("cover_number: empty set");
  const auto lattice = subgroup_lattice(a.group());
  CoverNumber best{INT64_MAX, Subgroup::trivial(a.group())};
  for (const auto& k : *lattice) {
    const auto reps = coset_representatives(k);
    std::set<Point> cosets;
    for (const auto& p : a.points()) cosets.insert(Point{p.z, reps[p.idx]});
    const auto count = static_cast<std::int64_t>(cosets.size());
    if (count < best.count) best = CoverNumber{count, k};
  }
  return best;
}

StructureReport find_structure(const GSet& a) {
  if (a.empty()) throw InvalidArgument("find_structure: empty set");
  const GroupSpec& group = a.group();
  const auto lattice = subgroup_lattice(group);

  StructureReport r;
  const auto zs = project_z(a);
  r.n = static_cast<std::int64_t>(zs.size());
  r.l = zs.back() - zs.front();
  r.size = static_cast<std::int64_t>(a.size());
  r.doubling_size = static_cast<std::int64_t>(sumset(a, a).size());
  r.tau = Rational(r.doubling_size, r.size);
  r.hypothesis_small = r.n >= 3 && small_doubling(r.doubling_size, r.size, r.n);

  const std::int64_t z0 = zs.front();
  // First index seen in each slice; a cover needs each slice inside one K-coset.
  std::vector<std::pair<std::int64_t, std::uint32_t>> anchors;
  for (const auto& p : a.points()) {
    if (anchors.empty() || anchors.back().first != p.z) anchors.emplace_back(p.z, p.idx);
  }
  auto slices_fit = [&](const Subgroup& k) {
    std::size_t s = 0;
    for (const auto& p : a.points()) {
      while (anchors[s].first != p.z) ++s;
      if (!k.contains(group.sub_index(p.idx, anchors[s].second))) return false;
    }
    return true;
  };

  bool found = false;
  std::int64_t best_cost = 0;
  std::size_t best_k_order = 0;
  std::uint32_t best_x = 0;

  if (r.n == 1) {
    // One H-coset: |P| = 1 with the least K holding A inside a single coset.
    for (const auto& k : *lattice) {
      if (!slices_fit(k)) continue;
      r.best_cover = CosetProgression{group.to_element(Point{z0, least_in_coset(group, anchors[0].second, k)}),
                                      group.identity(), 1, k};
      found = true;
      break;
    }
  } else {
    std::int64_t g = 0;
    for (auto z : zs) g = std::gcd(g, z - z0);
    const auto divisors = divisors_descending(g);
    for (const auto& k : *lattice) {
      const auto korder = static_cast<std::int64_t>(k.order());
      // Every cover with this K costs at least (l/g)|K|; the lattice is sorted by size.
      if (found && (r.l / g) * korder > best_cost) break;
      if (!slices_fit(k)) continue;
      for (auto d : divisors) {
        const std::int64_t cost = (r.l / d) * korder;
        if (found && (cost > best_cost || (cost == best_cost && k.order() > best_k_order))) break;
        // Least x with anchor(z) - anchor(z0) - j x in K for every slice, j = (z - z0)/d.
        std::optional<std::uint32_t> solution;
        for (std::uint32_t x = 0; x < group.torsion_order() && !solution; ++x) {
          const bool ok = std::all_of(anchors.begin(), anchors.end(), [&](const auto& an) {
            const std::int64_t j = (an.first - z0) / d;
            const std::uint32_t offset = group.sub_index(an.second, anchors[0].second);
            return k.contains(group.sub_index(offset, group.scale_index(x, j)));
          });
          if (ok) solution = x;
        }
        if (!solution) continue;
        const bool better = !found || cost < best_cost || (cost == best_cost && k.order() < best_k_order) ||
                            (cost == best_cost && k.order() == best_k_order && *solution < best_x);
        if (better) {
          found = true;
          best_cost = cost;
          best_k_order = k.order();
          best_x = *solution;
          r.best_cover = CosetProgression{group.to_element(Point{z0, least_in_coset(group, anchors[0].second, k)}),
                                          group.to_element(Point{d, *solution}), r.l / d + 1, k};
        }
        break;
      }
    }
  }
  if (!found) throw std::logic_error("find_structure: K = H must always admit a cover");

  r.cost = r.best_cover.cost();
  r.degenerate = r.best_cover.degenerate();
  r.bound_ok = !r.degenerate && r.cost <= r.doubling_size - r.size;

  const CoverNumber cn = cover_number(a);
  r.cover_number = cn.count;
  r.cover_subgroup = cn.witness;
  if (3 * r.size > r.doubling_size) {
    r.hypothesis_big_threshold = Rational(3 * r.size, 3 * r.size - r.doubling_size);
    r.hypothesis_big = Rational(r.cover_number) > *r.hypothesis_big_threshold;
  }
  return r;
}

Reduction reduce_by_subgroup(const GSet& a, const Subgroup& l) {
  require_same_group(a.group(), l.group(), "reduce_by_subgroup");
  if (a.empty()) throw InvalidArgument("reduce_by_subgroup: empty set");
  if (l.is_trivial()) throw PreconditionViolated("reduce_by_subgroup: L must be nontrivial");
  const GSet two_a = sumset(a, a);

  ReductionCertificate cert;
  cert.modulus_order = static_cast<std::int64_t>(l.order());
  cert.deficiency_a = static_cast<std::int64_t>(saturate(a, l).size() - a.size());
  cert.deficiency_2a = static_cast<std::int64_t>(saturate(two_a, l).size() - two_a.size());
  cert.sumset_condition = cert.deficiency_2a <= cert.deficiency_a;
  cert.small_deficiency = cert.deficiency_a <= cert.modulus_order - 1;
  if (!cert.sumset_condition && !cert.small_deficiency) {
    throw PreconditionViolated("reduce_by_subgroup: Dfc(2A,L) = " + std::to_string(cert.deficiency_2a) +
                               " > Dfc(A,L) = " + std::to_string(cert.deficiency_a) + " and Dfc(A,L) >= |L|");
  }

  QuotientMap map(l);
  GSet reduced = map.apply(a);
  const auto n = static_cast<std::int64_t>(project_z(a).size());
  cert.hypothesis_before = small_doubling(static_cast<std::int64_t>(two_a.size()), static_cast<std::int64_t>(a.size()), n);
  cert.hypothesis_after = small_doubling(static_cast<std::int64_t>(sumset(reduced, reduced).size()),
                                         static_cast<std::int64_t>(reduced.size()), n);
  if (cert.hypothesis_before && cert.sumset_condition && !cert.hypothesis_after) {
    throw std::logic_error("reduce_by_subgroup: quotient lost the small-doubling hypothesis");
  }
  return Reduction{std::move(map), std::move(reduced), cert};
}

CosetProgression lift_structure(const CosetProgression& reduced_cover, const QuotientMap& map) {
  require_same_group(reduced_cover.k.group(), map.target(), "lift_structure");
  return CosetProgression{map.lift(reduced_cover.start), map.lift(reduced_cover.diff), reduced_cover.length,
                          map.preimage(reduced_cover.k)};
}

}  // namespace smalldoubling

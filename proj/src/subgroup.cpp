#include "smalldoubling/subgroup.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <set>

#include "smalldoubling/errors.hpp"

namespace smalldoubling {
namespace {

std::vector<std::uint64_t> empty_mask(const GroupSpec& group) {
  return std::vector<std::uint64_t>((group.torsion_order() + 63) / 64, 0);
}

void set_bit(std::vector<std::uint64_t>& mask, std::uint32_t idx) { mask[idx >> 6] |= std::uint64_t{1} << (idx & 63); }

bool test_bit(const std::vector<std::uint64_t>& mask, std::uint32_t idx) { return (mask[idx >> 6] >> (idx & 63)) & 1U; }

// Closure of `mask` (already a subgroup) together with one more element.
void adjoin(const GroupSpec& group, std::vector<std::uint64_t>& mask, std::vector<std::uint32_t>& members,
            std::uint32_t g) {
  if (test_bit(mask, g)) return;
  const std::vector<std::uint32_t> base = members;
  std::uint32_t step = g;
  while (!test_bit(mask, step)) {
    for (auto m : base) {
      const std::uint32_t e = group.add_index(m, step);
      set_bit(mask, e);
      members.push_back(e);
    }
    step = group.add_index(step, g);
  }
}

}  // namespace

Subgroup::Subgroup(GroupSpec group, std::vector<std::uint64_t> mask) : group_(std::move(group)), mask_(std::move(mask)) {
  for (std::size_t w = 0; w < mask_.size(); ++w) {
    std::uint64_t word = mask_[w];
    while (word != 0) {
      indices_.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(word))));
      word &= word - 1;
    }
  }
}

Subgroup Subgroup::trivial(const GroupSpec& group) {
  auto mask = empty_mask(group);
  set_bit(mask, 0);
  return Subgroup(group, std::move(mask));
}

Subgroup Subgroup::whole(const GroupSpec& group) {
  auto mask = empty_mask(group);
  for (std::uint32_t i = 0; i < group.torsion_order(); ++i) set_bit(mask, i);
  return Subgroup(group, std::move(mask));
}

Subgroup Subgroup::generated_by(const GroupSpec& group, std::span<const std::uint32_t> generators) {
  auto mask = empty_mask(group);
  set_bit(mask, 0);
  std::vector<std::uint32_t> members{0};
  for (auto g : generators) {
    if (g >= group.torsion_order()) throw InvalidArgument("generator index out of range");
    adjoin(group, mask, members, g);
  }
  return Subgroup(group, std::move(mask));
}

Subgroup Subgroup::generated_by(const GroupSpec& group, std::span<const Element> generators) {
  std::vector<std::uint32_t> idx;
  for (const auto& g : generators) {
    if (g.z != 0) throw InvalidArgument("subgroup generators must lie in H (z = 0)");
    idx.push_back(group.index_of(g.h));
  }
  return generated_by(group, idx);
}

Subgroup Subgroup::from_members(const GroupSpec& group, std::span<const Element> members) {
  auto mask = empty_mask(group);
  std::vector<std::uint32_t> idx;
  for (const auto& m : members) {
    if (m.z != 0) throw InvalidArgument("subgroup members must lie in H (z = 0)");
    const std::uint32_t i = group.index_of(m.h);
    if (!test_bit(mask, i)) idx.push_back(i);
    set_bit(mask, i);
  }
  if (!test_bit(mask, 0)) throw InvalidArgument("subgroup must contain the identity");
  for (auto a : idx) {
    for (auto b : idx) {
      if (!test_bit(mask, group.sub_index(a, b))) throw InvalidArgument("member list is not closed under subtraction");
    }
  }
  return Subgroup(group, std::move(mask));
}

bool Subgroup::contains(const Element& e) const { return e.z == 0 && contains(group_.index_of(e.h)); }

bool Subgroup::contains(const Subgroup& other) const {
  require_same_group(group_, other.group_, "Subgroup::contains");
  return std::all_of(other.indices_.begin(), other.indices_.end(), [&](std::uint32_t i) { return contains(i); });
}

GSet Subgroup::members() const {
  std::vector<Point> pts;
  pts.reserve(indices_.size());
  for (auto i : indices_) pts.push_back(Point{0, i});
  return GSet::from_points(group_, std::move(pts));
}

std::vector<std::uint32_t> coset_representatives(const Subgroup& sub) {
  const GroupSpec& group = sub.group();
  const std::uint32_t order = group.torsion_order();
  constexpr std::uint32_t unset = UINT32_MAX;
  std::vector<std::uint32_t> rep(order, unset);
  for (std::uint32_t i = 0; i < order; ++i) {
    if (rep[i] != unset) continue;
    // i is the least index of its coset since all smaller ones are assigned.
    for (auto k : sub.indices()) rep[group.add_index(i, k)] = i;
  }
  return rep;
}

std::shared_ptr<const std::vector<Subgroup>> subgroup_lattice(const GroupSpec& group) {
  if (group.torsion_order() > kMaxLatticeOrder) {
    throw CapExceeded("subgroup enumeration requires |H| <= " + std::to_string(kMaxLatticeOrder) + ", got " +
                      std::to_string(group.torsion_order()));
  }
  static std::mutex mutex;
  static std::map<std::vector<std::int64_t>, std::shared_ptr<const std::vector<Subgroup>>> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(group.torsion());
    if (it != cache.end()) return it->second;
  }

  // Breadth-first over "adjoin one element", starting from {0}. Each
  // subgroup is extended only by coset representatives outside it.
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<Subgroup> found;
  std::vector<std::pair<std::vector<std::uint64_t>, std::vector<std::uint32_t>>> frontier;
  {
    auto mask = empty_mask(group);
    set_bit(mask, 0);
    seen.insert(mask);
    frontier.emplace_back(mask, std::vector<std::uint32_t>{0});
  }
  while (!frontier.empty()) {
    decltype(frontier) next;
    for (auto& [mask, members] : frontier) {
      found.push_back(Subgroup(group, mask));
      const auto reps = coset_representatives(found.back());
      for (std::uint32_t g = 1; g < group.torsion_order(); ++g) {
        if (reps[g] != g || test_bit(mask, g)) continue;
        auto m2 = mask;
        auto mem2 = members;
        adjoin(group, m2, mem2, g);
        if (seen.insert(m2).second) next.emplace_back(std::move(m2), std::move(mem2));
      }
    }
    frontier = std::move(next);
  }
  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return std::lexicographical_compare(a.indices().begin(), a.indices().end(), b.indices().begin(),
                                        b.indices().end());
  });
  auto result = std::make_shared<const std::vector<Subgroup>>(std::move(found));
  std::lock_guard lock(mutex);
  return cache.emplace(group.torsion(), result).first->second;
}

std::vector<Subgroup> subgroups_of_H(const GroupSpec& group) { return *subgroup_lattice(group); }

CyclicDecomposition decompose_subgroup(const GroupSpec& group, std::span<const Element> generators) {
  struct Row {
    Point value;
    std::vector<std::int64_t> coeffs;
  };
  const std::size_t m = generators.size();
  std::vector<Row> rows;
  for (std::size_t i = 0; i < m; ++i) {
    Row r{group.to_point(generators[i]), std::vector<std::int64_t>(m, 0)};
    r.coeffs[i] = 1;
    rows.push_back(std::move(r));
  }
  auto combine = [&](Row& target, const Row& src, std::int64_t q) {
    // target -= q * src
    target.value.z -= q * src.value.z;
    target.value.idx = group.sub_index(target.value.idx, group.scale_index(src.value.idx, q));
    for (std::size_t i = 0; i < m; ++i) target.coeffs[i] -= q * src.coeffs[i];
  };

  // Euclid on the z-coordinates: unimodular row operations keep the
  // generated subgroup fixed and leave at most one row with z != 0.
  std::optional<std::size_t> pivot;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].value.z == 0) continue;
    if (!pivot) {
      pivot = i;
      continue;
    }
    Row* a = &rows[*pivot];
    Row* b = &rows[i];
    while (b->value.z != 0) {
      combine(*a, *b, a->value.z / b->value.z);
      std::swap(a, b);
    }
    // a holds the gcd row; make sure it sits at the pivot slot.
    if (a != &rows[*pivot]) std::swap(rows[*pivot], rows[i]);
  }

  CyclicDecomposition out;
  std::vector<std::uint32_t> torsion_idx;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (pivot && i == *pivot) continue;
    torsion_idx.push_back(rows[i].value.idx);
    out.torsion_generators.push_back(group.to_element(rows[i].value));
    out.torsion_coefficients.push_back(rows[i].coeffs);
  }
  if (pivot) {
    Row g = rows[*pivot];
    if (g.value.z < 0) {
      g.value = Point{-g.value.z, group.neg_index(g.value.idx)};
      for (auto& c : g.coeffs) c = -c;
    }
    out.generator = group.to_element(g.value);
    out.generator_coefficients = g.coeffs;
  } else {
    out.generator_coefficients.assign(m, 0);
  }
  out.torsion = Subgroup::generated_by(group, torsion_idx);
  return out;
}

}  // namespace smalldoubling

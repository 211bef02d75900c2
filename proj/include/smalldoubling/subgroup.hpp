#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "smalldoubling/gset.hpp"

namespace smalldoubling {

// A subgroup of the torsion part H, held as its sorted member indices and a
// membership mask. Every finite subgroup of Z + H lives here.
class Subgroup {
 public:
  Subgroup() : Subgroup(trivial(GroupSpec())) {}

  static Subgroup trivial(const GroupSpec& group);
  static Subgroup whole(const GroupSpec& group);
  static Subgroup generated_by(const GroupSpec& group, std::span<const std::uint32_t> generators);
  static Subgroup generated_by(const GroupSpec& group, std::span<const Element> generators);
  // Throws InvalidArgument unless the members form a subgroup of H.
  static Subgroup from_members(const GroupSpec& group, std::span<const Element> members);

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t order() const noexcept { return indices_.size(); }
  bool is_trivial() const noexcept { return indices_.size() == 1; }
  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  bool contains(std::uint32_t idx) const noexcept { return (mask_[idx >> 6] >> (idx & 63)) & 1U; }
  bool contains(const Element& e) const;
  bool contains(const Subgroup& other) const;
  // The members as a set at z = 0.
  GSet members() const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) noexcept {
    return a.group_ == b.group_ && a.indices_ == b.indices_;
  }

 private:
  Subgroup(GroupSpec group, std::vector<std::uint64_t> mask);
  friend std::shared_ptr<const std::vector<Subgroup>> subgroup_lattice(const GroupSpec& group);

  GroupSpec group_;
  std::vector<std::uint64_t> mask_;
  std::vector<std::uint32_t> indices_;
};

// For every index of H, the least index in its coset modulo `sub`.
std::vector<std::uint32_t> coset_representatives(const Subgroup& sub);

// All subgroups of H, ordered by size and then by member list. Results are
// memoized per group. Throws CapExceeded when |H| > kMaxLatticeOrder.
std::shared_ptr<const std::vector<Subgroup>> subgroup_lattice(const GroupSpec& group);
std::vector<Subgroup> subgroups_of_H(const GroupSpec& group);

// G' = <g> + K for the subgroup G' of Z + H generated by `generators`.
// The coefficient vectors express g and each generator of K as integer
// combinations of the inputs, so the decomposition can be re-checked.
struct CyclicDecomposition {
  std::optional<Element> generator;  // absent when G' lies inside H
  std::vector<std::int64_t> generator_coefficients;
  Subgroup torsion;  // K = G' intersect H
  std::vector<Element> torsion_generators;
  std::vector<std::vector<std::int64_t>> torsion_coefficients;
};

CyclicDecomposition decompose_subgroup(const GroupSpec& group, std::span<const Element> generators);

}  // namespace smalldoubling

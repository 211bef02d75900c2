#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace smalldoubling {

// Largest torsion part |H| the library will represent.
inline constexpr std::uint32_t kMaxTorsionOrder = 4096;
// Largest |H| for which the full subgroup lattice is enumerated.
inline constexpr std::uint32_t kMaxLatticeOrder = 256;

// An element (z, h) of Z + H. Residues are kept reduced.
struct Element {
  std::int64_t z = 0;
  std::vector<std::int64_t> h;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

// Compact form used inside sets: z plus the mixed-radix index of h.
// Index order agrees with lexicographic order on residue vectors.
struct Point {
  std::int64_t z = 0;
  std::uint32_t idx = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

namespace detail {
struct GroupData;
}

// The ambient group Z + Z/d1 + ... + Z/dk. Instances with equal torsion
// lists share one interned table, so copies are cheap.
class GroupSpec {
 public:
  GroupSpec();  // pure Z
  explicit GroupSpec(std::vector<std::int64_t> torsion);

  const std::vector<std::int64_t>& torsion() const noexcept;
  std::size_t torsion_rank() const noexcept { return torsion().size(); }
  // |H|
  std::uint32_t torsion_order() const noexcept;

  std::uint32_t index_of(std::span<const std::int64_t> h) const;
  std::vector<std::int64_t> residues(std::uint32_t idx) const;
  std::int64_t residue(std::uint32_t idx, std::size_t coord) const;

  std::uint32_t add_index(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t neg_index(std::uint32_t a) const noexcept;
  std::uint32_t sub_index(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t scale_index(std::uint32_t a, std::int64_t k) const noexcept;
  // Additive order of the index as an element of H.
  std::uint32_t order_of(std::uint32_t a) const noexcept;

  Point to_point(const Element& e) const;
  Element to_element(Point p) const;
  // Validates shape and range; throws GroupMismatch otherwise.
  void check(const Element& e) const;

  Element add(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element sub(const Element& a, const Element& b) const;
  Element identity() const;

  std::string to_string() const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) noexcept;

 private:
  std::shared_ptr<const detail::GroupData> data_;
};

// Throws GroupMismatch unless both groups agree.
void require_same_group(const GroupSpec& a, const GroupSpec& b, const char* what);

}  // namespace smalldoubling

#include "smalldoubling/group.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "smalldoubling/errors.hpp"

namespace smalldoubling {
namespace detail {

struct GroupData {
  std::vector<std::int64_t> torsion;
  std::vector<std::uint32_t> strides;
  std::uint32_t order = 1;
  // digits[idx * k + i] is coordinate i of index idx.
  std::vector<std::uint16_t> digits;
  // Full addition table for small H; empty otherwise.
  std::vector<std::uint16_t> add_table;
};

namespace {

constexpr std::uint32_t kAddTableLimit = 256;

std::shared_ptr<const GroupData> build(std::vector<std::int64_t> torsion) {
  auto data = std::make_shared<GroupData>();
  std::uint64_t order = 1;
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (torsion[i] < 2) {
      throw InvalidArgument("torsion[" + std::to_string(i) + "] = " + std::to_string(torsion[i]) +
                            " must be >= 2");
    }
    order *= static_cast<std::uint64_t>(torsion[i]);
    if (order > kMaxTorsionOrder) {
      throw CapExceeded("|H| exceeds the cap of " + std::to_string(kMaxTorsionOrder));
    }
  }
  const std::size_t k = torsion.size();
  data->order = static_cast<std::uint32_t>(order);
  data->strides.assign(k, 1);
  for (std::size_t i = k; i-- > 1;) {
    data->strides[i - 1] = data->strides[i] * static_cast<std::uint32_t>(torsion[i]);
  }
  data->digits.assign(static_cast<std::size_t>(order) * k, 0);
  for (std::uint32_t idx = 0; idx < order; ++idx) {
    for (std::size_t i = 0; i < k; ++i) {
      data->digits[idx * k + i] =
          static_cast<std::uint16_t>((idx / data->strides[i]) % static_cast<std::uint32_t>(torsion[i]));
    }
  }
  data->torsion = std::move(torsion);
  if (order <= kAddTableLimit && k > 0) {
    data->add_table.resize(order * order);
    for (std::uint32_t a = 0; a < order; ++a) {
      for (std::uint32_t b = 0; b < order; ++b) {
        std::uint32_t r = 0;
        for (std::size_t i = 0; i < k; ++i) {
          const auto d = static_cast<std::uint32_t>(data->torsion[i]);
          r += ((data->digits[a * k + i] + data->digits[b * k + i]) % d) * data->strides[i];
        }
        data->add_table[a * order + b] = static_cast<std::uint16_t>(r);
      }
    }
  }
  return data;
}

std::shared_ptr<const GroupData> intern(std::vector<std::int64_t> torsion) {
  static std::mutex mutex;
  static std::map<std::vector<std::int64_t>, std::shared_ptr<const GroupData>> registry;
  std::lock_guard lock(mutex);
  auto it = registry.find(torsion);
  if (it != registry.end()) return it->second;
  auto data = build(torsion);
  registry.emplace(std::move(torsion), data);
  return data;
}

}  // namespace
}  // namespace detail

GroupSpec::GroupSpec() : data_(detail::intern({})) {}

GroupSpec::GroupSpec(std::vector<std::int64_t> torsion) : data_(detail::intern(std::move(torsion))) {}

const std::vector<std::int64_t>& GroupSpec::torsion() const noexcept { return data_->torsion; }

std::uint32_t GroupSpec::torsion_order() const noexcept { return data_->order; }

std::uint32_t GroupSpec::index_of(std::span<const std::int64_t> h) const {
  if (h.size() != data_->torsion.size()) {
    throw GroupMismatch("residue vector has " + std::to_string(h.size()) + " coordinates, group " +
                        to_string() + " expects " + std::to_string(data_->torsion.size()));
  }
  std::uint32_t idx = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] < 0 || h[i] >= data_->torsion[i]) {
      throw InvalidArgument("residue " + std::to_string(h[i]) + " out of range for Z/" +
                          std::to_string(data_->torsion[i]));
    }
    idx += static_cast<std::uint32_t>(h[i]) * data_->strides[i];
  }
  return idx;
}

std::vector<std::int64_t> GroupSpec::residues(std::uint32_t idx) const {
  const std::size_t k = data_->torsion.size();
  std::vector<std::int64_t> h(k);
  for (std::size_t i = 0; i < k; ++i) h[i] = data_->digits[idx * k + i];
  return h;
}

std::int64_t GroupSpec::residue(std::uint32_t idx, std::size_t coord) const {
  return data_->digits[idx * data_->torsion.size() + coord];
}

std::uint32_t GroupSpec::add_index(std::uint32_t a, std::uint32_t b) const noexcept {
  const auto& d = *data_;
  if (!d.add_table.empty()) return d.add_table[a * d.order + b];
  const std::size_t k = d.torsion.size();
  std::uint32_t r = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto m = static_cast<std::uint32_t>(d.torsion[i]);
    r += ((d.digits[a * k + i] + d.digits[b * k + i]) % m) * d.strides[i];
  }
  return r;
}

std::uint32_t GroupSpec::neg_index(std::uint32_t a) const noexcept {
  const auto& d = *data_;
  const std::size_t k = d.torsion.size();
  std::uint32_t r = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto m = static_cast<std::uint32_t>(d.torsion[i]);
    r += ((m - d.digits[a * k + i]) % m) * d.strides[i];
  }
  return r;
}

std::uint32_t GroupSpec::sub_index(std::uint32_t a, std::uint32_t b) const noexcept {
  return add_index(a, neg_index(b));
}

std::uint32_t GroupSpec::scale_index(std::uint32_t a, std::int64_t k) const noexcept {
  const auto& d = *data_;
  const std::size_t rank = d.torsion.size();
  std::uint32_t r = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    const std::int64_t m = d.torsion[i];
    std::int64_t v = (static_cast<std::int64_t>(d.digits[a * rank + i]) * (k % m)) % m;
    if (v < 0) v += m;
    r += static_cast<std::uint32_t>(v) * d.strides[i];
  }
  return r;
}

std::uint32_t GroupSpec::order_of(std::uint32_t a) const noexcept {
  const auto& d = *data_;
  const std::size_t k = d.torsion.size();
  std::int64_t ord = 1;
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t m = d.torsion[i];
    const std::int64_t c = d.digits[a * k + i];
    ord = std::lcm(ord, m / std::gcd(m, c));
  }
  return static_cast<std::uint32_t>(ord);
}

Point GroupSpec::to_point(const Element& e) const { return Point{e.z, index_of(e.h)}; }

Element GroupSpec::to_element(Point p) const { return Element{p.z, residues(p.idx)}; }

void GroupSpec::check(const Element& e) const { (void)index_of(e.h); }

Element GroupSpec::add(const Element& a, const Element& b) const {
  const Point pa = to_point(a);
  const Point pb = to_point(b);
  return to_element(Point{pa.z + pb.z, add_index(pa.idx, pb.idx)});
}

Element GroupSpec::neg(const Element& a) const {
  const Point p = to_point(a);
  return to_element(Point{-p.z, neg_index(p.idx)});
}

Element GroupSpec::sub(const Element& a, const Element& b) const { return add(a, neg(b)); }

Element GroupSpec::identity() const { return Element{0, std::vector<std::int64_t>(data_->torsion.size(), 0)}; }

std::string GroupSpec::to_string() const {
  std::string s = "Z";
  for (auto d : data_->torsion) s += "+Z/" + std::to_string(d);
  return s;
}

bool operator==(const GroupSpec& a, const GroupSpec& b) noexcept { return a.data_ == b.data_; }

void require_same_group(const GroupSpec& a, const GroupSpec& b, const char* what) {
  if (!(a == b)) {
    throw GroupMismatch(std::string(what) + ": operands live in " + a.to_string() + " and " + b.to_string());
  }
}

}  // namespace smalldoubling

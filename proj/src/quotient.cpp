#include "smalldoubling/quotient.hpp"

#include <cstdlib>
#include <numeric>

#include "smalldoubling/errors.hpp"

namespace smalldoubling {
namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

// A minimal-ish generating set of L: greedily keep elements not yet spanned.
std::vector<std::uint32_t> generators_of(const Subgroup& sub) {
  const GroupSpec& group = sub.group();
  std::vector<std::uint32_t> gens;
  Subgroup span = Subgroup::trivial(group);
  for (auto idx : sub.indices()) {
    if (span.contains(idx)) continue;
    gens.push_back(idx);
    span = Subgroup::generated_by(group, gens);
  }
  return gens;
}

// Smith normal form of the relation rows R (rows x k). Returns the diagonal
// and the column transform V with U R V = diag, so that h -> (h V) mod s_i
// has kernel equal to the row lattice of R.
std::pair<std::vector<std::int64_t>, Matrix> smith_columns(Matrix r, std::size_t k) {
  const std::size_t rows = r.size();
  Matrix v(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) v[i][i] = 1;

  auto swap_cols = [&](std::size_t a, std::size_t b) {
    for (auto& row : r) std::swap(row[a], row[b]);
    for (auto& row : v) std::swap(row[a], row[b]);
  };
  auto col_sub = [&](std::size_t target, std::size_t src, std::int64_t q) {
    for (auto& row : r) row[target] -= q * row[src];
    for (auto& row : v) row[target] -= q * row[src];
  };

  std::vector<std::int64_t> diag(k, 0);
  for (std::size_t t = 0; t < k; ++t) {
    for (;;) {
      // Move the smallest nonzero entry of the trailing block to (t, t).
      std::size_t pi = rows, pj = k;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < k; ++j) {
          if (r[i][j] != 0 && (pi == rows || std::llabs(r[i][j]) < std::llabs(r[pi][pj]))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) break;  // remaining block is zero
      std::swap(r[t], r[pi]);
      if (pj != t) swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const std::int64_t q = r[i][t] / r[t][t];
        if (q != 0) {
          for (std::size_t j = t; j < k; ++j) r[i][j] -= q * r[t][j];
        }
        if (r[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < k; ++j) {
        const std::int64_t q = r[t][j] / r[t][t];
        if (q != 0) col_sub(j, t, q);
        if (r[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce divisibility so the diagonal comes out as invariant factors.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < k; ++j) {
          if (r[i][j] % r[t][t] != 0) {
            for (std::size_t c = t; c < k; ++c) r[t][c] += r[i][c];
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    diag[t] = std::llabs(r[t][t]);
  }
  return {diag, v};
}

}  // namespace

QuotientMap::QuotientMap(Subgroup modulus) : modulus_(std::move(modulus)) {
  const GroupSpec& src = modulus_.group();
  const auto& torsion = src.torsion();
  const std::size_t k = torsion.size();
  const std::uint32_t order = src.torsion_order();

  if (k == 0) {
    target_ = src;
    image_ = {0};
    least_preimage_ = {0};
    return;
  }

  Matrix rel;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::int64_t> row(k, 0);
    row[i] = torsion[i];
    rel.push_back(std::move(row));
  }
  for (auto g : generators_of(modulus_)) rel.push_back(src.residues(g));
  auto [diag, v] = smith_columns(std::move(rel), k);

  std::vector<std::size_t> kept;
  std::vector<std::int64_t> target_torsion;
  for (std::size_t i = 0; i < k; ++i) {
    if (diag[i] >= 2) {
      kept.push_back(i);
      target_torsion.push_back(diag[i]);
    }
  }
  target_ = GroupSpec(target_torsion);

  image_.resize(order);
  std::vector<std::int64_t> coords(kept.size());
  for (std::uint32_t idx = 0; idx < order; ++idx) {
    const auto h = src.residues(idx);
    for (std::size_t c = 0; c < kept.size(); ++c) {
      const std::size_t col = kept[c];
      const std::int64_t mod = diag[col];
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < k; ++i) acc = (acc + (h[i] % mod) * (v[i][col] % mod)) % mod;
      if (acc < 0) acc += mod;
      coords[c] = acc;
    }
    image_[idx] = target_.index_of(coords);
  }

  least_preimage_.assign(target_.torsion_order(), UINT32_MAX);
  std::size_t kernel = 0;
  for (std::uint32_t idx = 0; idx < order; ++idx) {
    if (least_preimage_[image_[idx]] == UINT32_MAX) least_preimage_[image_[idx]] = idx;
    if (image_[idx] == 0) {
      ++kernel;
      if (!modulus_.contains(idx)) throw std::logic_error("quotient map kernel exceeds the modulus");
    }
  }
  if (kernel != modulus_.order() ||
      static_cast<std::size_t>(target_.torsion_order()) * modulus_.order() != order) {
    throw std::logic_error("quotient map is not onto H/L");
  }
}

Element QuotientMap::apply(const Element& e) const { return target_.to_element(apply(source().to_point(e))); }

GSet QuotientMap::apply(const GSet& s) const {
  require_same_group(s.group(), source(), "quotient");
  std::vector<Point> pts;
  pts.reserve(s.size());
  for (const auto& p : s.points()) pts.push_back(apply(p));
  return GSet::from_points(target_, std::move(pts));
}

Element QuotientMap::representative(const Element& e) const {
  const Point p = source().to_point(e);
  return source().to_element(Point{p.z, least_preimage_[image_[p.idx]]});
}

Element QuotientMap::lift(const Element& q) const { return source().to_element(lift(target_.to_point(q))); }

GSet QuotientMap::preimage(const GSet& s) const {
  require_same_group(s.group(), target_, "preimage");
  std::vector<Point> pts;
  for (const auto& q : s.points()) {
    const std::uint32_t base = least_preimage_[q.idx];
    for (auto l : modulus_.indices()) pts.push_back(Point{q.z, source().add_index(base, l)});
  }
  return GSet::from_points(source(), std::move(pts));
}

Subgroup QuotientMap::preimage(const Subgroup& s) const {
  require_same_group(s.group(), target_, "preimage");
  std::vector<std::uint32_t> gens(modulus_.indices().begin(), modulus_.indices().end());
  for (auto q : s.indices()) gens.push_back(least_preimage_[q]);
  return Subgroup::generated_by(source(), gens);
}

GSet quotient(const GSet& s, const Subgroup& modulus) {
  require_same_group(s.group(), modulus.group(), "quotient");
  if (modulus.is_trivial()) return s;
  return QuotientMap(modulus).apply(s);
}

}  // namespace smalldoubling

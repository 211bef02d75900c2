#pragma once

// Brute-force reference implementations. They work on plain residue vectors
// and share no arithmetic with the library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "smalldoubling/gset.hpp"
#include "smalldoubling/random.hpp"

namespace oracle {

using Torsion = std::vector<std::int64_t>;
using Tuple = std::pair<std::int64_t, std::vector<std::int64_t>>;
using NaiveSet = std::set<Tuple>;
using Residues = std::vector<std::int64_t>;

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

inline Residues add_h(const Torsion& t, const Residues& a, const Residues& b) {
  Residues out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = mod(a[i] + b[i], t[i]);
  return out;
}

inline Residues neg_h(const Torsion& t, const Residues& a) {
  Residues out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = mod(-a[i], t[i]);
  return out;
}

inline Residues scale_h(const Torsion& t, const Residues& a, std::int64_t k) {
  Residues out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = mod(a[i] * mod(k, t[i]), t[i]);
  return out;
}

inline Tuple add(const Torsion& t, const Tuple& a, const Tuple& b) { return {a.first + b.first, add_h(t, a.second, b.second)}; }

// All of H in lexicographic order.
inline std::vector<Residues> all_h(const Torsion& t) {
  std::vector<Residues> cur{Residues{}};
  for (auto d : t) {
    std::vector<Residues> next;
    for (const auto& r : cur) {
      for (std::int64_t v = 0; v < d; ++v) {
        auto r2 = r;
        r2.push_back(v);
        next.push_back(std::move(r2));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

inline NaiveSet to_naive(const smalldoubling::GSet& s) {
  NaiveSet out;
  for (const auto& e : s.elements()) out.insert({e.z, e.h});
  return out;
}

inline smalldoubling::GSet from_naive(const smalldoubling::GroupSpec& g, const NaiveSet& s) {
  std::vector<smalldoubling::Element> es;
  for (const auto& [z, h] : s) es.push_back({z, h});
  return smalldoubling::GSet(g, es);
}

inline NaiveSet sumset(const Torsion& t, const NaiveSet& a, const NaiveSet& b) {
  NaiveSet out;
  for (const auto& x : a) {
    for (const auto& y : b) out.insert(add(t, x, y));
  }
  return out;
}

inline NaiveSet translate(const Torsion& t, const NaiveSet& a, const Tuple& g) {
  NaiveSet out;
  for (const auto& x : a) out.insert(add(t, x, g));
  return out;
}

// {h in H : S + h = S}, as residue vectors.
inline std::set<Residues> stabilizer(const Torsion& t, const NaiveSet& s) {
  std::set<Residues> out;
  for (const auto& h : all_h(t)) {
    if (translate(t, s, {0, h}) == s) out.insert(h);
  }
  return out;
}

// Every subgroup of H, found by testing each subset containing 0 for
// closure under addition. Only for |H| <= 16.
inline std::set<std::set<Residues>> subgroups(const Torsion& t) {
  const auto h = all_h(t);
  const std::size_t m = h.size();
  std::set<std::set<Residues>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (m - 1)); ++mask) {
    std::set<Residues> members{h[0]};
    for (std::size_t i = 1; i < m; ++i) {
      if ((mask >> (i - 1)) & 1U) members.insert(h[i]);
    }
    bool closed = true;
    for (const auto& a : members) {
      for (const auto& b : members) {
        if (!members.count(add_h(t, a, b))) {
          closed = false;
          break;
        }
      }
      if (!closed) break;
    }
    if (closed) out.insert(members);
  }
  return out;
}

inline Residues coset_key(const Torsion& t, const Residues& x, const std::set<Residues>& k) {
  Residues best;
  bool first = true;
  for (const auto& y : k) {
    auto s = add_h(t, x, y);
    if (first || s < best) best = s;
    first = false;
  }
  return best;
}

inline std::int64_t cover_number(const Torsion& t, const NaiveSet& a) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& k : subgroups(t)) {
    std::set<Tuple> cosets;
    for (const auto& [z, h] : a) cosets.insert({z, coset_key(t, h, k)});
    best = std::min<std::int64_t>(best, static_cast<std::int64_t>(cosets.size()));
  }
  return best;
}

struct Cover {
  std::int64_t cost = 0;
  std::size_t k_order = 0;
};

// Least (|P|-1)|K| over covers A in P + K with psi(diff) > 0, searching every
// subgroup K, every start in the lowest slice and every diff (d, x), d <= l.
// For a single slice the cover is {start} + K with cost 0.
inline Cover min_cover(const Torsion& t, const NaiveSet& a) {
  const std::int64_t z0 = a.begin()->first;
  const std::int64_t l = a.rbegin()->first - z0;
  Cover best{std::numeric_limits<std::int64_t>::max(), 0};
  for (const auto& k : subgroups(t)) {
    const auto ko = static_cast<std::int64_t>(k.size());
    for (const auto& start : a) {
      if (start.first != z0) break;
      if (l == 0) {
        bool ok = true;
        for (const auto& p : a) ok = ok && k.count(add_h(t, p.second, neg_h(t, start.second)));
        if (ok && (0 < best.cost || (0 == best.cost && k.size() < best.k_order))) best = {0, k.size()};
        continue;
      }
      for (std::int64_t d = 1; d <= l; ++d) {
        if (l % d != 0) continue;
        const std::int64_t cost = (l / d) * ko;
        if (cost > best.cost) continue;
        for (const auto& x : all_h(t)) {
          bool ok = true;
          for (const auto& p : a) {
            const std::int64_t dz = p.first - z0;
            if (dz % d != 0) {
              ok = false;
              break;
            }
            const auto term = add_h(t, start.second, scale_h(t, x, dz / d));
            if (!k.count(add_h(t, p.second, neg_h(t, term)))) {
              ok = false;
              break;
            }
          }
          if (ok && (cost < best.cost || (cost == best.cost && k.size() < best.k_order))) best = {cost, k.size()};
        }
      }
    }
  }
  return best;
}

// Random subset of [zlo, zhi] x H, each cell kept with probability num/den.
inline NaiveSet random_set(smalldoubling::Rng& rng, const Torsion& t, std::int64_t zlo, std::int64_t zhi,
                           std::uint64_t num = 1, std::uint64_t den = 2) {
  NaiveSet out;
  const auto h = all_h(t);
  for (std::int64_t z = zlo; z <= zhi; ++z) {
    for (const auto& r : h) {
      if (rng.below(den) < num) out.insert({z, r});
    }
  }
  if (out.empty()) out.insert({zlo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(zhi - zlo + 1))),
                               h[rng.below(h.size())]});
  return out;
}

inline std::vector<std::int64_t> projection(const NaiveSet& a) {
  std::set<std::int64_t> zs;
  for (const auto& p : a) zs.insert(p.first);
  return {zs.begin(), zs.end()};
}

// Which cases of the pairs lemma hold for B (0 in B, |B| = N+1,
// |2B| = 2N+1), as bits 1 (case i), 2 (case ii), 4 (case iii).
inline unsigned pairs_cases(const Torsion& t, const NaiveSet& b) {
  const std::vector<Tuple> elems(b.begin(), b.end());
  const std::size_t n = elems.size() - 1;
  const NaiveSet two = sumset(t, b, b);
  std::vector<Tuple> targets;
  for (const auto& s : two) {
    if (!b.count(s)) targets.push_back(s);
  }
  unsigned found = 0;

  std::vector<std::size_t> uses(elems.size(), 0);
  std::function<bool(std::size_t)> assign = [&](std::size_t k) {
    if (k == targets.size()) return true;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = i; j < elems.size(); ++j) {
        if (add(t, elems[i], elems[j]) != targets[k]) continue;
        ++uses[i];
        ++uses[j];
        const bool ok = uses[i] <= n && uses[j] <= n && assign(k + 1);
        --uses[i];
        --uses[j];
        if (ok) return true;
      }
    }
    return false;
  };
  if (assign(0)) found |= 1U;

  const Tuple zero{0, Residues(t.size(), 0)};
  auto is_subgroup = [&](const NaiveSet& l) {
    if (!l.count(zero)) return false;
    for (const auto& x : l) {
      if (x.first != 0) return false;
      for (const auto& y : l) {
        if (!l.count(add(t, x, y))) return false;
      }
    }
    return true;
  };
  for (const auto& g : elems) {
    NaiveSet rest = b;
    rest.erase(g);
    const Tuple twice = add(t, g, g);
    if (rest.size() == n && is_subgroup(rest) && !rest.count(twice)) found |= 2U;
    if (n == 2) {
      // B = (g + L) u {0} with L = {0, s}
      for (const auto& x : elems) {
        if (x == zero || x == g) continue;
        const Tuple s{x.first - g.first, add_h(t, x.second, neg_h(t, g.second))};
        const NaiveSet l{zero, s};
        if (g != zero && is_subgroup(l) && l.size() == 2 && !l.count(twice)) found |= 4U;
      }
    }
  }
  return found;
}

}  // namespace oracle

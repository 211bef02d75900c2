#include "smalldoubling/lab.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "smalldoubling/errors.hpp"

namespace smalldoubling {
namespace {

Verdict pass(bool ok, std::string detail, bool equality = false) {
  return Verdict{ok ? Outcome::Pass : Outcome::Fail, equality, std::move(detail)};
}

Verdict not_applicable(std::string detail) { return Verdict{Outcome::NotApplicable, false, std::move(detail)}; }

std::int64_t ssize(const GSet& s) { return static_cast<std::int64_t>(s.size()); }

std::int64_t projection_size(const GSet& s) { return static_cast<std::int64_t>(project_z(s).size()); }

// Is the finite set a subgroup of H?
bool is_subgroup_set(const GSet& s) {
  if (s.empty()) return false;
  if (!s.contains(Point{0, 0})) return false;
  const GroupSpec& group = s.group();
  for (const auto& a : s.points()) {
    if (a.z != 0) return false;
    for (const auto& b : s.points()) {
      if (!s.contains(Point{0, group.sub_index(a.idx, b.idx)})) return false;
    }
  }
  return true;
}

}  // namespace

const char* to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::NotApplicable: return "not_applicable";
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
  }
  return "?";
}

const char* to_string(PairsCase c) noexcept {
  switch (c) {
    case PairsCase::I: return "i";
    case PairsCase::II: return "ii";
    case PairsCase::III: return "iii";
  }
  return "?";
}

Verdict check_kneser(const GSet& b, const GSet& c) {
  if (b.empty() || c.empty()) return not_applicable("empty summand");
  const GSet bc = sumset(b, c);
  if (ssize(bc) > ssize(b) + ssize(c) - 1) return not_applicable("|B+C| > |B|+|C|-1");
  const Subgroup l = stabilizer(bc);
  const std::int64_t rhs = ssize(saturate(b, l)) + ssize(saturate(c, l)) - static_cast<std::int64_t>(l.order());
  return pass(ssize(bc) == rhs,
              "|B+C| = " + std::to_string(bc.size()) + ", |B+L|+|C+L|-|L| = " + std::to_string(rhs) +
                  ", |L| = " + std::to_string(l.order()),
              true);
}

Verdict check_kneser_periodic(const GSet& b, const GSet& c) {
  if (b.empty() || c.empty()) return not_applicable("empty summand");
  const GSet bc = sumset(b, c);
  if (ssize(bc) >= ssize(b) + ssize(c) - 1) return not_applicable("|B+C| >= |B|+|C|-1");
  return pass(!stabilizer(bc).is_trivial(), "|B+C| = " + std::to_string(bc.size()));
}

Verdict check_lemma_1_5(const GSet& b) {
  if (b.empty()) return not_applicable("empty set");
  const GSet two_b = sumset(b, b);
  if (2 * ssize(two_b) >= 3 * ssize(b)) return not_applicable("|2B| >= 3|B|/2");
  const GSet diff = difference_set(b, b);
  if (!is_subgroup_set(diff)) return pass(false, "B-B is not a subgroup");
  const bool coset = two_b == translate(diff, two_b.points().front());
  return pass(coset, coset ? "B-B is a subgroup of order " + std::to_string(diff.size()) + "; 2B is a coset"
                           : "2B is not a coset of B-B");
}

PairsDecomposition decompose_pairs(const GSet& b, std::size_t max_n) {
  const GroupSpec& group = b.group();
  if (!b.contains(Point{0, 0})) throw PreconditionViolated("decompose_pairs: 0 must lie in B");
  if (b.size() < 3) throw PreconditionViolated("decompose_pairs: need N = |B| - 1 >= 2");
  const std::size_t n = b.size() - 1;
  const GSet two_b = sumset(b, b);
  if (two_b.size() != 2 * n + 1) {
    throw PreconditionViolated("decompose_pairs: |2B| = " + std::to_string(two_b.size()) + ", expected 2N+1 = " +
                               std::to_string(2 * n + 1));
  }
  if (n > max_n) throw CapExceeded("decompose_pairs: N = " + std::to_string(n) + " exceeds " + std::to_string(max_n));

  const auto pts = b.points();
  const GSet targets = set_difference(two_b, b);

  // Candidate unordered pairs per target sum, fewest candidates first.
  struct Target {
    Point sum;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
  };
  std::vector<Target> work;
  for (const auto& s : targets.points()) {
    Target t{s, {}};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i; j < pts.size(); ++j) {
        if (Point{pts[i].z + pts[j].z, group.add_index(pts[i].idx, pts[j].idx)} == s) t.pairs.emplace_back(i, j);
      }
    }
    work.push_back(std::move(t));
  }
  std::stable_sort(work.begin(), work.end(),
                   [](const Target& x, const Target& y) { return x.pairs.size() < y.pairs.size(); });

  std::vector<std::size_t> uses(pts.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> chosen(work.size());
  std::function<bool(std::size_t)> search = [&](std::size_t t) {
    if (t == work.size()) return true;
    for (const auto& [i, j] : work[t].pairs) {
      ++uses[i];
      ++uses[j];
      if (uses[i] <= n && uses[j] <= n) {
        chosen[t] = {i, j};
        if (search(t + 1)) return true;
      }
      --uses[i];
      --uses[j];
    }
    return false;
  };

  PairsDecomposition dec;
  if (search(0)) {
    dec.kind = PairsCase::I;
    std::vector<std::pair<Point, std::pair<std::size_t, std::size_t>>> by_sum;
    for (std::size_t t = 0; t < work.size(); ++t) by_sum.emplace_back(work[t].sum, chosen[t]);
    std::sort(by_sum.begin(), by_sum.end());
    for (const auto& [sum, ij] : by_sum) dec.pairs.emplace_back(b.element(ij.first), b.element(ij.second));
    return dec;
  }

  // No bounded assignment: B must be L u {g} or (g + L) u {0}.
  const Point zero{0, 0};
  for (const auto& g : pts) {
    if (g == zero) continue;
    const Point twice{2 * g.z, group.add_index(g.idx, g.idx)};
    std::vector<Point> rest;
    for (const auto& p : pts) {
      if (p != g) rest.push_back(p);
    }
    const GSet l_set = GSet::from_points(group, rest);
    if (is_subgroup_set(l_set) && !l_set.contains(twice)) {
      dec.kind = PairsCase::II;
      dec.l = Subgroup::generated_by(group, l_set.elements());
      dec.g = group.to_element(g);
    } else if (n == 2) {
      std::vector<Point> others;
      for (const auto& p : pts) {
        if (p != zero && p != g) others.push_back(p);
      }
      const Point other = others.front();
      if (other.z != g.z) continue;
      const std::uint32_t step = group.sub_index(other.idx, g.idx);
      if (group.add_index(step, step) != 0) continue;
      const Subgroup l = Subgroup::generated_by(group, std::vector<std::uint32_t>{step});
      if (g.z == 0 ? l.contains(group.add_index(g.idx, g.idx)) : false) continue;
      dec.kind = PairsCase::III;
      dec.l = l;
      dec.g = group.to_element(g);
    } else {
      continue;
    }
    for (const auto& p : pts) {
      if (p != zero) dec.pairs.emplace_back(group.to_element(p), group.to_element(g));
    }
    return dec;
  }
  // For N = 2 a triple {0, b, g} with 2b or 2g in B (an arithmetic progression,
  // say) fits no case; the statement only covers N >= 3 there.
  if (n == 2) throw PreconditionViolated("decompose_pairs: N = 2 and B fits none of the three cases");
  throw std::logic_error("decompose_pairs: B fits none of the three cases");
}

bool validate_pairs(const GSet& b, const PairsDecomposition& dec, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const GroupSpec& group = b.group();
  const std::size_t n = b.size() - 1;
  const GSet two_b = sumset(b, b);
  const GSet targets = set_difference(two_b, b);
  if (dec.pairs.size() != n) return fail("expected N pairs");
  std::vector<Point> sums;
  std::map<Point, std::size_t> uses;
  for (const auto& [x, y] : dec.pairs) {
    if (!b.contains(x) || !b.contains(y)) return fail("pair entry outside B");
    sums.push_back(group.to_point(group.add(x, y)));
    ++uses[group.to_point(x)];
    ++uses[group.to_point(y)];
  }
  if (GSet::from_points(group, sums) != targets || targets.size() != n) return fail("sums do not list 2B \\ B");
  switch (dec.kind) {
    case PairsCase::I:
      for (const auto& [p, count] : uses) {
        if (count > n) return fail("an element is used more than N times");
      }
      return true;
    case PairsCase::II: {
      if (!dec.l || !dec.g) return fail("case ii needs L and g");
      if (dec.l->order() != n) return fail("|L| != N");
      if (b != set_union(dec.l->members(), GSet(group, {*dec.g}))) return fail("B != L u {g}");
      if (dec.l->contains(group.add(*dec.g, *dec.g))) return fail("2g in L");
      return true;
    }
    case PairsCase::III: {
      if (!dec.l || !dec.g) return fail("case iii needs L and g");
      if (n != 2 || dec.l->order() != 2) return fail("case iii needs N = |L| = 2");
      if (b != set_union(translate(dec.l->members(), *dec.g), GSet(group, {group.identity()}))) {
        return fail("B != (g + L) u {0}");
      }
      if (dec.l->contains(group.add(*dec.g, *dec.g))) return fail("2g in L");
      return true;
    }
  }
  return fail("unknown case");
}

std::vector<std::pair<std::int64_t, std::int64_t>> bp_matching(std::span<const std::int64_t> b_in,
                                                               std::span<const std::int64_t> c_in,
                                                               std::int64_t b1) {
  std::vector<std::int64_t> b(b_in.begin(), b_in.end());
  std::vector<std::int64_t> c(c_in.begin(), c_in.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  if (b.empty() || c.empty()) throw InvalidArgument("bp_matching: empty set");
  if (!std::binary_search(b.begin(), b.end(), b1)) throw InvalidArgument("bp_matching: b1 must lie in B");

  // Left side: n copies of b1 + C, then b_i + C for the other b_i.
  std::vector<std::int64_t> owners(c.size(), b1);
  for (auto x : b) {
    if (x != b1) owners.push_back(x);
  }
  std::map<std::int64_t, std::size_t> right_index;
  for (auto x : b) {
    for (auto y : c) right_index.emplace(x + y, 0);
  }
  std::vector<std::int64_t> right_value;
  for (auto& [v, i] : right_index) {
    i = right_value.size();
    right_value.push_back(v);
  }

  constexpr std::size_t none = SIZE_MAX;
  std::vector<std::size_t> match_right(right_value.size(), none);
  std::vector<std::size_t> match_left(owners.size(), none);
  std::vector<char> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (auto y : c) {
      const std::size_t v = right_index.at(owners[u] + y);
      if (visited[v]) continue;
      visited[v] = 1;
      if (match_right[v] == none || augment(match_right[v])) {
        match_right[v] = u;
        match_left[u] = v;
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < owners.size(); ++u) {
    visited.assign(right_value.size(), 0);
    if (!augment(u)) throw std::logic_error("bp_matching: no system of distinct representatives");
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  std::set<std::int64_t> sums;
  for (std::size_t u = c.size(); u < owners.size(); ++u) {
    const std::int64_t s = right_value[match_left[u]];
    out.emplace_back(owners[u], s - owners[u]);
    sums.insert(s);
  }
  // Postcondition: distinct sums, none of them in b1 + C.
  if (sums.size() != out.size()) throw std::logic_error("bp_matching: repeated sum");
  for (auto y : c) {
    if (sums.count(b1 + y)) throw std::logic_error("bp_matching: sum falls in b1 + C");
  }
  return out;
}

Verdict check_bp_distinct(const GSet& b, const GSet& c) {
  if (b.empty() || c.empty()) return not_applicable("empty summand");
  const auto pb = project_z(b);
  const auto pc = project_z(c);
  const auto m = static_cast<std::int64_t>(pb.size());
  const auto n = static_cast<std::int64_t>(pc.size());
  // Exercise the matching with b1 over the densest fiber.
  std::int64_t b1 = pb.front();
  std::size_t dense = 0;
  for (auto z : pb) {
    if (b.slice_size(z) > dense) {
      dense = b.slice_size(z);
      b1 = z;
    }
  }
  (void)bp_matching(pb, pc, b1);
  const std::int64_t lhs = m * ssize(sumset(b, c));
  const std::int64_t rhs = (m + n - 1) * ssize(b);
  return pass(lhs >= rhs, "m|B+C| = " + std::to_string(lhs) + ", (m+n-1)|B| = " + std::to_string(rhs), lhs == rhs);
}

Verdict check_prop_two_cosets(const GSet& a1, const GSet& a2) {
  require_same_group(a1.group(), a2.group(), "check_prop_two_cosets");
  if (a1.empty() || a2.empty()) return not_applicable("empty part");
  const std::int64_t n = projection_size(a1) + projection_size(a2);
  const std::int64_t total = ssize(sumset(a1, a1)) + ssize(sumset(a1, a2)) + ssize(sumset(a2, a2));
  const std::int64_t lhs = total * n;
  const std::int64_t rhs = 3 * (n - 1) * (ssize(a1) + ssize(a2));
  return pass(lhs >= rhs, "sum of sumsets = " + std::to_string(total) + ", n1+n2 = " + std::to_string(n),
              lhs == rhs);
}

Verdict check_lower_bound(const GSet& a) {
  if (a.empty()) return not_applicable("empty set");
  const std::int64_t n = projection_size(a);
  const std::int64_t lhs = n * ssize(sumset(a, a));
  const std::int64_t rhs = (2 * n - 1) * ssize(a);
  return pass(lhs >= rhs, "n|2A| = " + std::to_string(lhs) + ", (2n-1)|A| = " + std::to_string(rhs), lhs == rhs);
}

Verdict check_a0al(const NormalizedInstance& inst) {
  const std::int64_t lhs = inst.doubling_size + ssize(inst.a_star);
  const std::int64_t rhs = inst.sigma * inst.n;
  return pass(lhs >= rhs, "|2A|+|A*| = " + std::to_string(lhs) + ", sigma n = " + std::to_string(rhs), lhs == rhs);
}

Verdict check_3a2a(const NormalizedInstance& inst) {
  const std::int64_t size = ssize(inst.set);
  const std::int64_t two = inst.doubling_size;
  const std::int64_t star = ssize(inst.a_star);
  if (!(inst.tau < Rational(3 * (inst.n - 1), inst.n))) return not_applicable("tau >= 3(1-1/n)");
  const bool first = (Rational(3) - inst.tau) * Rational(two + star) > Rational(3 * inst.sigma);
  const bool second = 3 * size - two > inst.sigma;
  const bool third = two < 3 * size - 2 * star;
  std::string detail;
  if (!first) detail += "(3-tau)(tau|A|+|A*|) <= 3 sigma; ";
  if (!second) detail += "3|A|-|2A| <= sigma; ";
  if (!third) detail += "|2A| >= 3|A|-2|A*|; ";
  return pass(first && second && third, detail.empty() ? "all three hold" : detail);
}

Verdict check_small_theorem(const StructureReport& r) {
  const bool equality = !r.degenerate && r.cost == r.doubling_size - r.size;
  if (!r.hypothesis_small) {
    Verdict v = not_applicable("hypothesis not met");
    v.equality = equality;
    return v;
  }
  const std::int64_t len = r.best_cover.length;
  // (tau - 1) n + 1 >= |P|  <=>  (|2A| - |A|) n >= (|P| - 1)|A|
  const bool upper = (r.doubling_size - r.size) * r.n >= (len - 1) * r.size;
  const bool ok = r.bound_ok && len >= 3 && upper && r.best_cover.is_proper();
  std::string detail = "cost " + std::to_string(r.cost) + " vs |2A|-|A| = " + std::to_string(r.doubling_size - r.size);
  if (!upper) detail += "; |P| > (tau-1)n+1";
  if (len < 3) detail += "; |P| < 3";
  return pass(ok, detail, equality);
}

Verdict check_big_theorem(const StructureReport& r) {
  if (!r.hypothesis_big) return not_applicable("cover number does not exceed the threshold");
  return pass(r.bound_ok && r.best_cover.length >= 3, "cost " + std::to_string(r.cost) + ", cover number " +
                                                          std::to_string(r.cover_number));
}

Verdict check_freiman(const GSet& a) {
  if (a.empty()) return not_applicable("empty set");
  if (a.group().torsion_order() != 1) return not_applicable("H is nontrivial");
  const std::int64_t two = ssize(sumset(a, a));
  if (two > 3 * ssize(a) - 4) return not_applicable("|2A| > 3|A|-4");
  const auto ap = min_ap_cover_Z(project_z(a));
  const std::int64_t slack = two - ssize(a);
  return pass(ap.length - 1 <= slack,
              "|P|-1 = " + std::to_string(ap.length - 1) + ", |2A|-|A| = " + std::to_string(slack),
              ap.length - 1 == slack);
}

Verdict check_theorem_propo(const StructureReport& r, const GSet& a) {
  if (!r.hypothesis_small || !r.bound_ok) return not_applicable("no small-doubling cover");
  const Rational tau = r.tau;
  if (!(tau > Rational(2) && tau < Rational(3))) return not_applicable("tau outside (2, 3)");
  const Rational threshold = (Rational(4) * tau - Rational(6)) / ((tau - Rational(2)) * (Rational(3) - tau));
  if (Rational(r.n) < threshold) return not_applicable("n below " + threshold.to_string());
  const auto& k = r.best_cover.k;
  const auto reps = coset_representatives(k);
  std::map<Point, std::int64_t> counts;
  std::int64_t best = 0;
  for (const auto& p : a.points()) best = std::max(best, ++counts[Point{p.z, reps[p.idx]}]);
  const bool ok = Rational(best) * (tau - Rational(1)) >= Rational(static_cast<std::int64_t>(k.order()));
  return pass(ok, "densest K-coset holds " + std::to_string(best) + " of |K| = " + std::to_string(k.order()));
}

Cylinder gen_cylinder(std::int64_t n, std::int64_t l, const Subgroup& k) {
  if (n < 3) throw InvalidArgument("gen_cylinder: n must be >= 3");
  if (l < n - 1) throw InvalidArgument("gen_cylinder: l must be >= n - 1");
  std::vector<Point> pts;
  auto add_slice = [&](std::int64_t z) {
    for (auto h : k.indices()) pts.push_back(Point{z, h});
  };
  for (std::int64_t z = 0; z <= n - 2; ++z) add_slice(z);
  add_slice(l);
  const auto korder = static_cast<std::int64_t>(k.order());
  Cylinder cyl;
  cyl.set = GSet::from_points(k.group(), std::move(pts));
  cyl.predicted_size = n * korder;
  cyl.predicted_doubling = (l > 2 * n - 3 ? 3 * n - 3 : l + n) * korder;
  return cyl;
}

}  // namespace smalldoubling

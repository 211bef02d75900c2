#include "doctest.h"

#include "oracles.hpp"
#include "smalldoubling/errors.hpp"
#include "smalldoubling/json_io.hpp"
#include "smalldoubling/lab.hpp"
#include "smalldoubling/structure.hpp"

using namespace smalldoubling;

namespace {

Subgroup whole_z2() { return Subgroup::whole(GroupSpec({2})); }

}  // namespace

TEST_CASE("shortest progression in Z") {
  const std::vector<std::int64_t> a{0, 1, 2, 4};
  const auto p = min_ap_cover_Z(a);
  CHECK(p.start == 0);
  CHECK(p.diff == 1);
  CHECK(p.length == 5);
  CHECK(sumset(GSet::of_integers(a), GSet::of_integers(a)).size() - a.size() == 4);

  const std::vector<std::int64_t> one{0};
  const auto q = min_ap_cover_Z(one);
  CHECK(q.length == 1);
  CHECK(q.start == 0);

  const std::vector<std::int64_t> spaced{9, 0, 6};
  const auto r = min_ap_cover_Z(spaced);
  CHECK(r.start == 0);
  CHECK(r.diff == 3);
  CHECK(r.length == 4);

  const std::vector<std::int64_t> negative{-7, -1, 5};
  const auto s = min_ap_cover_Z(negative);
  CHECK(s.start == -7);
  CHECK(s.diff == 6);
  CHECK(s.length == 3);
}

TEST_CASE("cover number examples") {
  const GroupSpec z2({2});
  CHECK(cover_number(GSet(z2, {{3, {0}}, {3, {1}}})).count == 1);
  CHECK(cover_number(GSet::of_integers({0, 1, 2, 3, 4})).count == 5);
  const auto c = cover_number(gen_cylinder(4, 6, whole_z2()).set);
  CHECK(c.count == 4);
  CHECK(c.witness == whole_z2());
  // ties go to the smaller subgroup
  CHECK(cover_number(GSet(z2, {{0, {0}}, {1, {1}}})).witness.is_trivial());
}

TEST_CASE("cover number agrees with brute force") {
  Rng rng(61);
  for (const auto& t : std::vector<oracle::Torsion>{{2}, {4}, {2, 2}, {6}, {2, 4}}) {
    const GroupSpec g(t);
    for (int i = 0; i < 80; ++i) {
      const auto na = oracle::random_set(rng, t, 0, rng.between(0, 3), 1, rng.between(2, 4));
      const auto got = cover_number(oracle::from_naive(g, na));
      CHECK(got.count == oracle::cover_number(t, na));
      CHECK(got.count == static_cast<std::int64_t>(oracle::projection(na).size()));
    }
  }
}

TEST_CASE("find_structure examples") {
  const auto interval = find_structure(GSet::of_integers({0, 1, 2}));
  CHECK(interval.cost == 2);
  CHECK(interval.doubling_size - interval.size == 2);
  CHECK(interval.best_cover.length == 3);
  CHECK(interval.best_cover.k.is_trivial());
  CHECK(interval.bound_ok);

  const auto c44 = find_structure(gen_cylinder(4, 4, whole_z2()).set);
  CHECK(c44.size == 8);
  CHECK(c44.doubling_size == 16);
  CHECK(c44.tau == Rational(2));
  CHECK(c44.hypothesis_small);
  CHECK(c44.cost == 8);
  CHECK(c44.best_cover.length == 5);
  CHECK(c44.best_cover.diff == Element{1, {0}});
  CHECK(c44.best_cover.k == whole_z2());
  CHECK(c44.bound_ok);

  const auto c46 = find_structure(gen_cylinder(4, 6, whole_z2()).set);
  CHECK(c46.tau == Rational(9, 4));
  CHECK_FALSE(c46.hypothesis_small);
  CHECK(c46.cost == 12);
  CHECK(c46.doubling_size - c46.size == 10);
  CHECK_FALSE(c46.bound_ok);
}

TEST_CASE("short projections") {
  const GroupSpec z4({4});
  const auto one = find_structure(GSet(z4, {{5, {1}}, {5, {3}}}));
  CHECK(one.n == 1);
  CHECK(one.degenerate);
  CHECK(one.cost == 0);
  CHECK_FALSE(one.bound_ok);
  CHECK_FALSE(one.hypothesis_small);
  CHECK(one.best_cover.length == 1);
  CHECK(one.best_cover.k.order() == 2);
  CHECK(one.best_cover.covers(GSet(z4, {{5, {1}}, {5, {3}}})));

  const auto two = find_structure(GSet(z4, {{0, {0}}, {3, {1}}}));
  CHECK(two.n == 2);
  CHECK_FALSE(two.hypothesis_small);
  CHECK(two.cost == 1);
}

TEST_CASE("find_structure matches the brute-force cover search") {
  Rng rng(67);
  for (const auto& t : std::vector<oracle::Torsion>{{}, {2}, {3}, {4}, {2, 2}, {6}}) {
    const GroupSpec g(t);
    for (int i = 0; i < (t.empty() ? 300 : 120); ++i) {
      const std::int64_t top = rng.between(0, t.empty() ? 14 : 5);
      auto na = oracle::random_set(rng, t, 0, top, 1, rng.between(2, 5));
      const GSet a = oracle::from_naive(g, na);
      const auto report = find_structure(a);
      const auto expect = oracle::min_cover(t, na);
      const std::string dump = to_json(a).dump();
      CAPTURE(dump);
      CHECK(report.cost == expect.cost);
      CHECK(report.best_cover.k.order() == expect.k_order);
      CHECK(report.best_cover.covers(a));
      if (!report.degenerate) CHECK(report.best_cover.is_proper());
      CHECK(report.best_cover.cost() == report.cost);
    }
  }
}

TEST_CASE("report fields and the hypothesis thresholds") {
  Rng rng(71);
  const GroupSpec g({2});
  for (int i = 0; i < 300; ++i) {
    const GSet a = oracle::from_naive(g, oracle::random_set(rng, g.torsion(), 0, 6, 2, 3));
    const auto r = find_structure(a);
    const auto two = static_cast<std::int64_t>(sumset(a, a).size());
    const auto sz = static_cast<std::int64_t>(a.size());
    CHECK(r.size == sz);
    CHECK(r.doubling_size == two);
    CHECK(r.n == static_cast<std::int64_t>(project_z(a).size()));
    CHECK(r.l == a.z_max() - a.z_min());
    CHECK(r.hypothesis_small == (r.n >= 3 && Rational(two) < Rational(3) * (Rational(1) - Rational(1, r.n)) * Rational(sz)));
    CHECK(r.bound_ok == (!r.degenerate && r.cost <= two - sz));
    if (3 * sz > two) {
      REQUIRE(r.hypothesis_big_threshold.has_value());
      const Rational th = *r.hypothesis_big_threshold;
      // |2A| < 3(1 - 1/n')|A| exactly for n' > th, and fails at th
      CHECK_FALSE(Rational(two) < Rational(3) * (Rational(1) - Rational(1) / th) * Rational(sz));
      const Rational above = th + Rational(1, 1000);
      CHECK(Rational(two) < Rational(3) * (Rational(1) - Rational(1) / above) * Rational(sz));
      CHECK(r.hypothesis_big == (Rational(r.cover_number) > th));
    } else {
      CHECK_FALSE(r.hypothesis_big_threshold.has_value());
      CHECK_FALSE(r.hypothesis_big);
    }
    if (r.hypothesis_small && r.bound_ok) {
      CHECK(r.best_cover.length >= 3);
      CHECK(Rational(r.best_cover.length) <= (r.tau - Rational(1)) * Rational(r.n) + Rational(1));
    }
  }
}

TEST_CASE("reduction preconditions") {
  const GroupSpec z2({2});
  const auto k = whole_z2();
  const GSet full = gen_cylinder(4, 4, k).set;
  const auto red = reduce_by_subgroup(full, k);
  CHECK(red.certificate.deficiency_a == 0);
  CHECK(red.certificate.sumset_condition);
  CHECK(red.certificate.small_deficiency);
  CHECK(red.reduced == GSet::of_integers({0, 1, 2, 4}));
  CHECK(red.map.target().torsion().empty());

  const GSet missing = set_difference(full, GSet(z2, {{1, {1}}}));
  const auto red2 = reduce_by_subgroup(missing, k);
  CHECK(red2.certificate.deficiency_a == 1);
  CHECK(red2.certificate.small_deficiency);

  CHECK_THROWS_AS(reduce_by_subgroup(full, Subgroup::trivial(z2)), PreconditionViolated);
  // Dfc(A,L) = 3 >= |L| and Dfc(2A,L) = 6
  const GSet sparse(z2, {{0, {0}}, {1, {0}}, {3, {0}}});
  CHECK_THROWS_AS(reduce_by_subgroup(sparse, k), PreconditionViolated);
}

TEST_CASE("small deficiency implies the sumset condition") {
  Rng rng(73);
  const GroupSpec g({4});
  const Subgroup l = subgroups_of_H(g)[1];
  int small = 0;
  for (int i = 0; i < 2000; ++i) {
    GSet a = saturate(oracle::from_naive(g, oracle::random_set(rng, g.torsion(), 0, 4, 1, 3)), l);
    // knock out up to two points
    for (int j = 0; j < 2 && a.size() > 1; ++j) {
      if (rng.coin()) a = set_difference(a, GSet(g, {a.element(rng.below(a.size()))}));
    }
    const auto two = sumset(a, a);
    const auto dfc_a = static_cast<std::int64_t>(saturate(a, l).size() - a.size());
    const auto dfc_2a = static_cast<std::int64_t>(saturate(two, l).size() - two.size());
    if (dfc_a <= static_cast<std::int64_t>(l.order()) - 1) {
      ++small;
      CHECK(dfc_2a <= dfc_a);
      const auto red = reduce_by_subgroup(a, l);
      CHECK(red.certificate.sumset_condition);
      CHECK(red.certificate.deficiency_2a == dfc_2a);
      if (red.certificate.hypothesis_before) CHECK(red.certificate.hypothesis_after);
    }
  }
  CHECK(small > 500);
}

TEST_CASE("lifting a cover of the quotient") {
  const auto k = whole_z2();
  const GSet cyl = gen_cylinder(4, 4, k).set;
  const auto red = reduce_by_subgroup(cyl, k);
  const auto reduced = find_structure(red.reduced);
  const auto lifted = lift_structure(reduced.best_cover, red.map);
  CHECK(lifted.covers(cyl));
  CHECK(lifted.k == k);
  CHECK(lifted.length <= reduced.best_cover.length);
  CHECK(lifted.cost() == 8);
  CHECK(lifted.cost() == find_structure(cyl).cost);

  // trivial L and trivial K~ give back the same progression
  const GroupSpec z3({3});
  const QuotientMap id(Subgroup::trivial(z3));
  const CosetProgression p{{0, {1}}, {2, {2}}, 4, Subgroup::trivial(z3)};
  const auto same = lift_structure(p, id);
  CHECK(same.start == p.start);
  CHECK(same.diff == p.diff);
  CHECK(same.length == p.length);
  CHECK(same.k == p.k);
}

TEST_CASE("lifting through the full torsion group") {
  // A = P + H: quotient by H is an integer progression
  Rng rng(79);
  for (const auto& t : std::vector<oracle::Torsion>{{2}, {3}, {2, 2}, {4}}) {
    const GroupSpec g(t);
    const Subgroup h = Subgroup::whole(g);
    for (int i = 0; i < 20; ++i) {
      const std::int64_t d = rng.between(1, 3);
      const std::int64_t len = rng.between(2, 5);
      std::vector<Point> pts;
      for (std::int64_t j = 0; j < len; ++j) {
        if (j != 0 && j != len - 1 && rng.below(3) == 0) continue;
        for (std::uint32_t x = 0; x < g.torsion_order(); ++x) pts.push_back({j * d, x});
      }
      const GSet a = GSet::from_points(g, pts);
      const auto red = reduce_by_subgroup(a, h);
      const auto lifted = lift_structure(find_structure(red.reduced).best_cover, red.map);
      CHECK(lifted.covers(a));
      CHECK(lifted.cost() == find_structure(a).cost);
    }
  }
}

TEST_CASE("theorem holds on random desk-scale sets") {
  Rng rng(83);
  for (const auto& t : std::vector<oracle::Torsion>{{3}, {4}, {2, 2}, {6}}) {
    const GroupSpec g(t);
    const auto lattice = subgroup_lattice(g);
    int hits = 0;
    for (int i = 0; i < 400; ++i) {
      GSet a = oracle::from_naive(g, oracle::random_set(rng, t, 0, rng.between(2, 6), 3, 4));
      if (rng.coin()) a = saturate(a, (*lattice)[rng.below(lattice->size())]);
      const auto r = find_structure(a);
      if (!r.hypothesis_small) continue;
      ++hits;
      CHECK(check_small_theorem(r).outcome == Outcome::Pass);
    }
    CHECK(hits > 20);
  }
}

#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "smalldoubling/errors.hpp"
#include "smalldoubling/verify.hpp"

using namespace smalldoubling;

TEST_CASE("exhaustive family enumerates each normalized set once") {
  FamilyDescriptor f;
  f.torsion = {2};
  f.zmax = 2;
  CHECK(family_index_count(f) == 32);
  std::set<oracle::NaiveSet> seen;
  for (std::uint64_t i = 0; i < family_index_count(f); ++i) {
    const GSet a = family_instance(f, i);
    REQUIRE_FALSE(a.empty());
    CHECK(a.contains(Point{0, 0}));
    CHECK(a.z_min() == 0);
    CHECK(a.z_max() <= 2);
    seen.insert(oracle::to_naive(a));
  }
  CHECK(seen.size() == 32);
}

TEST_CASE("family filters") {
  FamilyDescriptor f;
  f.torsion = {};
  f.zmax = 6;
  f.max_size = 3;
  f.require_max = true;
  std::uint64_t kept = 0;
  for (std::uint64_t i = 0; i < family_index_count(f); ++i) {
    const GSet a = family_instance(f, i);
    if (a.empty()) continue;
    ++kept;
    CHECK(a.size() <= 3);
    CHECK(a.z_max() == 6);
  }
  // {0, 6} plus at most one of 1..5
  CHECK(kept == 6);
}

TEST_CASE("sampled and structured families are seeded") {
  for (auto mode : {FamilyMode::Sampled, FamilyMode::Structured}) {
    FamilyDescriptor f;
    f.torsion = {4};
    f.zmax = 8;
    f.mode = mode;
    f.samples = 50;
    f.seed = 9;
    FamilyDescriptor other = f;
    other.seed = 10;
    bool differs = false;
    for (std::uint64_t i = 0; i < f.samples; ++i) {
      const GSet a = family_instance(f, i);
      CHECK(a == family_instance(f, i));
      CHECK_FALSE(a.empty());
      CHECK(a.contains(Point{0, 0}));
      CHECK(a.z_max() <= 8);
      differs = differs || !(a == family_instance(other, i));
    }
    CHECK(differs);
  }
  FamilyDescriptor capped;
  capped.torsion = {4};
  capped.zmax = 8;
  capped.mode = FamilyMode::Sampled;
  capped.max_size = 5;
  capped.samples = 100;
  for (std::uint64_t i = 0; i < capped.samples; ++i) CHECK(family_instance(capped, i).size() <= 5);
}

TEST_CASE("structured samples satisfy the hypothesis often") {
  FamilyDescriptor f;
  f.torsion = {2};
  f.zmax = 24;
  f.mode = FamilyMode::Structured;
  f.samples = 200;
  f.seed = 1;
  int hits = 0;
  for (std::uint64_t i = 0; i < f.samples; ++i) hits += find_structure(family_instance(f, i)).hypothesis_small ? 1 : 0;
  CHECK(hits > 40);
}

TEST_CASE("verify_family is deterministic across job counts") {
  FamilyDescriptor f;
  f.torsion = {2};
  f.zmax = 4;
  const auto one = verify_family(f, 1);
  const auto four = verify_family(f, 4);
  CHECK(one.digest == four.digest);
  CHECK(to_json(one).dump() == to_json(four).dump());
  CHECK(one.checked == 512);
  CHECK(one.violations.empty());
  CHECK(one.tallies.at("small").failed == 0);
  CHECK(one.tallies.at("small").applicable > 0);
  CHECK_FALSE(to_json(one).contains("elapsed_ms"));
  CHECK(to_json(one, true).contains("elapsed_ms"));

  FamilyDescriptor g = f;
  g.mode = FamilyMode::Sampled;
  g.zmax = 10;
  g.samples = 300;
  g.seed = 77;
  CHECK(verify_family(g, 1).digest == verify_family(g, 3).digest);
  g.seed = 78;
  CHECK(verify_family(g, 1).digest != verify_family(f, 1).digest);
}

TEST_CASE("witnesses include the cylinders at the bound") {
  FamilyDescriptor f;
  f.torsion = {2};
  f.zmax = 4;
  f.checkers = {"small"};
  const auto run = verify_family(f, 2);
  std::set<oracle::NaiveSet> witnesses;
  for (const auto& w : run.witnesses) witnesses.insert(oracle::to_naive(w.set));
  CHECK(run.witness_total == run.tallies.at("small").equalities);
  // ([0, n-2] u {l}) + K for n = 3, l in {2, 3} and n = 4, l = 3, both K
  for (const auto& k : subgroups_of_H(GroupSpec({2}))) {
    for (auto [n, l] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {4, 3}, {4, 4}, {5, 4}}) {
      CHECK(witnesses.count(oracle::to_naive(gen_cylinder(n, l, k).set)) == 1);
    }
  }
}

TEST_CASE("mutant checker is caught and violations replay") {
  FamilyDescriptor f;
  f.torsion = {2};
  f.zmax = 3;
  f.checkers = {"small-mutant"};
  const auto run = verify_family(f, 2);
  REQUIRE_FALSE(run.violations.empty());
  for (std::size_t i = 1; i < run.violations.size(); ++i) CHECK(run.violations[i - 1].index < run.violations[i].index);
  const auto dir = std::filesystem::temp_directory_path() / "smalldoubling_verify_test";
  std::filesystem::remove_all(dir);
  const auto files = persist_violations(run, dir);
  CHECK(files.size() == run.violations.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::ifstream in(files[i]);
    const json doc = json::parse(in);
    const GSet replay = gset_from_json(doc);
    CHECK(replay == run.violations[i].set);
    CHECK(evaluate_checker("small-mutant", replay).failed());
    CHECK(evaluate_checker("small", replay).outcome == Outcome::Pass);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("caps and bad descriptors") {
  FamilyDescriptor f;
  f.torsion = {4};
  f.zmax = 9;
  CHECK_THROWS_AS(verify_family(f), CapExceeded);
  f.zmax = 5;
  CHECK_NOTHROW(family_index_count(f));
  f.checkers = {"nope"};
  CHECK_THROWS_AS(verify_family(f), InvalidArgument);
  CHECK_THROWS_AS(family_mode_from_string("random"), InvalidArgument);
  CHECK(family_mode_from_string("structured") == FamilyMode::Structured);
  CHECK_THROWS_AS(evaluate_checker("nope", GSet::of_integers({0})), InvalidArgument);
}

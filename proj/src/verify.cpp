#include "smalldoubling/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <fstream>
#include <optional>
#include <thread>

#include "smalldoubling/errors.hpp"
#include "smalldoubling/random.hpp"

namespace smalldoubling {
namespace {

std::uint64_t window_cells(const FamilyDescriptor& f) {
  return static_cast<std::uint64_t>(f.zmax + 1) * GroupSpec(f.torsion).torsion_order();
}

void validate(const FamilyDescriptor& f) {
  if (f.zmax < 0) throw InvalidArgument("zmax must be >= 0");
  if (f.max_size < 0) throw InvalidArgument("max_size must be >= 0");
  for (const auto& c : f.checkers) {
    const auto& known = known_checkers();
    if (std::find(known.begin(), known.end(), c) == known.end()) throw InvalidArgument("unknown checker '" + c + "'");
  }
  if (f.mode == FamilyMode::Exhaustive && window_cells(f) - 1 > kMaxExhaustiveBits) {
    throw CapExceeded("exhaustive family has 2^" + std::to_string(window_cells(f) - 1) +
                      " instances; use sampling beyond 2^" + std::to_string(kMaxExhaustiveBits));
  }
  if (f.mode == FamilyMode::Structured) (void)subgroup_lattice(GroupSpec(f.torsion));
}

GSet structured_instance(const FamilyDescriptor& f, Rng& rng) {
  const GroupSpec group(f.torsion);
  const auto lattice = subgroup_lattice(group);
  const Subgroup& k = (*lattice)[rng.below(lattice->size())];
  std::int64_t d = rng.between(1, 2);
  if (f.zmax / d + 1 < 3) d = 1;
  const std::int64_t max_len = std::max<std::int64_t>(f.zmax / d + 1, 1);
  const std::int64_t len = max_len < 3 ? max_len : rng.between(3, max_len);
  const auto x = static_cast<std::uint32_t>(rng.below(group.torsion_order()));
  std::vector<Point> pts;
  for (std::int64_t j = 0; j < len; ++j) {
    if (j != 0 && j != len - 1 && rng.below(8) == 0) continue;
    const std::uint32_t base = group.scale_index(x, j);
    bool any = false;
    for (auto h : k.indices()) {
      if (rng.below(4) != 0) {
        pts.push_back(Point{j * d, group.add_index(base, h)});
        any = true;
      }
    }
    if (!any) pts.push_back(Point{j * d, group.add_index(base, k.indices()[rng.below(k.order())])});
  }
  GSet s = GSet::from_points(group, std::move(pts));
  const Point least = s.points().front();
  return translate(s, Point{-least.z, group.neg_index(least.idx)});
}

bool passes_filters(const FamilyDescriptor& f, const GSet& s) {
  if (s.empty()) return false;
  if (f.max_size > 0 && static_cast<std::int64_t>(s.size()) > f.max_size) return false;
  if (f.require_max && s.z_max() != f.zmax) return false;
  return true;
}

struct Shard {
  std::uint64_t checked = 0;
  std::map<std::string, CheckerTally> tallies;
  std::vector<InstanceRecord> violations;
  std::vector<InstanceRecord> witnesses;
  std::uint64_t witness_total = 0;
};

// Verdicts for all requested checkers, sharing the expensive intermediates.
std::vector<Verdict> evaluate_all(const std::vector<std::string>& names, const GSet& a) {
  std::optional<StructureReport> report;
  std::optional<NormalizedInstance> inst;
  auto get_report = [&]() -> const StructureReport& {
    if (!report) report = find_structure(a);
    return *report;
  };
  auto get_inst = [&]() -> const NormalizedInstance& {
    if (!inst) inst = normalize(a);
    return *inst;
  };
  std::vector<Verdict> out;
  out.reserve(names.size());
  for (const auto& name : names) {
    if (name == "small") {
      out.push_back(check_small_theorem(get_report()));
    } else if (name == "small-mutant") {
      // Deliberately off by one: rejects covers that meet the bound exactly.
      Verdict v = check_small_theorem(get_report());
      if (v.outcome == Outcome::Pass && v.equality) {
        v.outcome = Outcome::Fail;
        v.detail += " (mutant requires strict inequality)";
      }
      out.push_back(v);
    } else if (name == "big") {
      out.push_back(check_big_theorem(get_report()));
    } else if (name == "propo") {
      out.push_back(check_theorem_propo(get_report(), a));
    } else if (name == "lower") {
      out.push_back(check_lower_bound(a));
    } else if (name == "a0al") {
      out.push_back(check_a0al(get_inst()));
    } else if (name == "c3a2a") {
      out.push_back(check_3a2a(get_inst()));
    } else if (name == "freiman") {
      out.push_back(check_freiman(a));
    } else if (name == "kneser") {
      out.push_back(check_kneser(a, a));
    } else if (name == "lemma15") {
      out.push_back(check_lemma_1_5(a));
    } else {
      throw InvalidArgument("unknown checker '" + name + "'");
    }
  }
  return out;
}

Shard run_shard(const FamilyDescriptor& f, std::uint64_t begin, std::uint64_t end) {
  Shard shard;
  for (auto c : f.checkers) shard.tallies[c];
  for (std::uint64_t i = begin; i < end; ++i) {
    const GSet a = family_instance(f, i);
    if (a.empty()) continue;
    ++shard.checked;
    const auto verdicts = evaluate_all(f.checkers, a);
    for (std::size_t c = 0; c < verdicts.size(); ++c) {
      const Verdict& v = verdicts[c];
      auto& tally = shard.tallies[f.checkers[c]];
      if (v.equality) {
        ++tally.equalities;
        ++shard.witness_total;
        if (shard.witnesses.size() < f.max_witnesses) shard.witnesses.push_back({i, f.checkers[c], v.detail, a});
      }
      if (!v.applicable()) continue;
      ++tally.applicable;
      if (v.failed()) {
        ++tally.failed;
        shard.violations.push_back({i, f.checkers[c], v.detail, a});
      } else {
        ++tally.passed;
      }
    }
  }
  return shard;
}

json record_json(const InstanceRecord& r) {
  return json{{"index", r.index}, {"checker", r.checker}, {"detail", r.detail}, {"set", to_json(r.set)}};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 15];
    h >>= 4;
  }
  return out;
}

json run_body(const VerificationRun& run) {
  json tallies = json::object();
  for (const auto& [name, t] : run.tallies) {
    tallies[name] = json{{"applicable", t.applicable}, {"passed", t.passed}, {"failed", t.failed},
                         {"equalities", t.equalities}};
  }
  json violations = json::array();
  for (const auto& v : run.violations) violations.push_back(record_json(v));
  json witnesses = json::array();
  for (const auto& w : run.witnesses) witnesses.push_back(record_json(w));
  return json{{"family", to_json(run.family)},
              {"indices", run.indices},
              {"checked", run.checked},
              {"checkers", std::move(tallies)},
              {"violations", std::move(violations)},
              {"witnesses", std::move(witnesses)},
              {"witness_total", run.witness_total}};
}

}  // namespace

const char* to_string(FamilyMode m) noexcept {
  switch (m) {
    case FamilyMode::Exhaustive: return "exhaustive";
    case FamilyMode::Sampled: return "sampled";
    case FamilyMode::Structured: return "structured";
  }
  return "?";
}

FamilyMode family_mode_from_string(const std::string& s) {
  if (s == "exhaustive") return FamilyMode::Exhaustive;
  if (s == "sampled") return FamilyMode::Sampled;
  if (s == "structured") return FamilyMode::Structured;
  throw InvalidArgument("unknown family mode '" + s + "'");
}

const std::vector<std::string>& known_checkers() {
  static const std::vector<std::string> names{"small", "big",     "propo",  "lower",   "a0al",
                                              "c3a2a", "freiman", "kneser", "lemma15", "small-mutant"};
  return names;
}

Verdict evaluate_checker(const std::string& name, const GSet& a) { return evaluate_all({name}, a).front(); }

std::uint64_t family_index_count(const FamilyDescriptor& f) {
  if (f.mode == FamilyMode::Exhaustive) return std::uint64_t{1} << (window_cells(f) - 1);
  return f.samples;
}

GSet family_instance(const FamilyDescriptor& f, std::uint64_t index) {
  const GroupSpec group(f.torsion);
  const std::uint32_t order = group.torsion_order();
  const std::uint64_t cells = window_cells(f);
  auto cell_point = [&](std::uint64_t c) {
    return Point{static_cast<std::int64_t>(c / order), static_cast<std::uint32_t>(c % order)};
  };
  GSet s(group);
  switch (f.mode) {
    case FamilyMode::Exhaustive: {
      if (f.max_size > 0 && std::popcount(index) + 1 > f.max_size) return GSet(group);
      std::vector<Point> pts{Point{0, 0}};
      for (std::uint64_t bits = index; bits != 0; bits &= bits - 1) {
        pts.push_back(cell_point(static_cast<std::uint64_t>(std::countr_zero(bits)) + 1));
      }
      s = GSet::from_points(group, std::move(pts));
      break;
    }
    case FamilyMode::Sampled: {
      Rng rng = Rng::for_instance(f.seed, index);
      std::vector<Point> pts{Point{0, 0}};
      if (f.max_size > 0) {
        const auto extra = static_cast<std::uint64_t>(rng.between(0, std::min<std::int64_t>(f.max_size - 1,
                                                                         static_cast<std::int64_t>(cells) - 1)));
        std::vector<std::uint64_t> pool(cells - 1);
        for (std::uint64_t c = 0; c + 1 < cells; ++c) pool[c] = c + 1;
        for (std::uint64_t t = 0; t < extra; ++t) {
          std::swap(pool[t], pool[t + rng.below(pool.size() - t)]);
          pts.push_back(cell_point(pool[t]));
        }
      } else {
        for (std::uint64_t c = 1; c < cells; ++c) {
          if (rng.coin()) pts.push_back(cell_point(c));
        }
      }
      s = GSet::from_points(group, std::move(pts));
      break;
    }
    case FamilyMode::Structured: {
      Rng rng = Rng::for_instance(f.seed, index);
      s = structured_instance(f, rng);
      break;
    }
  }
  return passes_filters(f, s) ? s : GSet(group);
}

VerificationRun verify_family(const FamilyDescriptor& family, unsigned jobs) {
  validate(family);
  const auto started = std::chrono::steady_clock::now();
  const std::uint64_t total = family_index_count(family);
  jobs = std::max(1U, jobs);
  const std::uint64_t shards = std::min<std::uint64_t>(jobs, std::max<std::uint64_t>(total, 1));
  std::vector<Shard> results(shards);
  std::vector<std::exception_ptr> errors(shards);
  auto work = [&](std::uint64_t s) {
    try {
      results[s] = run_shard(family, total * s / shards, total * (s + 1) / shards);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::uint64_t s = 0; s < shards; ++s) threads.emplace_back(work, s);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  VerificationRun run;
  run.family = family;
  run.indices = total;
  for (auto c : family.checkers) run.tallies[c];
  // Shards cover ascending index ranges, so concatenation stays sorted.
  for (auto& shard : results) {
    run.checked += shard.checked;
    for (const auto& [name, t] : shard.tallies) {
      auto& acc = run.tallies[name];
      acc.applicable += t.applicable;
      acc.passed += t.passed;
      acc.failed += t.failed;
      acc.equalities += t.equalities;
    }
    for (auto& v : shard.violations) run.violations.push_back(std::move(v));
    for (auto& w : shard.witnesses) {
      if (run.witnesses.size() < family.max_witnesses) run.witnesses.push_back(std::move(w));
    }
    run.witness_total += shard.witness_total;
  }
  run.digest = fnv1a_hex(run_body(run).dump());
  run.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
                       .count();
  return run;
}

json to_json(const FamilyDescriptor& f) {
  return json{{"torsion", f.torsion},   {"zmax", f.zmax},
              {"max_size", f.max_size}, {"require_max", f.require_max},
              {"mode", to_string(f.mode)}, {"samples", f.samples},
              {"seed", f.seed},         {"checkers", f.checkers},
              {"max_witnesses", f.max_witnesses}};
}

json to_json(const VerificationRun& run, bool include_timing) {
  json out = run_body(run);
  out["digest"] = run.digest;
  if (include_timing) out["elapsed_ms"] = run.elapsed_ms;
  return out;
}

std::vector<std::filesystem::path> persist_violations(const VerificationRun& run, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  if (run.violations.empty()) return written;
  std::filesystem::create_directories(dir);
  for (const auto& v : run.violations) {
    const auto path = dir / ("violation_" + std::to_string(v.index) + "_" + v.checker + ".json");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    json doc = to_json(v.set);
    doc["checker"] = v.checker;
    doc["index"] = v.index;
    out << doc.dump(2) << '\n';
    written.push_back(path);
  }
  return written;
}

}  // namespace smalldoubling

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "smalldoubling/errors.hpp"
#include "smalldoubling/json_io.hpp"
#include "smalldoubling/verify.hpp"

namespace sdtool {
namespace {

using smalldoubling::json;
namespace sd = smalldoubling;

enum Exit { kOk = 0, kViolations = 1, kUsage = 2, kCap = 3 };

struct Options {
  std::vector<std::string> inputs;
  std::string output;
  std::optional<std::string> group;
  std::int64_t zmax = 6;
  std::int64_t max_size = 0;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string report_dir;
  std::string mode = "exhaustive";
  std::string checks;
  bool require_max = false;
  bool mutate = false;
  bool timing = false;
  std::int64_t n = 0;
  std::int64_t l = 0;
  std::size_t k_index = 0;
};

std::vector<std::int64_t> parse_torsion(const std::string& text) {
  std::vector<std::int64_t> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  std::size_t pos = 0;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw sd::ParseError("--group[" + std::to_string(pos) + "]", "not an integer: '" + item + "'");
    }
    if (v < 2) throw sd::ParseError("--group[" + std::to_string(pos) + "]", "torsion entries must be >= 2");
    out.push_back(v);
    ++pos;
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

sd::GSet load_gset(const std::string& path, const Options& opt) {
  std::ifstream in(path);
  if (!in) throw sd::Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const json doc = sd::parse_json_text(buf.str());
  if (opt.group) return sd::gset_from_json(doc, sd::GroupSpec(parse_torsion(*opt.group)));
  return sd::gset_from_json(doc);
}

void emit(const json& doc, const Options& opt, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (opt.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opt.output, std::ios::binary);
  if (!file || !(file << text)) throw sd::Error("cannot write " + opt.output);
}

json config_echo(const std::string& command, const Options& opt) {
  json cfg{{"command", command}};
  if (!opt.inputs.empty()) cfg["inputs"] = opt.inputs;
  if (opt.group) cfg["group"] = *opt.group;
  if (command == "verify") {
    cfg["zmax"] = opt.zmax;
    cfg["max_size"] = opt.max_size;
    cfg["samples"] = opt.samples;
    cfg["seed"] = opt.seed;
    cfg["mode"] = opt.mode;
    cfg["require_max"] = opt.require_max;
    cfg["mutate"] = opt.mutate;
    if (!opt.checks.empty()) cfg["checks"] = opt.checks;
  }
  if (command == "gen") {
    cfg["n"] = opt.n;
    cfg["l"] = opt.l;
    cfg["k_index"] = opt.k_index;
  }
  return cfg;
}

json envelope(const std::string& command, const Options& opt) {
  return json{{"tool", kToolName}, {"version", kToolVersion}, {"config", config_echo(command, opt)}};
}

int cmd_analyze(const Options& opt, std::ostream& out) {
  const sd::GSet a = load_gset(opt.inputs.front(), opt);
  if (a.empty()) throw sd::ParseError("elements", "set must be nonempty");
  const sd::StructureReport report = sd::find_structure(a);
  const sd::NormalizedInstance inst = sd::normalize(a);
  const std::vector<std::pair<std::string, sd::Verdict>> verdicts{
      {"small", sd::check_small_theorem(report)}, {"big", sd::check_big_theorem(report)},
      {"propo", sd::check_theorem_propo(report, a)}, {"lower", sd::check_lower_bound(a)},
      {"a0al", sd::check_a0al(inst)},               {"c3a2a", sd::check_3a2a(inst)},
      {"freiman", sd::check_freiman(a)}};
  json checks = json::object();
  bool failed = false;
  for (const auto& [name, v] : verdicts) {
    checks[name] = sd::to_json(v);
    failed = failed || v.failed();
  }
  json doc = envelope("analyze", opt);
  doc["structure"] = sd::to_json(report);
  doc["normalized"] = sd::to_json(inst);
  doc["checks"] = std::move(checks);
  doc["deficiency"] = sd::to_json(sd::total_deficiency(a, report.best_cover.k));
  emit(doc, opt, out);
  return failed ? kViolations : kOk;
}

int cmd_cover(const Options& opt, std::ostream& out) {
  const sd::GSet a = load_gset(opt.inputs.front(), opt);
  if (a.empty()) throw sd::ParseError("elements", "set must be nonempty");
  const sd::StructureReport report = sd::find_structure(a);
  json doc = envelope("cover", opt);
  doc["best_cover"] = sd::to_json(report.best_cover);
  doc["cost"] = report.cost;
  doc["bound"] = report.doubling_size - report.size;
  doc["cover_number"] = report.cover_number;
  doc["cover_subgroup"] = sd::to_json(report.cover_subgroup);
  emit(doc, opt, out);
  return kOk;
}

int cmd_lemmas(const Options& opt, std::ostream& out) {
  if (opt.inputs.size() > 2) throw CLI::ValidationError("--input", "lemmas takes one or two inputs");
  const sd::GSet b = load_gset(opt.inputs[0], opt);
  const sd::GSet c = opt.inputs.size() == 2 ? load_gset(opt.inputs[1], opt) : b;
  if (b.empty() || c.empty()) throw sd::ParseError("elements", "sets must be nonempty");
  std::vector<std::pair<std::string, sd::Verdict>> verdicts{
      {"kneser", sd::check_kneser(b, c)},
      {"kneser_periodic", sd::check_kneser_periodic(b, c)},
      {"bp_distinct", sd::check_bp_distinct(b, c)},
  };
  if (opt.inputs.size() == 1) verdicts.emplace_back("lemma15", sd::check_lemma_1_5(b));
  if (opt.inputs.size() == 2) verdicts.emplace_back("two_cosets", sd::check_prop_two_cosets(b, c));
  json doc = envelope("lemmas", opt);
  json checks = json::object();
  bool failed = false;
  for (const auto& [name, v] : verdicts) {
    checks[name] = sd::to_json(v);
    failed = failed || v.failed();
  }
  doc["checks"] = std::move(checks);
  if (opt.inputs.size() == 1 && b.group().torsion_order() > 1 && b.z_min() == b.z_max()) {
    try {
      const sd::PairsDecomposition dec = sd::decompose_pairs(b);
      std::string why;
      const bool ok = sd::validate_pairs(b, dec, &why);
      doc["pairs"] = sd::to_json(dec);
      doc["pairs_valid"] = ok;
      failed = failed || !ok;
    } catch (const sd::PreconditionViolated& e) {
      doc["pairs"] = json{{"applicable", false}, {"detail", e.what()}};
    }
  }
  emit(doc, opt, out);
  return failed ? kViolations : kOk;
}

int cmd_gen(const Options& opt, std::ostream& out) {
  const sd::GroupSpec group(opt.group ? parse_torsion(*opt.group) : std::vector<std::int64_t>{});
  const auto lattice = sd::subgroup_lattice(group);
  if (opt.k_index >= lattice->size()) {
    throw sd::InvalidArgument("--k-index " + std::to_string(opt.k_index) + " out of range; the group has " +
                              std::to_string(lattice->size()) + " subgroups");
  }
  const sd::Cylinder cyl = sd::gen_cylinder(opt.n, opt.l, (*lattice)[opt.k_index]);
  json doc = sd::to_json(cyl.set);
  json meta = envelope("gen", opt);
  meta["K"] = sd::to_json((*lattice)[opt.k_index]);
  meta["predicted_size"] = cyl.predicted_size;
  meta["predicted_doubling"] = cyl.predicted_doubling;
  doc["metadata"] = std::move(meta);
  emit(doc, opt, out);
  return kOk;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  sd::FamilyDescriptor family;
  family.torsion = opt.group ? parse_torsion(*opt.group) : std::vector<std::int64_t>{};
  family.zmax = opt.zmax;
  family.max_size = opt.max_size;
  family.require_max = opt.require_max;
  family.mode = sd::family_mode_from_string(opt.mode);
  family.samples = opt.samples;
  family.seed = opt.seed;
  if (!opt.checks.empty()) family.checkers = split_list(opt.checks);
  if (opt.mutate) {
    for (auto& c : family.checkers) {
      if (c == "small") c = "small-mutant";
    }
  }
  unsigned jobs = opt.jobs;
  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  const sd::VerificationRun run = sd::verify_family(family, jobs);
  json doc = envelope("verify", opt);
  doc["run"] = sd::to_json(run, opt.timing);
  if (!opt.report_dir.empty()) {
    const auto paths = sd::persist_violations(run, opt.report_dir);
    json files = json::array();
    for (const auto& p : paths) files.push_back(p.string());
    doc["violation_files"] = std::move(files);
  }
  emit(doc, opt, out);
  if (!run.violations.empty()) {
    err << "sdtool: " << run.violations.size() << " violation(s)\n";
    return kViolations;
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sumset structure in Z + H: analysis, generation and verification"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Options opt;

  auto add_group = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
        "--group", [&](const std::string& g) { opt.group = g; }, "torsion orders d1,d2,... (empty for Z)");
  };
  auto add_output = [&](CLI::App* sub) { sub->add_option("--output", opt.output, "write JSON here instead of stdout"); };

  auto* analyze = app.add_subcommand("analyze", "structure report for one set");
  analyze->add_option("--input", opt.inputs, "GSet JSON file")->required()->expected(1);
  add_group(analyze);
  add_output(analyze);

  auto* cover = app.add_subcommand("cover", "best coset-progression cover of one set");
  cover->add_option("--input", opt.inputs, "GSet JSON file")->required()->expected(1);
  add_group(cover);
  add_output(cover);

  auto* lemmas = app.add_subcommand("lemmas", "lemma checks on one set B, or on a pair B, C");
  lemmas->add_option("--input", opt.inputs, "GSet JSON file (repeat for C)")->required()->expected(1, 2);
  add_group(lemmas);
  add_output(lemmas);

  auto* gen = app.add_subcommand("gen", "cylinder example ([0, n-2] u {l}) + K");
  gen->add_option("--n", opt.n, "number of slices")->required();
  gen->add_option("--l", opt.l, "top slice height")->required();
  gen->add_option("--k-index", opt.k_index, "index of K in the subgroup lattice (0 is trivial)");
  add_group(gen);
  add_output(gen);

  auto* verify = app.add_subcommand("verify", "run checkers over a family of sets");
  add_group(verify);
  add_output(verify);
  verify->add_option("--zmax", opt.zmax, "window height");
  verify->add_option("--max-size", opt.max_size, "skip sets larger than this (0: no limit)");
  verify->add_option("--samples", opt.samples, "instances in sampled and structured modes");
  verify->add_option("--seed", opt.seed, "base seed");
  verify->add_option("--jobs", opt.jobs, "worker threads (0: all cores)");
  verify->add_option("--report", opt.report_dir, "directory for violating instances");
  verify->add_option("--mode", opt.mode, "exhaustive, sampled or structured");
  verify->add_option("--checks", opt.checks, "comma-separated checker names");
  verify->add_flag("--require-max", opt.require_max, "keep only sets reaching zmax");
  verify->add_flag("--mutate", opt.mutate, "replace 'small' by a deliberately broken variant");
  verify->add_flag("--timing", opt.timing, "include elapsed_ms in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "sdtool: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(opt, out);
    if (*cover) return cmd_cover(opt, out);
    if (*lemmas) return cmd_lemmas(opt, out);
    if (*gen) return cmd_gen(opt, out);
    if (*verify) return cmd_verify(opt, out, err);
  } catch (const sd::CapExceeded& e) {
    err << "sdtool: cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const sd::ParseError& e) {
    err << "sdtool: parse error at " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    err << "sdtool: " << e.what() << "\n";
    return kUsage;
  } catch (const sd::Error& e) {
    err << "sdtool: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "sdtool: malformed JSON: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace sdtool

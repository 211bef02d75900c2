#include "smalldoubling/json_io.hpp"

#include "smalldoubling/errors.hpp"

namespace smalldoubling {

json to_json(const Element& e) { return json::array({e.z, e.h}); }

json to_json(const Rational& r) { return json::array({r.num(), r.den()}); }

json to_json(const GroupSpec& g) { return json{{"torsion", g.torsion()}}; }

json to_json(const GSet& s) {
  json elems = json::array();
  for (const auto& p : s.points()) elems.push_back(json::array({p.z, s.group().residues(p.idx)}));
  return json{{"group", to_json(s.group())}, {"elements", std::move(elems)}};
}

json to_json(const Subgroup& k) {
  json out = json::array();
  for (auto i : k.indices()) out.push_back(k.group().residues(i));
  return out;
}

json to_json(const CosetProgression& p) {
  return json{{"start", to_json(p.start)},     {"diff", to_json(p.diff)},
              {"length", p.length},            {"K", to_json(p.k)},
              {"K_order", p.k.order()},        {"degenerate", p.degenerate()}};
}

json to_json(const StructureReport& r) {
  return json{{"n", r.n},
              {"l", r.l},
              {"size", r.size},
              {"doubling_size", r.doubling_size},
              {"tau", to_json(r.tau)},
              {"hypothesis_small", r.hypothesis_small},
              {"best_cover", to_json(r.best_cover)},
              {"cost", r.cost},
              {"degenerate", r.degenerate},
              {"bound", r.doubling_size - r.size},
              {"bound_ok", r.bound_ok},
              {"cover_number", r.cover_number},
              {"cover_subgroup", to_json(r.cover_subgroup)},
              {"hypothesis_big_threshold",
               r.hypothesis_big_threshold ? to_json(*r.hypothesis_big_threshold) : json(nullptr)},
              {"hypothesis_big", r.hypothesis_big}};
}

json to_json(const DeficiencyReport& d) {
  json per = json::array();
  for (const auto& [rep, val] : d.per_coset) per.push_back(json::array({to_json(rep), val}));
  return json{{"per_coset", std::move(per)}, {"total", d.total}};
}

json to_json(const NormalizedInstance& inst) {
  return json{{"translation", to_json(inst.translation)},
              {"l", inst.l},
              {"n", inst.n},
              {"delta", to_json(inst.delta)},
              {"a_star", to_json(inst.a_star)["elements"]},
              {"a_star_size", inst.a_star.size()},
              {"sigma", inst.sigma},
              {"doubling_size", inst.doubling_size},
              {"tau", to_json(inst.tau)}};
}

json to_json(const Verdict& v) {
  return json{{"outcome", to_string(v.outcome)}, {"equality", v.equality}, {"detail", v.detail}};
}

json to_json(const PairsDecomposition& d) {
  json pairs = json::array();
  for (const auto& [x, y] : d.pairs) pairs.push_back(json::array({to_json(x), to_json(y)}));
  json out{{"case", to_string(d.kind)}, {"pairs", std::move(pairs)}};
  if (d.l) out["L"] = to_json(*d.l);
  if (d.g) out["g"] = to_json(*d.g);
  return out;
}

namespace {

std::int64_t integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<std::int64_t>();
}

}  // namespace

GroupSpec group_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  if (!j.contains("torsion")) throw ParseError(path + ".torsion", "missing field");
  const json& t = j.at("torsion");
  if (!t.is_array()) throw ParseError(path + ".torsion", "expected an array");
  std::vector<std::int64_t> torsion;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::string p = path + ".torsion[" + std::to_string(i) + "]";
    const std::int64_t d = integer_at(t[i], p);
    if (d < 2) throw ParseError(p, "modulus " + std::to_string(d) + " must be >= 2");
    torsion.push_back(d);
  }
  try {
    return GroupSpec(std::move(torsion));
  } catch (const CapExceeded&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ".torsion", e.what());
  }
}

Element element_from_json(const json& j, const GroupSpec& group, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ParseError(path, "expected [z, [h1, ...]]");
  Element e;
  e.z = integer_at(j[0], path + "[0]");
  const json& h = j[1];
  if (!h.is_array()) throw ParseError(path + "[1]", "expected an array of residues");
  if (h.size() != group.torsion_rank()) {
    throw ParseError(path + "[1]", "expected " + std::to_string(group.torsion_rank()) + " residues, got " +
                                       std::to_string(h.size()));
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::string p = path + "[1][" + std::to_string(i) + "]";
    const std::int64_t v = integer_at(h[i], p);
    const std::int64_t d = group.torsion()[i];
    if (v < 0 || v >= d) throw ParseError(p, "residue " + std::to_string(v) + " outside [0, " + std::to_string(d) + ")");
    e.h.push_back(v);
  }
  return e;
}

GSet gset_from_json(const json& j, const GroupSpec& group) {
  if (!j.is_object()) throw ParseError("$", "expected an object");
  if (!j.contains("elements")) throw ParseError("elements", "missing field");
  const json& elems = j.at("elements");
  if (!elems.is_array()) throw ParseError("elements", "expected an array");
  std::vector<Element> out;
  out.reserve(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    out.push_back(element_from_json(elems[i], group, "elements[" + std::to_string(i) + "]"));
  }
  return GSet(group, out);
}

GSet gset_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("$", "expected an object");
  if (!j.contains("group")) throw ParseError("group", "missing field");
  return gset_from_json(j, group_from_json(j.at("group")));
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace smalldoubling

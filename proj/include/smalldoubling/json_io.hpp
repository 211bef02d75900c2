#pragma once

#include "json.hpp"

#include "smalldoubling/lab.hpp"
#include "smalldoubling/structure.hpp"
#include "smalldoubling/sumset.hpp"

namespace smalldoubling {

using json = nlohmann::json;

json to_json(const Element& e);
json to_json(const Rational& r);  // [num, den]
json to_json(const GroupSpec& g);
// {"group":{"torsion":[...]},"elements":[[z,[h...]],...]} in canonical order.
json to_json(const GSet& s);
json to_json(const Subgroup& k);  // list of residue vectors
json to_json(const CosetProgression& p);
json to_json(const StructureReport& r);
json to_json(const DeficiencyReport& d);
json to_json(const NormalizedInstance& inst);
json to_json(const Verdict& v);
json to_json(const PairsDecomposition& d);

// Parsers throw ParseError naming the offending field, e.g.
// "group.torsion[0]" or "elements[3][1][0]".
GroupSpec group_from_json(const json& j, const std::string& path = "group");
Element element_from_json(const json& j, const GroupSpec& group, const std::string& path);
GSet gset_from_json(const json& j);
// Same, with the elements read against an explicit group.
GSet gset_from_json(const json& j, const GroupSpec& group);
json parse_json_text(const std::string& text);

}  // namespace smalldoubling

#pragma once

#include <g2topo/abelian.hpp>
#include <g2topo/cells.hpp>
#include <g2topo/homology.hpp>

#include <json.hpp>

namespace g2topo {

using json = nlohmann::json;

json to_json(const BigInt& x);
BigInt bigint_from_json(const json& j);

/// {"rank": r, "torsion": [d1, ...]}; also accepts the text form "Z^2 + Z2".
json to_json(const FGAbelianGroup& g);
FGAbelianGroup group_from_json(const json& j);
/// Parses "0", "Z", "Z^2", "Z2", "Z2^3", "Z^2 + Z2 + Z4".
FGAbelianGroup parse_group(const std::string& text);

json to_json(const HomologyTable& t);
json to_json(const std::vector<FGAbelianGroup>& groups);
std::vector<FGAbelianGroup> groups_from_json(const json& j);

/// {"ranks": [...], "boundaries": [[row-major]...], "labels": [...]} with labels flattened by degree.
json to_json(const ChainComplex& c);
ChainComplex complex_from_json(const json& j);

json to_json(const IntegerMatrix& m);

}  // namespace g2topo

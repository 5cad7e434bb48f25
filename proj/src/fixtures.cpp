#include <g2topo/fixtures.hpp>

#include <cstdlib>
#include <fstream>

namespace g2topo {

FixtureStore::FixtureStore(json data) : data_(std::move(data)) {
  if (!data_.is_object() || !data_.contains("version") || !data_.contains("fixtures"))
    throw std::invalid_argument("fixture file needs 'version' and 'fixtures'");
  version_ = data_.at("version").get<int>();
  for (const auto& [name, e] : data_.at("fixtures").items())
    if (!e.is_object() || !e.contains("kind") || !e.contains("citation"))
      throw std::invalid_argument("fixture '" + name + "' needs 'kind' and 'citation'");
}

FixtureStore FixtureStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("fixture file " + path + " is not valid JSON: " + e.what());
  }
  return FixtureStore(std::move(j));
}

std::string FixtureStore::default_path() {
  if (const char* env = std::getenv("G2TOPO_FIXTURES"); env && *env) return env;
  return std::string(G2TOPO_DATA_DIR) + "/reference_tables.json";
}

bool FixtureStore::contains(const std::string& name) const { return data_.at("fixtures").contains(name); }

const json& FixtureStore::entry(const std::string& name) const {
  if (!contains(name)) throw UnknownFixtureError("unknown fixture '" + name + "'");
  return data_.at("fixtures").at(name);
}

std::string FixtureStore::kind(const std::string& name) const { return entry(name).at("kind").get<std::string>(); }

std::string FixtureStore::citation(const std::string& name) const {
  return entry(name).at("citation").get<std::string>();
}

std::vector<FGAbelianGroup> FixtureStore::groups(const std::string& name) const {
  const json& e = entry(name);
  if (!e.contains("groups")) throw std::invalid_argument("fixture '" + name + "' has no group table");
  return groups_from_json(e.at("groups"));
}

std::vector<std::string> FixtureStore::names() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : data_.at("fixtures").items()) out.push_back(name);
  return out;
}

}  // namespace g2topo

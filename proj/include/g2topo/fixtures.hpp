#pragma once

#include <g2topo/abelian.hpp>
#include <g2topo/serialize.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace g2topo {

class UnknownFixtureError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Versioned reference tables: {"version": 1, "fixtures": {name: {"kind": ..., "citation": ..., ...}}}.
class FixtureStore {
 public:
  explicit FixtureStore(json data);
  static FixtureStore load(const std::string& path);
  /// G2TOPO_FIXTURES if set, otherwise the bundled data directory.
  static std::string default_path();
  static FixtureStore load_default() { return load(default_path()); }

  int version() const { return version_; }
  bool contains(const std::string& name) const;
  const json& entry(const std::string& name) const;
  std::string kind(const std::string& name) const;
  std::string citation(const std::string& name) const;
  std::vector<FGAbelianGroup> groups(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  json data_;
  int version_ = 0;
};

}  // namespace g2topo

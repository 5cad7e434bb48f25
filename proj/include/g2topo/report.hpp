#pragma once

#include <g2topo/fixtures.hpp>
#include <g2topo/serialize.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace g2topo {

struct FixtureResult {
  std::string name;
  std::string kind;
  std::string citation;
  bool pass = false;
  std::string computed;
  std::string expected;
  std::string detail;
};

struct ReportOptions {
  /// Replaces the seeds recorded in randomized fixtures.
  std::optional<std::uint64_t> seed;
  /// Fixture names to run; empty means all.
  std::vector<std::string> only;
};

/// Homology of a fixture, computed from its cell model when it names one, otherwise as recorded.
/// Names that are not fixtures are read as cell-model names.
std::vector<FGAbelianGroup> homology_of(const FixtureStore& store, const std::string& name);

FixtureResult check_fixture(const FixtureStore& store, const std::string& name, const ReportOptions& options = {});
/// Results in fixture name order.
std::vector<FixtureResult> run_report(const FixtureStore& store, const ReportOptions& options = {});
bool all_pass(const std::vector<FixtureResult>& results);

json to_json(const FixtureResult& r);
json to_json(const std::vector<FixtureResult>& results);
std::string to_markdown(const std::vector<FixtureResult>& results);

std::string table_string(const std::vector<FGAbelianGroup>& t);

}  // namespace g2topo

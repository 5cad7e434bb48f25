#pragma once

#include <g2topo/cells.hpp>

#include <string>
#include <vector>

namespace g2topo {

class FixtureStore;

struct HomologyTable {
  std::string space_name;
  std::vector<FGAbelianGroup> groups;

  /// Group in degree n, zero beyond the table.
  FGAbelianGroup at(std::size_t n) const { return n < groups.size() ? groups[n] : FGAbelianGroup(); }
  std::size_t top_degree() const { return groups.empty() ? 0 : groups.size() - 1; }
};

HomologyTable compute_homology(const ChainComplex& c, std::string space_name = "");

/// Betti numbers by degree.
std::vector<long> poincare_polynomial(const HomologyTable& t);

long euler_characteristic(const HomologyTable& t);

/// Dimensions of H_*(C; Z2), from the complex with entries reduced mod 2.
std::vector<std::size_t> mod2_homology(const ChainComplex& c);

/// Mod-2 dimensions predicted from integral homology by universal coefficients.
std::vector<std::size_t> mod2_from_integral(const HomologyTable& t);

struct TableComparison {
  bool pass = true;
  std::vector<std::size_t> differing_degrees;
  std::string detail;
};

TableComparison compare_tables(const std::vector<FGAbelianGroup>& computed,
                               const std::vector<FGAbelianGroup>& expected);

TableComparison compare_with_fixture(const HomologyTable& t, const std::string& fixture_name,
                                     const FixtureStore& store);

std::string to_markdown(const HomologyTable& t);

}  // namespace g2topo

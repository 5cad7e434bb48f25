#pragma once

#include <g2topo/abelian.hpp>
#include <g2topo/homology.hpp>
#include <g2topo/serialize.hpp>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace g2topo {

class FixtureStore;

using Bidegree = std::pair<int, int>;

/// E^r_{p,q} on a finite part of the first quadrant; absent entries are zero.
struct BigradedPage {
  int page = 2;
  std::map<Bidegree, FGAbelianGroup> entries;

  FGAbelianGroup at(int p, int q) const;
  void set(int p, int q, FGAbelianGroup g);
  int max_p() const;
  int max_q() const;
  /// Entries of total degree n ordered by filtration, E_{0,n} first.
  std::vector<FGAbelianGroup> diagonal(int n) const;
  std::string to_string() const;

  friend bool operator==(const BigradedPage& a, const BigradedPage& b);
};

/// d_r keyed by source bidegree; each map goes (p, q) -> (p - r, q + r - 1).
struct DifferentialAssignment {
  int page = 2;
  std::map<Bidegree, GroupHom> maps;
};

class SpectralSequenceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SearchBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// E^2_{p,q} = H_p(B) ⊗ H_q(F) ⊕ Tor(H_{p-1}(B), H_q(F)). Coefficients are untwisted, so a base
/// that is not simply connected is rejected unless override_untwisted is set.
BigradedPage e2_page(const std::vector<FGAbelianGroup>& base, const std::vector<FGAbelianGroup>& fiber,
                     bool base_simply_connected = true, bool override_untwisted = false);

/// E^{r+1} = ker d_r / im d_r; differentials must match the page and compose to zero.
BigradedPage turn_page(const BigradedPage& page, const DifferentialAssignment& d);

struct ConvergenceReport {
  bool pass = true;
  /// Set when some degree fell back to rank and order conditions.
  bool necessary_only = false;
  std::vector<int> failing_degrees;
  std::string detail;
};

/// Whether each H_n(total) admits a filtration whose quotients are the E^∞ diagonal.
ConvergenceReport infinity_consistency(const BigradedPage& limit, const std::vector<FGAbelianGroup>& total,
                                       std::size_t max_extension_order = 64);

/// Single-degree version; nullopt layers are treated as zero.
bool diagonal_supports(const std::vector<FGAbelianGroup>& layers, const FGAbelianGroup& total,
                       std::size_t max_extension_order, bool* necessary_only = nullptr);

enum class SpaceRole { Base, Total };

struct GroupConstraint {
  enum class Kind { Equals, FreeRank, Cyclic, PoincareDuality };
  Kind kind = Kind::Equals;
  SpaceRole space = SpaceRole::Total;
  std::size_t degree = 0;
  FGAbelianGroup group;
  /// Free rank for FreeRank, manifold dimension for PoincareDuality.
  std::size_t value = 0;
};

/// Tables with nullopt for unknown degrees.
struct FibrationProblem {
  std::string name;
  std::vector<FGAbelianGroup> fiber;
  std::vector<std::optional<FGAbelianGroup>> base;
  std::vector<std::optional<FGAbelianGroup>> total;
  std::vector<GroupConstraint> constraints;
  bool base_simply_connected = true;
};

struct SolveBounds {
  std::size_t max_rank = 4;
  BigInt max_exponent = 8;
  std::size_t max_torsion_factors = 4;
  std::size_t node_budget = 10'000'000;
  std::size_t max_extension_order = 64;
};

struct Solution {
  std::vector<FGAbelianGroup> base;
  std::vector<FGAbelianGroup> total;
  /// E^2, E^3, ..., with the last page stable.
  std::vector<BigradedPage> pages;
  /// Witness differentials; turning pages[i] by differentials[i] gives pages[i + 1].
  std::vector<DifferentialAssignment> differentials;
  const BigradedPage& limit() const { return pages.back(); }
};

struct SolveResult {
  std::vector<Solution> solutions;
  std::size_t nodes = 0;
  bool necessary_only = false;
};

/// Every assignment of unknown groups and differentials, within bounds, that turns the E^2
/// page into a limit consistent with the total and the constraints. Deterministic order.
SolveResult solve(const FibrationProblem& problem, const SolveBounds& bounds = {});

/// Distinct (kernel, cokernel) pairs of homomorphisms A -> B; free images bounded as in enumerate_homs,
/// and free-to-free maps by their invariant factors.
std::vector<std::pair<FGAbelianGroup, FGAbelianGroup>> hom_outcomes(const FGAbelianGroup& a,
                                                                    const FGAbelianGroup& b,
                                                                    const BigInt& bound);

/// Finite stretch of a long exact sequence; maps[i] : nodes[i] -> nodes[i + 1].
struct LongExactTemplate {
  std::vector<std::string> labels;
  std::vector<std::optional<FGAbelianGroup>> nodes;
  std::vector<std::optional<GroupHom>> maps;
  int sphere_dim = -1;
};

/// H^{m-r-1}(B) -> H^m(B) -> H^m(E) -> H^{m-r}(B) -> H^{m+1}(B) for an S^r-bundle E -> B.
/// Cohomology tables may hold unknowns; negative or missing degrees are zero.
LongExactTemplate gysin_segment(const std::vector<std::optional<FGAbelianGroup>>& base_cohomology,
                                const std::vector<std::optional<FGAbelianGroup>>& total_cohomology, int r,
                                int m, const std::string& base_name = "B", const std::string& total_name = "E");

struct GysinResult {
  /// Candidate values for each unknown node, keyed by node index.
  std::map<std::size_t, std::set<FGAbelianGroup>> candidates;
  bool forced() const;
  /// Template with every uniquely determined node filled in.
  LongExactTemplate filled;
};

class InconsistentTemplateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

GysinResult gysin_solve(const LongExactTemplate& t, const BigInt& free_bound = 4);

/// Reads {"fiber", "base", "total", "constraints", "bounds"}; names resolve to fixtures or cell models.
FibrationProblem problem_from_json(const json& j, const FixtureStore& store, SolveBounds* bounds = nullptr);
/// The five fibrations: so3-v37-g37, s1-v27-g27, s4-v37-v27, su3-g2-s6, so4-g2-ass.
std::vector<std::string> replay_names();
FibrationProblem named_problem(const std::string& name, const FixtureStore& store, SolveBounds* bounds = nullptr);
std::string problems_dir();

json to_json(const BigradedPage& page);
json to_json(const Solution& s);
json to_json(const SolveResult& r);
std::string to_markdown(const BigradedPage& page);

}  // namespace g2topo

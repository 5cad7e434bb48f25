#pragma once

#include <g2topo/abelian.hpp>
#include <g2topo/serialize.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace g2topo {

enum class Coefficients { Z, Z2, Z3 };

/// 0 for Z, otherwise the prime.
BigInt characteristic(Coefficients c);
Coefficients coefficients_from_string(const std::string& s);
std::string to_string(Coefficients c);

struct Generator {
  std::string name;
  int degree = 0;
};

/// Exponent vector over a fixed generator list.
using Monomial = std::vector<int>;

/// Sparse polynomial in graded-commutative variables, monomials in generator order.
struct Polynomial {
  std::map<Monomial, BigInt> terms;

  bool is_zero() const { return terms.empty(); }
  void add(const Monomial& m, const BigInt& c);
};

class NonHomogeneousError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegreeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PolynomialParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sign (+1 or -1) of moving b past a in a * b, for exponent vectors over gens.
int commutation_sign(const std::vector<Generator>& gens, const Monomial& a, const Monomial& b);
Polynomial multiply(const std::vector<Generator>& gens, const Polynomial& a, const Polynomial& b);
/// Degree of a homogeneous polynomial, -1 for zero; throws NonHomogeneousError otherwise.
int homogeneous_degree(const std::vector<Generator>& gens, const Polynomial& p);

/// Integer coefficients, names, ^, *, +, -, and parentheses.
Polynomial parse_polynomial(const std::string& text, const std::vector<Generator>& gens);
std::string to_string(const Polynomial& p, const std::vector<Generator>& gens);

/// One summand: R[gens] / (rels) with x*y = (-1)^{|x||y|} y*x.
struct Summand {
  Coefficients coeff = Coefficients::Z;
  std::vector<Generator> gens;
  std::vector<Polynomial> rels;
  std::vector<std::string> rel_text;
};

/// Direct sum of summands. Degree 0 comes from the first summand only, the others are
/// the positive-degree parts of their algebras, and products across summands vanish.
struct RingPresentation {
  std::vector<Summand> summands;

  std::vector<Generator> generators() const;
  /// Summand index of a generator name, or -1.
  int summand_of(const std::string& name) const;
};

Summand summand_from_json(const json& j);
/// Either {"summands": [...]} or a single {"coeff", "gens", "rels"}.
RingPresentation presentation_from_json(const json& j);
json to_json(const RingPresentation& r);

struct GradedDimensionTable {
  Coefficients coeff = Coefficients::Z;
  std::vector<FGAbelianGroup> groups;

  /// Free rank over Z, dimension over a prime field.
  std::vector<long> ranks() const;
};

/// Monomials of degree n modulo relations and graded commutativity, per degree up to cutoff.
GradedDimensionTable graded_dimensions(const RingPresentation& r, int cutoff);
GradedDimensionTable graded_dimensions(const Summand& s, int cutoff, bool include_unit = true);

/// Cauchy product truncated at cutoff.
std::vector<long> series_product(const std::vector<long>& a, const std::vector<long>& b, int cutoff);
/// 1 / prod (1 - t^d) truncated at cutoff.
std::vector<long> polynomial_series(const std::vector<int>& degrees, int cutoff);

/// Whether p vanishes in the summand quotient, reducing coefficients into its ring.
bool vanishes(const Summand& s, const Polynomial& p);

struct HomCheck {
  bool pass = true;
  std::vector<std::string> failures;
};

/// Images are polynomials in the target generators. Passes iff every source relation maps to
/// zero and each required (source, target) pair maps to the given element.
HomCheck check_ring_hom(const RingPresentation& source, const RingPresentation& target,
                        const std::map<std::string, std::string>& images,
                        const std::vector<std::pair<std::string, std::string>>& required = {});

}  // namespace g2topo

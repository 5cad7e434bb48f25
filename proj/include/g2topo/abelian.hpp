#pragma once

#include <g2topo/scalar.hpp>
#include <g2topo/smith.hpp>

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace g2topo {

/// Raised when a composite of boundary maps is nonzero.
class MalformedComplexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Z^rank + Z/d_1 + ... + Z/d_t with d_1 | d_2 | ... and every d_i >= 2.
/// Canonical generators: the free ones first, then one per invariant factor.
class FGAbelianGroup {
 public:
  FGAbelianGroup() = default;
  FGAbelianGroup(std::size_t rank, std::vector<BigInt> invariant_factors);

  static FGAbelianGroup free(std::size_t rank) { return FGAbelianGroup(rank, {}); }
  /// Z/order; order 0 gives Z and order 1 the zero group.
  static FGAbelianGroup cyclic(const BigInt& order);
  /// Direct sum of cyclic groups of arbitrary orders (0 meaning Z), normalized.
  static FGAbelianGroup from_cyclic_orders(const std::vector<BigInt>& orders);

  std::size_t rank() const { return rank_; }
  const std::vector<BigInt>& torsion() const { return torsion_; }
  std::size_t num_generators() const { return rank_ + torsion_.size(); }
  /// Order of canonical generator i, 0 for free generators.
  BigInt generator_order(std::size_t i) const;

  bool is_zero() const { return rank_ == 0 && torsion_.empty(); }
  bool is_finite() const { return rank_ == 0; }
  bool is_cyclic() const { return num_generators() <= 1; }
  /// Order of a finite group.
  BigInt order() const;
  /// Largest invariant factor, 1 when torsion-free.
  BigInt exponent() const;

  FGAbelianGroup free_part() const { return free(rank_); }
  FGAbelianGroup torsion_part() const { return FGAbelianGroup(0, torsion_); }

  /// Relation matrix in canonical coordinates: one column d_i e_{rank+i} per torsion generator.
  IntegerMatrix relations() const;
  /// Reduce torsion coordinates into [0, d_i).
  IntegerVector reduce(const IntegerVector& x) const;
  bool is_zero_element(const IntegerVector& x) const;

  std::string to_string() const;

  friend bool operator==(const FGAbelianGroup&, const FGAbelianGroup&) = default;
  friend std::strong_ordering operator<=>(const FGAbelianGroup& a, const FGAbelianGroup& b);

 private:
  std::size_t rank_ = 0;
  std::vector<BigInt> torsion_;
};

FGAbelianGroup direct_sum(const FGAbelianGroup& a, const FGAbelianGroup& b);
FGAbelianGroup direct_sum(const std::vector<FGAbelianGroup>& groups);
FGAbelianGroup power(const FGAbelianGroup& g, std::size_t n);
FGAbelianGroup tensor(const FGAbelianGroup& a, const FGAbelianGroup& b);
FGAbelianGroup tor(const FGAbelianGroup& a, const FGAbelianGroup& b);
/// Number of homomorphisms between finite groups: product of gcd(a_i, b_j).
BigInt hom_count(const FGAbelianGroup& a, const FGAbelianGroup& b);

std::ostream& operator<<(std::ostream& os, const FGAbelianGroup& g);

/// A subquotient N / D of Z^n given by generating sets of lattices D ⊆ N, in canonical form.
class Subquotient {
 public:
  Subquotient(const IntegerMatrix& numerator, const IntegerMatrix& denominator);

  const FGAbelianGroup& group() const { return group_; }
  /// Ambient coordinates of the canonical generators (n × num_generators).
  const IntegerMatrix& embedding() const { return embedding_; }
  bool contains(const IntegerVector& x) const;
  /// Canonical coordinates of an ambient vector lying in the numerator lattice.
  IntegerVector coordinates(const IntegerVector& x) const;
  /// Applies coordinates() column by column.
  IntegerMatrix coordinates(const IntegerMatrix& xs) const;

 private:
  FGAbelianGroup group_;
  IntegerMatrix embedding_;
  IntegerMatrix basis_transform_;  // U from the SNF of the numerator
  std::vector<BigInt> basis_scale_;
  IntegerMatrix to_canonical_;     // lattice-basis coordinates -> canonical coordinates
};

/// Integer kernel basis of M as columns.
IntegerMatrix integer_kernel(const IntegerMatrix& m);
/// Whether x lies in the column lattice of M.
bool in_lattice(const IntegerMatrix& m, const IntegerVector& x);
/// Whether the column lattices of A and B coincide.
bool same_lattice(const IntegerMatrix& a, const IntegerMatrix& b);
IntegerMatrix hcat(const IntegerMatrix& a, const IntegerMatrix& b);

/// Homomorphism between canonical forms, matrix in canonical generators.
class GroupHom {
 public:
  GroupHom() = default;
  GroupHom(FGAbelianGroup domain, FGAbelianGroup codomain, IntegerMatrix matrix);

  static GroupHom zero(const FGAbelianGroup& domain, const FGAbelianGroup& codomain);
  static GroupHom identity(const FGAbelianGroup& group);
  /// Multiplication by n on a cyclic (or any) group.
  static GroupHom multiplication(const FGAbelianGroup& group, const BigInt& n);

  const FGAbelianGroup& domain() const { return domain_; }
  const FGAbelianGroup& codomain() const { return codomain_; }
  const IntegerMatrix& matrix() const { return matrix_; }

  bool is_zero() const;
  /// Lattice of kernel elements in domain coordinates.
  Subquotient kernel() const;
  Subquotient image() const;
  Subquotient cokernel() const;
  /// Kernel as a group with its inclusion map into the domain.
  GroupHom kernel_inclusion() const;
  IntegerVector apply(const IntegerVector& x) const;

  friend bool operator==(const GroupHom& a, const GroupHom& b);

 private:
  FGAbelianGroup domain_;
  FGAbelianGroup codomain_;
  IntegerMatrix matrix_;
};

/// g ∘ f
GroupHom compose(const GroupHom& g, const GroupHom& f);

/// ker(d_out) / im(d_in) for consecutive boundary matrices.
FGAbelianGroup homology_at(const IntegerMatrix& d_in, const IntegerMatrix& d_out);

/// H^n = free(H_n) + torsion(H_{n-1}).
std::vector<FGAbelianGroup> uct_cohomology(const std::vector<FGAbelianGroup>& homology);

struct DualityReport {
  bool pass = true;
  std::optional<std::size_t> degree;
  std::string detail;
};

DualityReport poincare_duality_check(const std::vector<FGAbelianGroup>& homology, std::size_t dim,
                                     bool orientable = true);

struct ExactnessReport {
  bool pass = true;
  std::optional<std::size_t> node;
  std::string detail;
};

/// maps[i] : groups[i] -> groups[i+1]; exactness checked at every interior node.
ExactnessReport exact_sequence_check(const std::vector<FGAbelianGroup>& groups,
                                     const std::vector<GroupHom>& maps);

/// All homomorphisms A -> B in lexicographic order of generator images.
/// Free coordinates of images range over [-free_bound, free_bound].
std::vector<GroupHom> enumerate_homs(const FGAbelianGroup& a, const FGAbelianGroup& b,
                                     std::optional<BigInt> free_bound = std::nullopt);

/// All middle groups G of extensions 0 -> A -> G -> C -> 0, or nullopt when the number of
/// extension classes to scan exceeds max_classes.
std::optional<std::set<FGAbelianGroup>> extension_middles(const FGAbelianGroup& sub,
                                                           const FGAbelianGroup& quotient,
                                                           std::size_t max_classes = 4096);

/// Groups admitting a filtration with the given successive quotients (bottom first).
std::optional<std::set<FGAbelianGroup>> iterated_extensions(const std::vector<FGAbelianGroup>& layers,
                                                             std::size_t max_classes = 4096);

}  // namespace g2topo

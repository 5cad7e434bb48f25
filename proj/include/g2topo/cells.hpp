#pragma once

#include <g2topo/abelian.hpp>

#include <optional>
#include <string>
#include <vector>

namespace g2topo {

/// One sheet of a cell's attaching map over a codimension-one face: the incidence sign and the
/// 1-cells crossed by the path from the base point to that sheet.
struct SheetIncidence {
  std::size_t cell;
  std::size_t face;
  int sign;
  std::vector<std::size_t> loop;
};

/// Graded free modules with integer boundary matrices; ∂∂ = 0 is checked on construction.
class ChainComplex {
 public:
  ChainComplex() = default;
  /// boundaries[d - 1] is ∂_d : C_d -> C_{d-1}, for d = 1 .. ranks.size() - 1.
  ChainComplex(std::vector<std::size_t> ranks, std::vector<IntegerMatrix> boundaries,
               std::vector<std::vector<std::string>> labels = {});

  std::size_t top_dim() const { return ranks_.empty() ? 0 : ranks_.size() - 1; }
  bool empty() const { return ranks_.empty(); }
  const std::vector<std::size_t>& ranks() const { return ranks_; }
  std::size_t rank(std::size_t d) const { return d < ranks_.size() ? ranks_[d] : 0; }
  /// ∂_d as a rank(d-1) × rank(d) matrix (empty shapes outside the range).
  IntegerMatrix boundary(std::size_t d) const;
  const std::string& label(std::size_t d, std::size_t i) const { return labels_.at(d).at(i); }
  const std::vector<std::vector<std::string>>& labels() const { return labels_; }

  /// Attaching-path data per degree, present on Schubert-type complexes.
  const std::optional<std::vector<std::vector<SheetIncidence>>>& sheets() const { return sheets_; }
  void set_sheets(std::vector<std::vector<SheetIncidence>> sheets);

 private:
  std::vector<std::size_t> ranks_;
  std::vector<IntegerMatrix> boundaries_;
  std::vector<std::vector<std::string>> labels_;
  std::optional<std::vector<std::vector<SheetIncidence>>> sheets_;
};

/// Weakly increasing jumps 0 <= a_1 <= ... <= a_k <= n - k; cell dimension is their sum.
struct SchubertSymbol {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<std::size_t> jumps;

  SchubertSymbol(std::size_t k, std::size_t n, std::vector<std::size_t> jumps);
  std::size_t dimension() const;
  std::string to_string() const;
};

/// All Schubert symbols of G_k(R^n), grouped by dimension in lexicographic order.
std::vector<std::vector<SchubertSymbol>> schubert_cells(std::size_t k, std::size_t n);

/// A class in H^1(-; Z2) given by its value on each 1-cell.
struct OrientationCharacter {
  std::vector<bool> values;
  bool is_trivial() const;
};

ChainComplex point_complex();
ChainComplex sphere_complex(int n);
ChainComplex rp_complex(int n);
ChainComplex grassmann_complex(int k, int n);
/// First Stiefel–Whitney character of the tautological bundle on the Schubert complex.
OrientationCharacter grassmann_w1(int k, int n);
ChainComplex oriented_double_cover(const ChainComplex& base, const OrientationCharacter& w1);
ChainComplex oriented_grassmann_complex(int k, int n);
ChainComplex stiefel_complex(int k, int n);
ChainComplex product_complex(const ChainComplex& a, const ChainComplex& b);
long euler_characteristic(const ChainComplex& c);

/// Parses sphere:n, rp:n, grassmann:k:n, grassmann+:k:n, stiefel:k:n, so3, so4, point,
/// product:<a>x<b>.
ChainComplex space_complex(const std::string& name);

}  // namespace g2topo

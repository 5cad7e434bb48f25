#pragma once

#include <g2topo/scalar.hpp>

#include <type_traits>
#include <utility>
#include <vector>

namespace g2topo {

namespace detail {

inline BigInt abs_value(const BigInt& a) { return abs(a); }
inline BigInt floor_quotient(const BigInt& a, const BigInt& b) { return floor_div(a, b); }

template <typename I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
I abs_value(I a) {
  return a < 0 ? -a : a;
}

template <typename I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
I floor_quotient(I a, I b) {
  I q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// U * M * V = S with U, V unimodular; the inverses are tracked alongside.
template <typename Scalar>
struct SmithDecomposition {
  Matrix<Scalar> S;
  Matrix<Scalar> U;
  Matrix<Scalar> V;
  Matrix<Scalar> U_inv;
  Matrix<Scalar> V_inv;
  Eigen::Index rank = 0;

  /// Nonzero diagonal entries d_1 | d_2 | ... (positive).
  std::vector<Scalar> invariant_factors() const {
    std::vector<Scalar> out;
    for (Eigen::Index i = 0; i < rank; ++i) out.push_back(S(i, i));
    return out;
  }
};

/// Smith normal form with minimal-absolute-value pivoting.
template <typename Derived>
SmithDecomposition<typename Derived::Scalar> smith_normal_form(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using detail::abs_value;
  using detail::floor_quotient;

  SmithDecomposition<Scalar> out;
  Matrix<Scalar> a = input;
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  out.U = Matrix<Scalar>::Identity(m, m);
  out.U_inv = Matrix<Scalar>::Identity(m, m);
  out.V = Matrix<Scalar>::Identity(n, n);
  out.V_inv = Matrix<Scalar>::Identity(n, n);

  auto swap_rows = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    a.row(i).swap(a.row(j));
    out.U.row(i).swap(out.U.row(j));
    out.U_inv.col(i).swap(out.U_inv.col(j));
  };
  auto swap_cols = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    a.col(i).swap(a.col(j));
    out.V.col(i).swap(out.V.col(j));
    out.V_inv.row(i).swap(out.V_inv.row(j));
  };
  // row_i += q * row_t
  auto add_row = [&](Eigen::Index i, Eigen::Index t, const Scalar& q) {
    for (Eigen::Index c = 0; c < n; ++c) a(i, c) += q * a(t, c);
    for (Eigen::Index c = 0; c < m; ++c) out.U(i, c) += q * out.U(t, c);
    for (Eigen::Index r = 0; r < m; ++r) out.U_inv(r, t) -= q * out.U_inv(r, i);
  };
  // col_j += q * col_t
  auto add_col = [&](Eigen::Index j, Eigen::Index t, const Scalar& q) {
    for (Eigen::Index r = 0; r < m; ++r) a(r, j) += q * a(r, t);
    for (Eigen::Index r = 0; r < n; ++r) out.V(r, j) += q * out.V(r, t);
    for (Eigen::Index c = 0; c < n; ++c) out.V_inv(t, c) -= q * out.V_inv(j, c);
  };

  Eigen::Index t = 0;
  for (; t < std::min(m, n); ++t) {
    while (true) {
      Eigen::Index pi = -1, pj = -1;
      Scalar best = 0;
      for (Eigen::Index i = t; i < m; ++i)
        for (Eigen::Index j = t; j < n; ++j)
          if (a(i, j) != 0 && (pi < 0 || abs_value(a(i, j)) < best)) {
            best = abs_value(a(i, j));
            pi = i;
            pj = j;
          }
      if (pi < 0) break;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        Scalar q = floor_quotient(Scalar(a(i, t)), Scalar(a(t, t)));
        add_row(i, t, Scalar(-q));
        if (a(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        Scalar q = floor_quotient(Scalar(a(t, j)), Scalar(a(t, t)));
        add_col(j, t, Scalar(-q));
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      Eigen::Index bad_row = -1;
      for (Eigen::Index i = t + 1; i < m && bad_row < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (bad_row < 0) break;
      add_row(t, bad_row, Scalar(1));
    }
    if (a(t, t) == 0) break;
    if (a(t, t) < 0) {
      for (Eigen::Index c = 0; c < n; ++c) a(t, c) = -a(t, c);
      for (Eigen::Index c = 0; c < m; ++c) out.U(t, c) = -out.U(t, c);
      for (Eigen::Index r = 0; r < m; ++r) out.U_inv(r, t) = -out.U_inv(r, t);
    }
  }
  out.rank = t;
  out.S = std::move(a);
  return out;
}

}  // namespace g2topo

#pragma once

#include <g2topo/scalar.hpp>

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace g2topo {

template <typename Scalar>
using Vector7 = Eigen::Matrix<Scalar, 7, 1>;
template <typename Scalar>
using Quaternion4 = Eigen::Matrix<Scalar, 4, 1>;
/// Columns span the plane.
template <typename Scalar>
using PlaneBasis = Eigen::Matrix<Scalar, 7, Eigen::Dynamic>;

/// Coefficients over (1, i, j, k, l, li, lj, lk); the pair (a, b) of quaternions is a + lb.
template <typename Scalar>
struct Octonion {
  Eigen::Matrix<Scalar, 8, 1> c = Eigen::Matrix<Scalar, 8, 1>::Zero();

  static Octonion unit(int index) {
    Octonion o;
    o.c(index) = Scalar(1);
    return o;
  }
  Quaternion4<Scalar> first() const { return c.template head<4>(); }
  Quaternion4<Scalar> second() const { return c.template tail<4>(); }
  static Octonion from_pair(const Quaternion4<Scalar>& a, const Quaternion4<Scalar>& b) {
    Octonion o;
    o.c << a, b;
    return o;
  }
  Octonion conjugate() const {
    Octonion o = *this;
    o.c.template tail<7>() = -o.c.template tail<7>();
    return o;
  }
  Scalar norm2() const { return c.squaredNorm(); }

  friend bool operator==(const Octonion& a, const Octonion& b) { return a.c == b.c; }
};

template <typename Scalar>
Quaternion4<Scalar> quaternion_mul(const Quaternion4<Scalar>& a, const Quaternion4<Scalar>& b) {
  Quaternion4<Scalar> r;
  r << a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3), a(0) * b(1) + a(1) * b(0) + a(2) * b(3) - a(3) * b(2),
      a(0) * b(2) - a(1) * b(3) + a(2) * b(0) + a(3) * b(1), a(0) * b(3) + a(1) * b(2) - a(2) * b(1) + a(3) * b(0);
  return r;
}

template <typename Scalar>
Quaternion4<Scalar> quaternion_conj(Quaternion4<Scalar> a) {
  a.template tail<3>() = -a.template tail<3>();
  return a;
}

/// (a, b)(c, d) = (ac - conj(d) b, da + b conj(c)).
template <typename Scalar>
Octonion<Scalar> octonion_mul(const Octonion<Scalar>& x, const Octonion<Scalar>& y) {
  const auto a = x.first(), b = x.second(), c = y.first(), d = y.second();
  return Octonion<Scalar>::from_pair(quaternion_mul<Scalar>(a, c) - quaternion_mul<Scalar>(quaternion_conj<Scalar>(d), b),
                                     quaternion_mul<Scalar>(d, a) + quaternion_mul<Scalar>(b, quaternion_conj<Scalar>(c)));
}

/// e1..e7 = i, j, k, l, li, lj, -lk.
template <typename Scalar>
Octonion<Scalar> to_octonion(const Vector7<Scalar>& v) {
  Octonion<Scalar> o;
  for (int i = 0; i < 6; ++i) o.c(i + 1) = v(i);
  o.c(7) = -v(6);
  return o;
}

template <typename Scalar>
Vector7<Scalar> imaginary_part(const Octonion<Scalar>& o) {
  Vector7<Scalar> v;
  for (int i = 0; i < 6; ++i) v(i) = o.c(i + 1);
  v(6) = -o.c(7);
  return v;
}

template <typename Scalar>
Vector7<Scalar> basis_vector(int index) {
  Vector7<Scalar> v = Vector7<Scalar>::Zero();
  v(index - 1) = Scalar(1);
  return v;
}

/// u x v = im(conj(v) u).
template <typename Scalar>
Vector7<Scalar> cross(const Vector7<Scalar>& u, const Vector7<Scalar>& v) {
  return imaginary_part(octonion_mul(to_octonion(v).conjugate(), to_octonion(u)));
}

/// Antisymmetric form on R^7; keys are index bitmasks, bit i for e_{i+1}.
template <typename Scalar>
struct Form {
  int degree = 0;
  std::map<std::uint8_t, Scalar> terms;

  void add(std::uint8_t mask, const Scalar& c) {
    if (c == Scalar(0)) return;
    auto [it, fresh] = terms.emplace(mask, c);
    if (!fresh) {
      it->second += c;
      if (it->second == Scalar(0)) terms.erase(it);
    }
  }
  friend bool operator==(const Form& a, const Form& b) { return a.degree == b.degree && a.terms == b.terms; }
};

/// Parses "123" style index strings.
std::uint8_t index_mask(const std::string& digits);
std::string mask_digits(std::uint8_t mask);
/// Sign of the shuffle putting the indices of a before those of b, 0 if they overlap.
int wedge_sign(std::uint8_t a, std::uint8_t b);

template <typename Scalar>
Form<Scalar> wedge(const Form<Scalar>& a, const Form<Scalar>& b) {
  Form<Scalar> out;
  out.degree = a.degree + b.degree;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms)
      if (const int s = wedge_sign(ma, mb)) out.add(static_cast<std::uint8_t>(ma | mb), Scalar(s) * ca * cb);
  return out;
}

template <typename Scalar>
Form<Scalar> interior(const Vector7<Scalar>& u, const Form<Scalar>& f) {
  Form<Scalar> out;
  out.degree = f.degree - 1;
  for (const auto& [m, c] : f.terms) {
    int pos = 0;
    for (int i = 0; i < 7; ++i) {
      if (!(m >> i & 1)) continue;
      if (u(i) != Scalar(0)) out.add(static_cast<std::uint8_t>(m & ~(1u << i)), Scalar(pos % 2 ? -1 : 1) * u(i) * c);
      ++pos;
    }
  }
  return out;
}

/// Euclidean metric, orientation e1..e7.
template <typename Scalar>
Form<Scalar> hodge_star(const Form<Scalar>& f) {
  Form<Scalar> out;
  out.degree = 7 - f.degree;
  for (const auto& [m, c] : f.terms) {
    const auto comp = static_cast<std::uint8_t>(~m & 0x7f);
    out.add(comp, Scalar(wedge_sign(m, comp)) * c);
  }
  return out;
}

/// f(v_1, ..., v_k), with columns of vs as the arguments.
template <typename Scalar>
Scalar evaluate(const Form<Scalar>& f, const PlaneBasis<Scalar>& vs) {
  if (vs.cols() != f.degree) throw std::invalid_argument("form degree does not match argument count");
  Form<Scalar> g = f;
  for (Eigen::Index j = 0; j < vs.cols(); ++j) g = interior<Scalar>(vs.col(j), g);
  const auto it = g.terms.find(0);
  return it == g.terms.end() ? Scalar(0) : it->second;
}

template <typename Scalar>
Form<Scalar> form_from_terms(int degree, const std::vector<std::pair<std::string, int>>& terms) {
  Form<Scalar> f;
  f.degree = degree;
  for (const auto& [digits, c] : terms) f.add(index_mask(digits), Scalar(c));
  return f;
}

template <typename Scalar>
Form<Scalar> phi0() {
  return form_from_terms<Scalar>(3, {{"123", 1}, {"145", 1}, {"167", 1}, {"246", 1}, {"257", -1}, {"347", -1}, {"356", -1}});
}

template <typename Scalar>
Form<Scalar> star_phi0() {
  return form_from_terms<Scalar>(
      4, {{"4567", 1}, {"2367", 1}, {"2345", 1}, {"1357", 1}, {"1346", -1}, {"1256", -1}, {"1247", -1}});
}

/// The three-form <u x v, w>, read off from the cross product on basis triples.
template <typename Scalar>
Form<Scalar> phi_from_cross() {
  Form<Scalar> f;
  f.degree = 3;
  for (int a = 1; a <= 7; ++a)
    for (int b = a + 1; b <= 7; ++b)
      for (int c = b + 1; c <= 7; ++c)
        f.add(static_cast<std::uint8_t>(1u << (a - 1) | 1u << (b - 1) | 1u << (c - 1)),
              cross<Scalar>(basis_vector<Scalar>(a), basis_vector<Scalar>(b)).dot(basis_vector<Scalar>(c)));
  return f;
}

template <typename Scalar>
PlaneBasis<Scalar> columns(std::initializer_list<Vector7<Scalar>> vs) {
  PlaneBasis<Scalar> m(7, static_cast<Eigen::Index>(vs.size()));
  Eigen::Index j = 0;
  for (const auto& v : vs) m.col(j++) = v;
  return m;
}

template <typename Scalar>
Scalar phi(const Vector7<Scalar>& u, const Vector7<Scalar>& v, const Vector7<Scalar>& w) {
  return cross(u, v).dot(w);
}

/// -u x (v x w) - <u,v> w + <u,w> v.
template <typename Scalar>
Vector7<Scalar> chi(const Vector7<Scalar>& u, const Vector7<Scalar>& v, const Vector7<Scalar>& w) {
  return -cross<Scalar>(u, cross(v, w)) - u.dot(v) * w + u.dot(w) * v;
}

/// Components *phi0(u, v, w, e_i).
template <typename Scalar>
Vector7<Scalar> chi_from_star(const Vector7<Scalar>& u, const Vector7<Scalar>& v, const Vector7<Scalar>& w) {
  static const Form<Scalar> s = star_phi0<Scalar>();
  Vector7<Scalar> out;
  for (int i = 1; i <= 7; ++i) out(i - 1) = evaluate(s, columns<Scalar>({u, v, w, basis_vector<Scalar>(i)}));
  return out;
}

/// Exact determinant by fraction-free elimination on a copy.
template <typename Scalar>
Scalar determinant(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m) {
  const Eigen::Index n = m.rows();
  Scalar det(1);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    while (p < n && m(p, k) == Scalar(0)) ++p;
    if (p == n) return Scalar(0);
    if (p != k) {
      m.row(p).swap(m.row(k));
      det = -det;
    }
    det *= m(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Scalar f = m(i, k) / m(k, k);
      m.row(i) -= f * m.row(k);
    }
  }
  return det;
}

/// |v_1 ^ ... ^ v_k|^2 = det of the Gram matrix.
template <typename Scalar>
Scalar gram_determinant(const PlaneBasis<Scalar>& b) {
  return determinant<Scalar>(b.transpose() * b);
}

struct CalibrationTerms {
  Rational phi_squared;
  Rational chi_squared;
  Rational volume_squared;
  bool holds() const { return phi_squared + chi_squared == volume_squared; }
};

/// phi(u,v,w)^2 + |chi(u,v,w)|^2 = |u ^ v ^ w|^2, exactly.
CalibrationTerms calibration_identity_check(const Vector7<Rational>& u, const Vector7<Rational>& v,
                                            const Vector7<Rational>& w);

class RankDeficientError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class PlaneKind { AssociativePositive, AssociativeNegative, HarveyLawson, Generic };
std::string to_string(PlaneKind k);

struct PlaneClass {
  PlaneKind kind = PlaneKind::Generic;
  /// phi(b)^2 / det Gram(b), the square of Phi.
  Rational phi_squared;
};

PlaneClass classify_plane3(const PlaneBasis<Rational>& plane);
bool coassociative_check(const PlaneBasis<Rational>& plane);
/// Orthogonal complement with an exact rational basis.
PlaneBasis<Rational> perp(const PlaneBasis<Rational>& plane);
std::size_t rank_of(const PlaneBasis<Rational>& plane);
/// Whether two bases span the same subspace.
bool same_span(const PlaneBasis<Rational>& a, const PlaneBasis<Rational>& b);

/// Comma-separated vectors; each is a basis name such as e4 or seven rationals separated by spaces
/// inside brackets, e.g. "e1,e2,[1 0 0 1/2 0 0 0]".
PlaneBasis<Rational> parse_plane(const std::string& text);

/// [i_u(phi) ^ i_v(phi) ^ phi] / 6 as a multiple of e1..e7.
Rational metric_from_phi(const Form<Rational>& phi, const Vector7<Rational>& u, const Vector7<Rational>& v);

struct FlowOptions {
  double step = 1e-2;
  double tol = 1e-9;
  std::size_t max_iterations = 100000;
  /// +1 ascends to the associative planes, -1 descends to the reversed ones.
  int direction = 1;
};

struct FlowResult {
  Eigen::Matrix<double, 7, 3> frame;
  double phi = 0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

class FlowDidNotConverge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Phi on an oriented orthonormal frame.
double phi_value(const Eigen::Matrix<double, 7, 3>& frame);
Eigen::Matrix<double, 7, 3> orthonormalize(const Eigen::Matrix<double, 7, 3>& frame);
/// Projected gradient flow of Phi with backtracking, so the trace is monotone.
FlowResult flow_to_critical(const Eigen::Matrix<double, 7, 3>& start, const FlowOptions& options = {});
Eigen::Matrix<double, 7, 3> random_frame(std::mt19937_64& rng);
/// Continued-fraction rounding of each entry to denominator at most max_den.
PlaneBasis<Rational> rationalize(const Eigen::Matrix<double, 7, Eigen::Dynamic>& m, long max_den = 1000000);

/// An immersed four-manifold admits a Harvey-Lawson pair iff <p1(nu), [X]> differs from +-e[X].
bool hl_pair_criterion(long p1_nu, long euler);

Vector7<Rational> random_rational_vector(std::mt19937_64& rng, int max_num = 9, int max_den = 9);

}  // namespace g2topo

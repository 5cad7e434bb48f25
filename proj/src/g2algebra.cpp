#include <g2topo/g2algebra.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace g2topo {

std::uint8_t index_mask(const std::string& digits) {
  std::uint8_t m = 0;
  for (char ch : digits) {
    if (ch < '1' || ch > '7') throw std::invalid_argument("form index out of range in " + digits);
    const auto bit = static_cast<std::uint8_t>(1u << (ch - '1'));
    if (m & bit) throw std::invalid_argument("repeated form index in " + digits);
    m |= bit;
  }
  return m;
}

std::string mask_digits(std::uint8_t mask) {
  std::string s;
  for (int i = 0; i < 7; ++i)
    if (mask >> i & 1) s += static_cast<char>('1' + i);
  return s;
}

int wedge_sign(std::uint8_t a, std::uint8_t b) {
  if (a & b) return 0;
  int inversions = 0;
  for (int i = 0; i < 7; ++i)
    if (b >> i & 1)
      for (int j = i + 1; j < 7; ++j)
        if (a >> j & 1) ++inversions;
  return inversions % 2 ? -1 : 1;
}

CalibrationTerms calibration_identity_check(const Vector7<Rational>& u, const Vector7<Rational>& v,
                                            const Vector7<Rational>& w) {
  const Rational p = phi<Rational>(u, v, w);
  CalibrationTerms t;
  t.phi_squared = p * p;
  t.chi_squared = chi<Rational>(u, v, w).squaredNorm();
  t.volume_squared = gram_determinant<Rational>(columns<Rational>({u, v, w}));
  return t;
}

std::string to_string(PlaneKind k) {
  switch (k) {
    case PlaneKind::AssociativePositive:
      return "ASS+";
    case PlaneKind::AssociativeNegative:
      return "ASS-";
    case PlaneKind::HarveyLawson:
      return "HL";
    default:
      return "generic";
  }
}

namespace {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

/// Reduced row echelon form in place; returns pivot columns.
std::vector<Eigen::Index> rref(RationalMatrix& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    m.row(p).swap(m.row(row));
    const Rational lead = m(row, col);
    m.row(row) /= lead;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      m.row(i) -= f * m.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

void require_rank(const PlaneBasis<Rational>& plane, Eigen::Index k) {
  if (plane.cols() != k) throw std::invalid_argument("expected " + std::to_string(k) + " spanning vectors");
  if (static_cast<Eigen::Index>(rank_of(plane)) != k) throw RankDeficientError("spanning vectors are dependent");
}

Rational parse_rational(const std::string& s) {
  try {
    Rational q(s);
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    return q;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad rational " + s);
  }
}

Vector7<Rational> parse_vector(const std::string& raw) {
  const auto first = raw.find_first_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("empty vector");
  std::string s = raw.substr(first, raw.find_last_not_of(" \t") - first + 1);
  bool negate = false;
  if (!s.empty() && s[0] == '-' && s.size() > 1 && s[1] == 'e') {
    negate = true;
    s.erase(0, 1);
  }
  if (s.size() == 2 && s[0] == 'e' && s[1] >= '1' && s[1] <= '7') {
    Vector7<Rational> v = basis_vector<Rational>(s[1] - '0');
    return negate ? Vector7<Rational>(-v) : v;
  }
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') {
    std::string body = s.substr(1, s.size() - 2);
    for (char& c : body)
      if (c == ';') c = ' ';
    std::istringstream is(body);
    std::vector<Rational> xs;
    for (std::string tok; is >> tok;) xs.push_back(parse_rational(tok));
    if (xs.size() != 7) throw std::invalid_argument("vector needs 7 entries: " + raw);
    Vector7<Rational> v;
    for (int i = 0; i < 7; ++i) v(i) = xs[static_cast<std::size_t>(i)];
    return v;
  }
  throw std::invalid_argument("cannot read vector " + raw);
}

}  // namespace

std::size_t rank_of(const PlaneBasis<Rational>& plane) {
  RationalMatrix m = plane.transpose();
  return rref(m).size();
}

bool same_span(const PlaneBasis<Rational>& a, const PlaneBasis<Rational>& b) {
  PlaneBasis<Rational> both(7, a.cols() + b.cols());
  both << a, b;
  const auto r = rank_of(both);
  return r == rank_of(a) && r == rank_of(b);
}

PlaneClass classify_plane3(const PlaneBasis<Rational>& plane) {
  require_rank(plane, 3);
  const Vector7<Rational> u = plane.col(0), v = plane.col(1), w = plane.col(2);
  const Rational p = phi<Rational>(u, v, w);
  PlaneClass out;
  out.phi_squared = p * p / gram_determinant<Rational>(plane);
  if (chi<Rational>(u, v, w).isZero())
    out.kind = p > 0 ? PlaneKind::AssociativePositive : PlaneKind::AssociativeNegative;
  else if (p == 0)
    out.kind = PlaneKind::HarveyLawson;
  return out;
}

bool coassociative_check(const PlaneBasis<Rational>& plane) {
  require_rank(plane, 4);
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<Vector7<Rational>> vs;
    for (int i = 0; i < 4; ++i)
      if (i != skip) vs.push_back(plane.col(i));
    if (phi<Rational>(vs[0], vs[1], vs[2]) != 0) return false;
  }
  return true;
}

PlaneBasis<Rational> perp(const PlaneBasis<Rational>& plane) {
  if (static_cast<Eigen::Index>(rank_of(plane)) != plane.cols()) throw RankDeficientError("spanning vectors are dependent");
  RationalMatrix m = plane.transpose();
  const auto pivots = rref(m);
  std::vector<Eigen::Index> free;
  for (Eigen::Index c = 0; c < 7; ++c)
    if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free.push_back(c);
  PlaneBasis<Rational> out = PlaneBasis<Rational>::Zero(7, static_cast<Eigen::Index>(free.size()));
  for (std::size_t j = 0; j < free.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    out(free[j], col) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) out(pivots[r], col) = -m(static_cast<Eigen::Index>(r), free[j]);
  }
  return out;
}

PlaneBasis<Rational> parse_plane(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  PlaneBasis<Rational> out(7, static_cast<Eigen::Index>(parts.size()));
  for (std::size_t j = 0; j < parts.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = parse_vector(parts[j]);
  return out;
}

Rational metric_from_phi(const Form<Rational>& phi, const Vector7<Rational>& u, const Vector7<Rational>& v) {
  const Form<Rational> top = wedge(wedge(interior(u, phi), interior(v, phi)), phi);
  const auto it = top.terms.find(0x7f);
  return it == top.terms.end() ? Rational(0) : Rational(it->second / 6);
}

double phi_value(const Eigen::Matrix<double, 7, 3>& frame) {
  return phi<double>(frame.col(0), frame.col(1), frame.col(2));
}

Eigen::Matrix<double, 7, 3> orthonormalize(const Eigen::Matrix<double, 7, 3>& frame) {
  Eigen::Matrix<double, 7, 3> q = frame;
  for (int j = 0; j < 3; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    const double n = q.col(j).norm();
    if (n < 1e-12) throw std::invalid_argument("frame is degenerate");
    q.col(j) /= n;
  }
  return q;
}

FlowResult flow_to_critical(const Eigen::Matrix<double, 7, 3>& start, const FlowOptions& options) {
  if (options.direction != 1 && options.direction != -1) throw std::invalid_argument("direction must be +1 or -1");
  const double sign = options.direction;
  FlowResult r;
  r.frame = orthonormalize(start);
  r.phi = phi_value(r.frame);
  r.trace.push_back(r.phi);
  while (1 - sign * r.phi > options.tol) {
    if (r.iterations >= options.max_iterations) return r;
    const auto& b = r.frame;
    Eigen::Matrix<double, 7, 3> g;
    g.col(0) = cross<double>(b.col(1), b.col(2));
    g.col(1) = cross<double>(b.col(2), b.col(0));
    g.col(2) = cross<double>(b.col(0), b.col(1));
    g -= b * (b.transpose() * g);
    if (g.norm() < 1e-15) return r;
    double h = options.step;
    bool moved = false;
    for (int tries = 0; tries < 60 && !moved; ++tries, h /= 2) {
      const Eigen::Matrix<double, 7, 3> next = orthonormalize(b + sign * h * g);
      const double value = phi_value(next);
      if (sign * value > sign * r.phi) {
        r.frame = next;
        r.phi = value;
        moved = true;
      }
    }
    if (!moved) return r;
    ++r.iterations;
    r.trace.push_back(r.phi);
  }
  r.converged = true;
  return r;
}

Eigen::Matrix<double, 7, 3> random_frame(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    Eigen::Matrix<double, 7, 3> m;
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = n(rng);
    try {
      return orthonormalize(m);
    } catch (const std::invalid_argument&) {
    }
  }
}

PlaneBasis<Rational> rationalize(const Eigen::Matrix<double, 7, Eigen::Dynamic>& m, long max_den) {
  PlaneBasis<Rational> out(7, m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    double x = m(i);
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int k = 0; k < 64; ++k) {
      const double a = std::floor(x);
      const BigInt ai(a);
      const BigInt q2 = ai * q1 + q0;
      if (q2 > max_den) break;
      const BigInt p2 = ai * p1 + p0;
      p0 = p1;
      q0 = q1;
      p1 = p2;
      q1 = q2;
      const double frac = x - a;
      if (frac < 1e-15) break;
      x = 1 / frac;
    }
    out(i) = Rational(p1, q1);
    out(i).canonicalize();
  }
  return out;
}

bool hl_pair_criterion(long p1_nu, long euler) { return p1_nu != euler && p1_nu != -euler; }

Vector7<Rational> random_rational_vector(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  Vector7<Rational> v;
  for (int i = 0; i < 7; ++i) {
    v(i) = Rational(num(rng), den(rng));
    v(i).canonicalize();
  }
  return v;
}

}  // namespace g2topo

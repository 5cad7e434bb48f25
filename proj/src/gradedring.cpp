#include <g2topo/gradedring.hpp>

#include <cctype>
#include <algorithm>
#include <set>
#include <sstream>

namespace g2topo {

BigInt characteristic(Coefficients c) {
  switch (c) {
    case Coefficients::Z2:
      return 2;
    case Coefficients::Z3:
      return 3;
    default:
      return 0;
  }
}

Coefficients coefficients_from_string(const std::string& s) {
  if (s == "Z") return Coefficients::Z;
  if (s == "Z2") return Coefficients::Z2;
  if (s == "Z3") return Coefficients::Z3;
  throw std::invalid_argument("unknown coefficient ring " + s);
}

std::string to_string(Coefficients c) {
  switch (c) {
    case Coefficients::Z2:
      return "Z2";
    case Coefficients::Z3:
      return "Z3";
    default:
      return "Z";
  }
}

void Polynomial::add(const Monomial& m, const BigInt& c) {
  if (c == 0) return;
  auto [it, fresh] = terms.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

int commutation_sign(const std::vector<Generator>& gens, const Monomial& a, const Monomial& b) {
  long swaps = 0;
  long odd_after = 0;
  for (std::size_t i = gens.size(); i-- > 0;) {
    if (gens[i].degree % 2 != 0) {
      swaps += static_cast<long>(b[i]) * odd_after;
      odd_after += a[i];
    }
  }
  return swaps % 2 ? -1 : 1;
}

Polynomial multiply(const std::vector<Generator>& gens, const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Monomial m(gens.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add(m, commutation_sign(gens, ma, mb) * ca * cb);
    }
  return out;
}

namespace {

int monomial_degree(const std::vector<Generator>& gens, const Monomial& m) {
  int d = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) d += m[i] * gens[i].degree;
  return d;
}

Polynomial constant(std::size_t n, const BigInt& c) {
  Polynomial p;
  p.add(Monomial(n, 0), c);
  return p;
}

Polynomial variable(std::size_t n, std::size_t i) {
  Monomial m(n, 0);
  m[i] = 1;
  Polynomial p;
  p.add(m, 1);
  return p;
}

Polynomial scaled(Polynomial p, const BigInt& c) {
  Polynomial out;
  for (const auto& [m, v] : p.terms) out.add(m, v * c);
  return out;
}

Polynomial sum(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  for (const auto& [m, v] : b.terms) out.add(m, v);
  return out;
}

Polynomial power(const std::vector<Generator>& gens, const Polynomial& p, long e) {
  Polynomial out = constant(gens.size(), 1);
  for (long i = 0; i < e; ++i) out = multiply(gens, out, p);
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<Generator>& gens) : s_(text), gens_(gens) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw PolynomialParseError("polynomial \"" + s_ + "\" at " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return s_.substr(start, pos_ - start);
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat('+'))
        p = sum(p, term());
      else if (eat('-'))
        p = sum(p, scaled(term(), -1));
      else
        return p;
    }
  }

  Polynomial term() {
    if (eat('-')) return scaled(term(), -1);
    Polynomial p = factor();
    while (eat('*')) p = multiply(gens_, p, factor());
    return p;
  }

  Polynomial factor() {
    Polynomial p = primary();
    if (eat('^')) p = power(gens_, p, std::stol(integer()));
    return p;
  }

  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return constant(gens_.size(), BigInt(integer()));
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return variable(gens_.size(), i);
      fail("unknown generator " + name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  const std::vector<Generator>& gens_;
  std::size_t pos_ = 0;
};

void monomials_of_degree(const std::vector<Generator>& gens, int degree, std::size_t i, Monomial& cur,
                         std::vector<Monomial>& out) {
  if (i == gens.size()) {
    if (degree == 0) out.push_back(cur);
    return;
  }
  for (int e = 0; e * gens[i].degree <= degree; ++e) {
    cur[i] = e;
    monomials_of_degree(gens, degree - e * gens[i].degree, i + 1, cur, out);
  }
  cur[i] = 0;
}

std::vector<Monomial> monomials_of_degree(const std::vector<Generator>& gens, int degree) {
  std::vector<Monomial> out;
  Monomial cur(gens.size(), 0);
  monomials_of_degree(gens, degree, 0, cur, out);
  return out;
}

/// Coordinates are monomials of one degree; columns span the relations in that degree.
struct DegreePiece {
  std::vector<Monomial> basis;
  IntegerMatrix relations;

  IntegerVector vector_of(const Polynomial& p) const {
    IntegerVector v = IntegerVector::Zero(static_cast<Eigen::Index>(basis.size()));
    for (const auto& [m, c] : p.terms) {
      const auto it = std::lower_bound(basis.begin(), basis.end(), m);
      if (it == basis.end() || *it != m) throw std::logic_error("monomial outside the degree basis");
      v(it - basis.begin()) = c;
    }
    return v;
  }
};

DegreePiece degree_piece(const Summand& s, int degree) {
  DegreePiece piece;
  piece.basis = monomials_of_degree(s.gens, degree);
  std::sort(piece.basis.begin(), piece.basis.end());
  std::vector<IntegerVector> cols;
  const BigInt p = characteristic(s.coeff);
  const auto n = static_cast<Eigen::Index>(piece.basis.size());

  for (const Polynomial& rel : s.rels) {
    const int d = homogeneous_degree(s.gens, rel);
    if (d < 0 || d > degree) continue;
    for (const Monomial& m : monomials_of_degree(s.gens, degree - d)) {
      Polynomial mp;
      mp.add(m, 1);
      cols.push_back(piece.vector_of(multiply(s.gens, mp, rel)));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Monomial& m = piece.basis[static_cast<std::size_t>(i)];
    bool odd_square = false;
    for (std::size_t g = 0; g < s.gens.size(); ++g)
      if (s.gens[g].degree % 2 != 0 && m[g] >= 2) odd_square = true;
    if (odd_square && p != 2) {
      IntegerVector v = IntegerVector::Zero(n);
      v(i) = 2;
      cols.push_back(v);
    }
    if (p != 0) {
      IntegerVector v = IntegerVector::Zero(n);
      v(i) = p;
      cols.push_back(v);
    }
  }
  piece.relations = IntegerMatrix::Zero(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) piece.relations.col(static_cast<Eigen::Index>(j)) = cols[j];
  return piece;
}

std::vector<Generator> generators_of(const json& gens) {
  std::vector<Generator> out;
  for (const auto& g : gens) {
    Generator x{g.at(0).get<std::string>(), g.at(1).get<int>()};
    if (x.degree <= 0) throw std::invalid_argument("generator " + x.name + " needs a positive degree");
    out.push_back(x);
  }
  return out;
}

/// Splits a polynomial over all target generators into per-summand polynomials over local indices.
std::vector<Polynomial> split(const RingPresentation& r, const Polynomial& p) {
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (const Summand& s : r.summands) {
    offset.push_back(total);
    total += s.gens.size();
  }
  std::vector<Polynomial> out(r.summands.size());
  for (const auto& [m, c] : p.terms) {
    int owner = -1;
    bool mixed = false;
    for (std::size_t k = 0; k < r.summands.size(); ++k)
      for (std::size_t i = 0; i < r.summands[k].gens.size(); ++i)
        if (m[offset[k] + i] != 0) {
          if (owner >= 0 && owner != static_cast<int>(k)) mixed = true;
          owner = static_cast<int>(k);
        }
    if (mixed) continue;
    if (owner < 0) owner = 0;
    const Summand& s = r.summands[static_cast<std::size_t>(owner)];
    Monomial local(m.begin() + static_cast<long>(offset[static_cast<std::size_t>(owner)]),
                   m.begin() + static_cast<long>(offset[static_cast<std::size_t>(owner)] + s.gens.size()));
    out[static_cast<std::size_t>(owner)].add(local, c);
  }
  return out;
}

bool vanishes_in(const RingPresentation& r, const Polynomial& p) {
  const auto parts = split(r, p);
  for (std::size_t k = 0; k < parts.size(); ++k)
    if (!vanishes(r.summands[k], parts[k])) return false;
  return true;
}

}  // namespace

int homogeneous_degree(const std::vector<Generator>& gens, const Polynomial& p) {
  int d = -1;
  for (const auto& [m, c] : p.terms) {
    const int e = monomial_degree(gens, m);
    if (d >= 0 && e != d) throw NonHomogeneousError("non-homogeneous polynomial " + to_string(p, gens));
    d = e;
  }
  return d;
}

Polynomial parse_polynomial(const std::string& text, const std::vector<Generator>& gens) {
  return Parser(text, gens).parse();
}

std::string to_string(const Polynomial& p, const std::vector<Generator>& gens) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string body;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (m[i] == 0) continue;
      if (!body.empty()) body += "*";
      body += gens[i].name;
      if (m[i] > 1) body += "^" + std::to_string(m[i]);
    }
    const BigInt mag = abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    if (body.empty())
      os << mag.get_str();
    else if (mag == 1)
      os << body;
    else
      os << mag.get_str() << "*" << body;
    first = false;
  }
  return os.str();
}

std::vector<Generator> RingPresentation::generators() const {
  std::vector<Generator> out;
  for (const Summand& s : summands) out.insert(out.end(), s.gens.begin(), s.gens.end());
  return out;
}

int RingPresentation::summand_of(const std::string& name) const {
  for (std::size_t k = 0; k < summands.size(); ++k)
    for (const Generator& g : summands[k].gens)
      if (g.name == name) return static_cast<int>(k);
  return -1;
}

Summand summand_from_json(const json& j) {
  Summand s;
  s.coeff = coefficients_from_string(j.value("coeff", "Z"));
  s.gens = generators_of(j.at("gens"));
  for (const auto& r : j.value("rels", json::array())) {
    const auto text = r.get<std::string>();
    Polynomial p = parse_polynomial(text, s.gens);
    homogeneous_degree(s.gens, p);
    s.rels.push_back(std::move(p));
    s.rel_text.push_back(text);
  }
  return s;
}

RingPresentation presentation_from_json(const json& j) {
  RingPresentation r;
  if (j.contains("summands"))
    for (const auto& s : j.at("summands")) r.summands.push_back(summand_from_json(s));
  else
    r.summands.push_back(summand_from_json(j));
  if (r.summands.empty()) throw std::invalid_argument("presentation without summands");
  std::set<std::string> seen;
  for (const Generator& g : r.generators())
    if (!seen.insert(g.name).second) throw std::invalid_argument("duplicate generator " + g.name);
  return r;
}

json to_json(const RingPresentation& r) {
  json out = json::array();
  for (const Summand& s : r.summands) {
    json gens = json::array();
    for (const Generator& g : s.gens) gens.push_back({g.name, g.degree});
    json rels = json::array();
    for (const Polynomial& p : s.rels) rels.push_back(to_string(p, s.gens));
    out.push_back({{"coeff", to_string(s.coeff)}, {"gens", gens}, {"rels", rels}});
  }
  return {{"summands", out}};
}

std::vector<long> GradedDimensionTable::ranks() const {
  std::vector<long> out;
  for (const FGAbelianGroup& g : groups)
    out.push_back(coeff == Coefficients::Z ? static_cast<long>(g.rank()) : static_cast<long>(g.torsion().size()));
  return out;
}

GradedDimensionTable graded_dimensions(const Summand& s, int cutoff, bool include_unit) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
  GradedDimensionTable t;
  t.coeff = s.coeff;
  for (int n = 0; n <= cutoff; ++n) {
    if (n == 0 && !include_unit) {
      t.groups.emplace_back();
      continue;
    }
    const DegreePiece piece = degree_piece(s, n);
    if (piece.basis.empty()) {
      t.groups.emplace_back();
      continue;
    }
    const auto dim = static_cast<Eigen::Index>(piece.basis.size());
    t.groups.push_back(Subquotient(IntegerMatrix::Identity(dim, dim), piece.relations).group());
  }
  return t;
}

GradedDimensionTable graded_dimensions(const RingPresentation& r, int cutoff) {
  GradedDimensionTable t;
  t.coeff = r.summands.front().coeff;
  t.groups.assign(static_cast<std::size_t>(std::max(cutoff, -1) + 1), FGAbelianGroup());
  for (std::size_t k = 0; k < r.summands.size(); ++k) {
    const GradedDimensionTable part = graded_dimensions(r.summands[k], cutoff, k == 0);
    for (std::size_t n = 0; n < t.groups.size(); ++n) t.groups[n] = direct_sum(t.groups[n], part.groups[n]);
  }
  return t;
}

std::vector<long> series_product(const std::vector<long>& a, const std::vector<long>& b, int cutoff) {
  std::vector<long> out(static_cast<std::size_t>(cutoff + 1), 0);
  for (std::size_t i = 0; i < a.size() && i < out.size(); ++i)
    for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<long> polynomial_series(const std::vector<int>& degrees, int cutoff) {
  std::vector<long> out(static_cast<std::size_t>(cutoff + 1), 0);
  out[0] = 1;
  for (int d : degrees)
    for (std::size_t n = static_cast<std::size_t>(d); n < out.size(); ++n) out[n] += out[n - static_cast<std::size_t>(d)];
  return out;
}

bool vanishes(const Summand& s, const Polynomial& p) {
  if (p.is_zero()) return true;
  std::map<int, Polynomial> by_degree;
  for (const auto& [m, c] : p.terms) by_degree[monomial_degree(s.gens, m)].add(m, c);
  for (const auto& [d, q] : by_degree) {
    const DegreePiece piece = degree_piece(s, d);
    if (!in_lattice(piece.relations, piece.vector_of(q))) return false;
  }
  return true;
}

HomCheck check_ring_hom(const RingPresentation& source, const RingPresentation& target,
                        const std::map<std::string, std::string>& images,
                        const std::vector<std::pair<std::string, std::string>>& required) {
  const std::vector<Generator> src = source.generators();
  const std::vector<Generator> dst = target.generators();

  std::vector<Polynomial> image;
  for (const Generator& g : src) {
    const auto it = images.find(g.name);
    if (it == images.end()) throw std::invalid_argument("no image for generator " + g.name);
    Polynomial p = parse_polynomial(it->second, dst);
    const int d = homogeneous_degree(dst, p);
    if (d >= 0 && d != g.degree)
      throw DegreeMismatchError(g.name + " has degree " + std::to_string(g.degree) + " but its image " +
                                it->second + " has degree " + std::to_string(d));
    image.push_back(std::move(p));
  }
  for (const auto& [name, _] : images)
    if (source.summand_of(name) < 0) throw std::invalid_argument("image given for unknown generator " + name);

  const auto apply = [&](const Polynomial& p) {
    Polynomial out;
    for (const auto& [m, c] : p.terms) {
      Polynomial term = constant(dst.size(), c);
      for (std::size_t i = 0; i < src.size(); ++i) term = multiply(dst, term, power(dst, image[i], m[i]));
      out = sum(out, term);
    }
    return out;
  };

  HomCheck result;
  std::size_t offset = 0;
  for (const Summand& s : source.summands) {
    for (std::size_t r = 0; r < s.rels.size(); ++r) {
      Polynomial global;
      for (const auto& [m, c] : s.rels[r].terms) {
        Monomial g(src.size(), 0);
        std::copy(m.begin(), m.end(), g.begin() + static_cast<long>(offset));
        global.add(g, c);
      }
      const Polynomial mapped = apply(global);
      if (!vanishes_in(target, mapped))
        result.failures.push_back("relation " + s.rel_text[r] + " maps to " + to_string(mapped, dst));
    }
    offset += s.gens.size();
  }
  for (const auto& [lhs, rhs] : required) {
    const Polynomial mapped = apply(parse_polynomial(lhs, src));
    const Polynomial want = parse_polynomial(rhs, dst);
    if (!vanishes_in(target, sum(mapped, scaled(want, -1))))
      result.failures.push_back(lhs + " maps to " + to_string(mapped, dst) + ", not " + rhs);
  }
  result.pass = result.failures.empty();
  return result;
}

}  // namespace g2topo

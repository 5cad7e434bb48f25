#include <g2topo/abelian.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

namespace g2topo {

FGAbelianGroup::FGAbelianGroup(std::size_t rank, std::vector<BigInt> invariant_factors)
    : rank_(rank), torsion_(std::move(invariant_factors)) {
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    if (torsion_[i] < 2) throw std::invalid_argument("invariant factors must be at least 2");
    if (i > 0 && !divides(torsion_[i - 1], torsion_[i]))
      throw std::invalid_argument("invariant factors must form a divisibility chain");
  }
}

FGAbelianGroup FGAbelianGroup::cyclic(const BigInt& order) {
  if (order < 0) throw std::invalid_argument("cyclic group order must be non-negative");
  if (order == 0) return free(1);
  if (order == 1) return {};
  return FGAbelianGroup(0, {order});
}

FGAbelianGroup FGAbelianGroup::from_cyclic_orders(const std::vector<BigInt>& orders) {
  const auto n = static_cast<Eigen::Index>(orders.size());
  IntegerMatrix rel = IntegerMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) rel(i, i) = abs(orders[static_cast<std::size_t>(i)]);
  return Subquotient(IntegerMatrix::Identity(n, n), rel).group();
}

BigInt FGAbelianGroup::generator_order(std::size_t i) const {
  if (i < rank_) return 0;
  return torsion_.at(i - rank_);
}

BigInt FGAbelianGroup::order() const {
  if (rank_ > 0) throw std::logic_error("order of an infinite group");
  BigInt o = 1;
  for (const auto& d : torsion_) o *= d;
  return o;
}

BigInt FGAbelianGroup::exponent() const { return torsion_.empty() ? BigInt(1) : torsion_.back(); }

IntegerMatrix FGAbelianGroup::relations() const {
  const auto n = static_cast<Eigen::Index>(num_generators());
  const auto t = static_cast<Eigen::Index>(torsion_.size());
  IntegerMatrix r = IntegerMatrix::Zero(n, t);
  for (Eigen::Index i = 0; i < t; ++i)
    r(static_cast<Eigen::Index>(rank_) + i, i) = torsion_[static_cast<std::size_t>(i)];
  return r;
}

IntegerVector FGAbelianGroup::reduce(const IntegerVector& x) const {
  IntegerVector y = x;
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(rank_ + i);
    y(k) = mod_floor(y(k), torsion_[i]);
  }
  return y;
}

bool FGAbelianGroup::is_zero_element(const IntegerVector& x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const BigInt d = generator_order(static_cast<std::size_t>(i));
    if (d == 0 ? x(i) != 0 : !divides(d, x(i))) return false;
  }
  return true;
}

std::string FGAbelianGroup::to_string() const {
  if (is_zero()) return "0";
  std::vector<std::string> parts;
  if (rank_ == 1) parts.emplace_back("Z");
  if (rank_ > 1) parts.push_back("Z^" + std::to_string(rank_));
  for (std::size_t i = 0; i < torsion_.size();) {
    std::size_t j = i;
    while (j < torsion_.size() && torsion_[j] == torsion_[i]) ++j;
    std::string s = "Z" + torsion_[i].get_str();
    if (j - i > 1) s += "^" + std::to_string(j - i);
    parts.push_back(s);
    i = j;
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
  return out;
}

std::strong_ordering operator<=>(const FGAbelianGroup& a, const FGAbelianGroup& b) {
  if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
  const std::size_t n = std::min(a.torsion_.size(), b.torsion_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = cmp(a.torsion_[i], b.torsion_[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.torsion_.size() <=> b.torsion_.size();
}

std::ostream& operator<<(std::ostream& os, const FGAbelianGroup& g) { return os << g.to_string(); }

FGAbelianGroup direct_sum(const FGAbelianGroup& a, const FGAbelianGroup& b) {
  std::vector<BigInt> orders(a.torsion());
  orders.insert(orders.end(), b.torsion().begin(), b.torsion().end());
  for (std::size_t i = 0; i < a.rank() + b.rank(); ++i) orders.emplace_back(0);
  return FGAbelianGroup::from_cyclic_orders(orders);
}

FGAbelianGroup direct_sum(const std::vector<FGAbelianGroup>& groups) {
  std::vector<BigInt> orders;
  for (const auto& g : groups) {
    orders.insert(orders.end(), g.torsion().begin(), g.torsion().end());
    for (std::size_t i = 0; i < g.rank(); ++i) orders.emplace_back(0);
  }
  return FGAbelianGroup::from_cyclic_orders(orders);
}

FGAbelianGroup power(const FGAbelianGroup& g, std::size_t n) {
  return direct_sum(std::vector<FGAbelianGroup>(n, g));
}

FGAbelianGroup tensor(const FGAbelianGroup& a, const FGAbelianGroup& b) {
  std::vector<BigInt> orders;
  for (std::size_t i = 0; i < a.rank() * b.rank(); ++i) orders.emplace_back(0);
  for (std::size_t i = 0; i < a.rank(); ++i) orders.insert(orders.end(), b.torsion().begin(), b.torsion().end());
  for (std::size_t i = 0; i < b.rank(); ++i) orders.insert(orders.end(), a.torsion().begin(), a.torsion().end());
  for (const auto& x : a.torsion())
    for (const auto& y : b.torsion()) orders.push_back(gcd(x, y));
  return FGAbelianGroup::from_cyclic_orders(orders);
}

FGAbelianGroup tor(const FGAbelianGroup& a, const FGAbelianGroup& b) {
  std::vector<BigInt> orders;
  for (const auto& x : a.torsion())
    for (const auto& y : b.torsion()) orders.push_back(gcd(x, y));
  return FGAbelianGroup::from_cyclic_orders(orders);
}

BigInt hom_count(const FGAbelianGroup& a, const FGAbelianGroup& b) {
  if (!a.is_finite() || !b.is_finite()) throw std::invalid_argument("hom_count needs finite groups");
  BigInt n = 1;
  for (const auto& x : a.torsion())
    for (const auto& y : b.torsion()) n *= gcd(x, y);
  return n;
}

// ---------------------------------------------------------------------------
// Lattices

IntegerMatrix hcat(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row mismatch");
  IntegerMatrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

IntegerMatrix integer_kernel(const IntegerMatrix& m) {
  const auto snf = smith_normal_form(m);
  return snf.V.rightCols(m.cols() - snf.rank);
}

namespace {

bool in_snf_lattice(const SmithDecomposition<BigInt>& snf, const IntegerVector& x) {
  const IntegerVector y = snf.U * x;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (i < snf.rank) {
      if (!divides(snf.S(i, i), y(i))) return false;
    } else if (y(i) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool in_lattice(const IntegerMatrix& m, const IntegerVector& x) {
  return in_snf_lattice(smith_normal_form(m), x);
}

bool same_lattice(const IntegerMatrix& a, const IntegerMatrix& b) {
  const auto sa = smith_normal_form(a);
  const auto sb = smith_normal_form(b);
  if (sa.rank != sb.rank) return false;
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    if (!in_snf_lattice(sa, b.col(j))) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (!in_snf_lattice(sb, a.col(j))) return false;
  return true;
}

Subquotient::Subquotient(const IntegerMatrix& numerator, const IntegerMatrix& denominator) {
  if (numerator.rows() != denominator.rows()) throw std::invalid_argument("subquotient: ambient mismatch");
  const Eigen::Index n = numerator.rows();
  const auto snf = smith_normal_form(numerator);
  const Eigen::Index ell = snf.rank;
  basis_transform_ = snf.U;
  basis_scale_ = snf.invariant_factors();

  IntegerMatrix basis(n, ell);
  for (Eigen::Index i = 0; i < ell; ++i) basis.col(i) = snf.U_inv.col(i) * snf.S(i, i);

  IntegerMatrix y(ell, denominator.cols());
  for (Eigen::Index j = 0; j < denominator.cols(); ++j) {
    const IntegerVector u = snf.U * denominator.col(j);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i < ell) {
        if (!divides(snf.S(i, i), u(i))) throw std::invalid_argument("subquotient: denominator not contained");
        y(i, j) = u(i) / snf.S(i, i);
      } else if (u(i) != 0) {
        throw std::invalid_argument("subquotient: denominator not contained");
      }
    }
  }

  const auto q = smith_normal_form(y);
  std::vector<Eigen::Index> free_idx, tors_idx;
  std::vector<BigInt> factors;
  for (Eigen::Index i = 0; i < ell; ++i) {
    if (i >= q.rank) {
      free_idx.push_back(i);
    } else if (q.S(i, i) > 1) {
      tors_idx.push_back(i);
      factors.push_back(q.S(i, i));
    }
  }
  group_ = FGAbelianGroup(free_idx.size(), factors);

  std::vector<Eigen::Index> order(free_idx);
  order.insert(order.end(), tors_idx.begin(), tors_idx.end());
  const auto k = static_cast<Eigen::Index>(order.size());
  to_canonical_.resize(k, ell);
  IntegerMatrix gens_y(ell, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    to_canonical_.row(c) = q.U.row(order[static_cast<std::size_t>(c)]);
    gens_y.col(c) = q.U_inv.col(order[static_cast<std::size_t>(c)]);
  }
  embedding_ = basis * gens_y;
}

bool Subquotient::contains(const IntegerVector& x) const {
  const IntegerVector u = basis_transform_ * x;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (i < static_cast<Eigen::Index>(basis_scale_.size())) {
      if (!divides(basis_scale_[static_cast<std::size_t>(i)], u(i))) return false;
    } else if (u(i) != 0) {
      return false;
    }
  }
  return true;
}

IntegerVector Subquotient::coordinates(const IntegerVector& x) const {
  if (!contains(x)) throw std::invalid_argument("vector outside the numerator lattice");
  const IntegerVector u = basis_transform_ * x;
  const auto ell = static_cast<Eigen::Index>(basis_scale_.size());
  IntegerVector y(ell);
  for (Eigen::Index i = 0; i < ell; ++i) y(i) = u(i) / basis_scale_[static_cast<std::size_t>(i)];
  return group_.reduce(to_canonical_ * y);
}

IntegerMatrix Subquotient::coordinates(const IntegerMatrix& xs) const {
  IntegerMatrix out(static_cast<Eigen::Index>(group_.num_generators()), xs.cols());
  for (Eigen::Index j = 0; j < xs.cols(); ++j) out.col(j) = coordinates(IntegerVector(xs.col(j)));
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphisms

GroupHom::GroupHom(FGAbelianGroup domain, FGAbelianGroup codomain, IntegerMatrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != static_cast<Eigen::Index>(codomain_.num_generators()) ||
      matrix_.cols() != static_cast<Eigen::Index>(domain_.num_generators()))
    throw std::invalid_argument("homomorphism matrix shape does not match its groups");
  for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
    matrix_.col(j) = codomain_.reduce(matrix_.col(j));
    const BigInt n = domain_.generator_order(static_cast<std::size_t>(j));
    if (n != 0 && !codomain_.is_zero_element(IntegerVector(matrix_.col(j) * n)))
      throw std::invalid_argument("homomorphism is not well defined on a torsion generator");
  }
}

GroupHom GroupHom::zero(const FGAbelianGroup& domain, const FGAbelianGroup& codomain) {
  return GroupHom(domain, codomain,
                  IntegerMatrix::Zero(static_cast<Eigen::Index>(codomain.num_generators()),
                                      static_cast<Eigen::Index>(domain.num_generators())));
}

GroupHom GroupHom::identity(const FGAbelianGroup& group) {
  const auto n = static_cast<Eigen::Index>(group.num_generators());
  return GroupHom(group, group, IntegerMatrix::Identity(n, n));
}

GroupHom GroupHom::multiplication(const FGAbelianGroup& group, const BigInt& k) {
  const auto n = static_cast<Eigen::Index>(group.num_generators());
  return GroupHom(group, group, IntegerMatrix::Identity(n, n) * k);
}

bool GroupHom::is_zero() const {
  for (Eigen::Index j = 0; j < matrix_.cols(); ++j)
    if (!codomain_.is_zero_element(matrix_.col(j))) return false;
  return true;
}

Subquotient GroupHom::kernel() const {
  const auto na = matrix_.cols();
  const IntegerMatrix null = integer_kernel(hcat(matrix_, codomain_.relations()));
  return Subquotient(null.topRows(na), domain_.relations());
}

Subquotient GroupHom::image() const {
  return Subquotient(hcat(matrix_, codomain_.relations()), codomain_.relations());
}

Subquotient GroupHom::cokernel() const {
  const auto nb = static_cast<Eigen::Index>(codomain_.num_generators());
  return Subquotient(IntegerMatrix::Identity(nb, nb), hcat(matrix_, codomain_.relations()));
}

GroupHom GroupHom::kernel_inclusion() const {
  const Subquotient k = kernel();
  return GroupHom(k.group(), domain_, k.embedding());
}

IntegerVector GroupHom::apply(const IntegerVector& x) const { return codomain_.reduce(matrix_ * x); }

bool operator==(const GroupHom& a, const GroupHom& b) {
  return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.matrix_ == b.matrix_;
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
  if (!(f.codomain() == g.domain())) throw std::invalid_argument("compose: codomain/domain mismatch");
  return GroupHom(f.domain(), g.codomain(), g.matrix() * f.matrix());
}

// ---------------------------------------------------------------------------

FGAbelianGroup homology_at(const IntegerMatrix& d_in, const IntegerMatrix& d_out) {
  if (d_out.cols() != d_in.rows()) throw std::invalid_argument("homology_at: shapes do not compose");
  if (!is_zero(d_out * d_in)) throw MalformedComplexError("boundary composite is nonzero");
  const auto n = static_cast<std::size_t>(d_in.rows());
  const auto s_out = smith_normal_form(d_out);
  const auto s_in = smith_normal_form(d_in);
  std::vector<BigInt> torsion;
  for (const auto& d : s_in.invariant_factors())
    if (d > 1) torsion.push_back(d);
  return FGAbelianGroup(n - static_cast<std::size_t>(s_out.rank + s_in.rank), torsion);
}

std::vector<FGAbelianGroup> uct_cohomology(const std::vector<FGAbelianGroup>& homology) {
  std::vector<FGAbelianGroup> out;
  for (std::size_t n = 0; n < homology.size(); ++n) {
    FGAbelianGroup g = homology[n].free_part();
    if (n > 0) g = direct_sum(g, homology[n - 1].torsion_part());
    out.push_back(g);
  }
  return out;
}

DualityReport poincare_duality_check(const std::vector<FGAbelianGroup>& homology, std::size_t dim,
                                     bool orientable) {
  if (!orientable) throw std::invalid_argument("duality check only covers orientable manifolds");
  auto at = [&](long k) {
    if (k < 0 || static_cast<std::size_t>(k) >= homology.size()) return FGAbelianGroup();
    return homology[static_cast<std::size_t>(k)];
  };
  const long n = static_cast<long>(dim);
  for (long k = 0; k <= n; ++k) {
    if (at(k).rank() != at(n - k).rank()) {
      return {false, static_cast<std::size_t>(k),
              "free part of degree " + std::to_string(k) + " (" + at(k).free_part().to_string() +
                  ") differs from degree " + std::to_string(n - k) + " (" + at(n - k).free_part().to_string() +
                  ")"};
    }
    if (!(at(k).torsion_part() == at(n - k - 1).torsion_part())) {
      return {false, static_cast<std::size_t>(k),
              "torsion of degree " + std::to_string(k) + " (" + at(k).torsion_part().to_string() +
                  ") differs from degree " + std::to_string(n - k - 1) + " (" +
                  at(n - k - 1).torsion_part().to_string() + ")"};
    }
  }
  for (std::size_t k = dim + 1; k < homology.size(); ++k)
    if (!homology[k].is_zero())
      return {false, k, "nonzero group above the manifold dimension in degree " + std::to_string(k)};
  return {};
}

ExactnessReport exact_sequence_check(const std::vector<FGAbelianGroup>& groups,
                                     const std::vector<GroupHom>& maps) {
  if (groups.empty() || maps.size() + 1 != groups.size())
    throw std::invalid_argument("exact sequence needs one map between each pair of nodes");
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (!(maps[i].domain() == groups[i]) || !(maps[i].codomain() == groups[i + 1]))
      throw std::invalid_argument("map " + std::to_string(i) + " does not match its nodes");
  for (std::size_t i = 1; i + 1 < groups.size(); ++i) {
    const IntegerMatrix rel = groups[i].relations();
    const IntegerMatrix im = hcat(maps[i - 1].matrix(), rel);
    const IntegerMatrix null = integer_kernel(hcat(maps[i].matrix(), groups[i + 1].relations()));
    const IntegerMatrix ker = hcat(null.topRows(maps[i].matrix().cols()), rel);
    if (!same_lattice(im, ker)) {
      const Subquotient k = maps[i].kernel();
      const Subquotient m = maps[i - 1].image();
      return {false, i,
              "node " + std::to_string(i) + ": image " + m.group().to_string() + " differs from kernel " +
                  k.group().to_string()};
    }
  }
  return {};
}

namespace {

std::vector<IntegerVector> image_candidates(const BigInt& source_order, const FGAbelianGroup& b,
                                            const BigInt& bound) {
  const auto nb = static_cast<Eigen::Index>(b.num_generators());
  std::vector<std::vector<BigInt>> choices(static_cast<std::size_t>(nb));
  for (Eigen::Index i = 0; i < nb; ++i) {
    auto& c = choices[static_cast<std::size_t>(i)];
    const BigInt e = b.generator_order(static_cast<std::size_t>(i));
    if (e == 0) {
      if (source_order != 0) {
        c.emplace_back(0);
      } else {
        for (BigInt v = -bound; v <= bound; ++v) c.push_back(v);
      }
    } else {
      const BigInt step = source_order == 0 ? BigInt(1) : BigInt(e / gcd(source_order, e));
      for (BigInt v = 0; v < e; v += step) c.push_back(v);
    }
  }
  std::vector<IntegerVector> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(nb), 0);
  while (true) {
    IntegerVector x(nb);
    for (Eigen::Index i = 0; i < nb; ++i) x(i) = choices[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    out.push_back(x);
    Eigen::Index k = nb - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == choices[static_cast<std::size_t>(k)].size()) {
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

bool advance(std::vector<BigInt>& digits, const std::vector<BigInt>& moduli) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    if (++digits[k] < moduli[k]) return true;
    digits[k] = 0;
  }
  return false;
}

}  // namespace

std::vector<GroupHom> enumerate_homs(const FGAbelianGroup& a, const FGAbelianGroup& b,
                                     std::optional<BigInt> free_bound) {
  if (a.rank() > 0 && b.rank() > 0 && !free_bound)
    throw std::invalid_argument("enumerating maps between infinite groups needs a free bound");
  const BigInt bound = free_bound.value_or(0);
  if (bound < 0) throw std::invalid_argument("free bound must be non-negative");
  const auto na = static_cast<Eigen::Index>(a.num_generators());
  const auto nb = static_cast<Eigen::Index>(b.num_generators());
  std::vector<std::vector<IntegerVector>> columns;
  for (Eigen::Index j = 0; j < na; ++j)
    columns.push_back(image_candidates(a.generator_order(static_cast<std::size_t>(j)), b, bound));

  std::vector<GroupHom> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(na), 0);
  while (true) {
    IntegerMatrix m(nb, na);
    for (Eigen::Index j = 0; j < na; ++j) m.col(j) = columns[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
    out.emplace_back(a, b, m);
    Eigen::Index k = na - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == columns[static_cast<std::size_t>(k)].size()) {
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

std::optional<std::set<FGAbelianGroup>> extension_middles(const FGAbelianGroup& sub,
                                                           const FGAbelianGroup& quotient,
                                                           std::size_t max_classes) {
  const auto na = static_cast<Eigen::Index>(sub.num_generators());
  const auto& c = quotient.torsion();
  const auto s = static_cast<Eigen::Index>(c.size());

  // Representatives of sub / c_j sub for each torsion generator of the quotient.
  std::vector<BigInt> moduli;  // one per (torsion generator j, sub coordinate i)
  BigInt classes = 1;
  for (const auto& cj : c) {
    for (Eigen::Index i = 0; i < na; ++i) {
      const BigInt d = sub.generator_order(static_cast<std::size_t>(i));
      const BigInt m = d == 0 ? cj : gcd(cj, d);
      moduli.push_back(m);
      classes *= m;
      if (classes > max_classes) return std::nullopt;
    }
  }

  std::set<FGAbelianGroup> out;
  const FGAbelianGroup free_quotient = quotient.free_part();
  std::vector<BigInt> digits(moduli.size(), 0);
  const IntegerMatrix rel_a = sub.relations();
  while (true) {
    IntegerMatrix rel = IntegerMatrix::Zero(na + s, rel_a.cols() + s);
    rel.topLeftCorner(na, rel_a.cols()) = rel_a;
    for (Eigen::Index j = 0; j < s; ++j) {
      rel(na + j, rel_a.cols() + j) = c[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < na; ++i) rel(i, rel_a.cols() + j) = -digits[static_cast<std::size_t>(j * na + i)];
    }
    const FGAbelianGroup middle = Subquotient(IntegerMatrix::Identity(na + s, na + s), rel).group();
    out.insert(direct_sum(middle, free_quotient));

    if (!advance(digits, moduli)) break;
  }
  return out;
}

std::optional<std::set<FGAbelianGroup>> iterated_extensions(const std::vector<FGAbelianGroup>& layers,
                                                             std::size_t max_classes) {
  std::set<FGAbelianGroup> current{FGAbelianGroup()};
  for (const auto& layer : layers) {
    if (layer.is_zero()) continue;
    std::set<FGAbelianGroup> next;
    for (const auto& g : current) {
      auto ext = extension_middles(g, layer, max_classes);
      if (!ext) return std::nullopt;
      next.insert(ext->begin(), ext->end());
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace g2topo

#include <g2topo/fixtures.hpp>
#include <g2topo/homology.hpp>

#include <sstream>

namespace g2topo {

HomologyTable compute_homology(const ChainComplex& c, std::string space_name) {
  HomologyTable t{std::move(space_name), {}};
  if (c.empty()) return t;
  for (std::size_t n = 0; n <= c.top_dim(); ++n) t.groups.push_back(homology_at(c.boundary(n + 1), c.boundary(n)));
  return t;
}

std::vector<long> poincare_polynomial(const HomologyTable& t) {
  std::vector<long> out;
  for (const auto& g : t.groups) out.push_back(static_cast<long>(g.rank()));
  return out;
}

long euler_characteristic(const HomologyTable& t) {
  long chi = 0;
  for (std::size_t n = 0; n < t.groups.size(); ++n) chi += (n % 2 ? -1 : 1) * static_cast<long>(t.groups[n].rank());
  return chi;
}

namespace {

std::size_t rank_mod2(const IntegerMatrix& m) {
  IntegerMatrix r = m;
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = mod_floor(r(i, j), 2);
  std::size_t rank = 0;
  for (const auto& d : smith_normal_form(r).invariant_factors())
    if (!divides(2, d)) ++rank;
  return rank;
}

std::size_t even_factors(const FGAbelianGroup& g) {
  std::size_t n = 0;
  for (const auto& d : g.torsion())
    if (divides(2, d)) ++n;
  return n;
}

}  // namespace

std::vector<std::size_t> mod2_homology(const ChainComplex& c) {
  std::vector<std::size_t> out;
  if (c.empty()) return out;
  for (std::size_t n = 0; n <= c.top_dim(); ++n)
    out.push_back(c.rank(n) - rank_mod2(c.boundary(n)) - rank_mod2(c.boundary(n + 1)));
  return out;
}

std::vector<std::size_t> mod2_from_integral(const HomologyTable& t) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < t.groups.size(); ++n)
    out.push_back(t.groups[n].rank() + even_factors(t.groups[n]) + (n ? even_factors(t.groups[n - 1]) : 0));
  return out;
}

TableComparison compare_tables(const std::vector<FGAbelianGroup>& computed,
                               const std::vector<FGAbelianGroup>& expected) {
  TableComparison out;
  std::ostringstream detail;
  const std::size_t n = std::max(computed.size(), expected.size());
  for (std::size_t k = 0; k < n; ++k) {
    const FGAbelianGroup a = k < computed.size() ? computed[k] : FGAbelianGroup();
    const FGAbelianGroup b = k < expected.size() ? expected[k] : FGAbelianGroup();
    if (!(a == b)) {
      out.pass = false;
      out.differing_degrees.push_back(k);
      detail << "degree " << k << ": computed " << a << ", expected " << b << "; ";
    }
  }
  out.detail = detail.str();
  return out;
}

TableComparison compare_with_fixture(const HomologyTable& t, const std::string& fixture_name,
                                     const FixtureStore& store) {
  return compare_tables(t.groups, store.groups(fixture_name));
}

std::string to_markdown(const HomologyTable& t) {
  std::ostringstream os;
  if (!t.space_name.empty()) os << "### " << t.space_name << "\n\n";
  os << "| degree | group |\n|---:|:---|\n";
  for (std::size_t n = 0; n < t.groups.size(); ++n) os << "| " << n << " | " << t.groups[n] << " |\n";
  return os.str();
}

}  // namespace g2topo

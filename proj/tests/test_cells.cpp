#include <doctest.h>
#include <g2topo/cells.hpp>
#include <g2topo/homology.hpp>
#include <g2topo/serialize.hpp>

#include <functional>

using namespace g2topo;

namespace {

std::vector<FGAbelianGroup> table(std::initializer_list<const char*> xs) {
  std::vector<FGAbelianGroup> out;
  for (const char* x : xs) out.push_back(parse_group(x));
  return out;
}

std::vector<FGAbelianGroup> homology_of(const ChainComplex& c) { return compute_homology(c).groups; }

std::size_t partitions_in_box(std::size_t d, std::size_t rows, std::size_t cols) {
  if (d == 0) return 1;
  if (rows == 0) return 0;
  std::size_t n = 0;
  for (std::size_t first = 1; first <= std::min(cols, d); ++first) {
    // remaining parts at most `first`
    std::function<std::size_t(std::size_t, std::size_t, std::size_t)> go = [&](std::size_t rem, std::size_t r,
                                                                               std::size_t cap) -> std::size_t {
      if (rem == 0) return 1;
      if (r == 0) return 0;
      std::size_t s = 0;
      for (std::size_t p = 1; p <= std::min(cap, rem); ++p) s += go(rem - p, r - 1, p);
      return s;
    };
    n += go(d - first, rows - 1, first);
  }
  return n;
}

std::vector<FGAbelianGroup> kunneth(const std::vector<FGAbelianGroup>& a, const std::vector<FGAbelianGroup>& b) {
  std::vector<FGAbelianGroup> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = direct_sum(out[i + j], tensor(a[i], b[j]));
      if (i + j + 1 < out.size()) out[i + j + 1] = direct_sum(out[i + j + 1], tor(a[i], b[j]));
    }
  return out;
}

void check_dd_zero(const ChainComplex& c) {
  for (std::size_t d = 2; d <= c.top_dim(); ++d) CHECK(is_zero(IntegerMatrix(c.boundary(d - 1) * c.boundary(d))));
}

}  // namespace

TEST_CASE("spheres") {
  CHECK(homology_of(sphere_complex(6)) == table({"Z", "0", "0", "0", "0", "0", "Z"}));
  CHECK(homology_of(sphere_complex(1)) == table({"Z", "Z"}));
  CHECK(euler_characteristic(sphere_complex(4)) == 2);
  CHECK_THROWS_AS(sphere_complex(0), std::invalid_argument);
}

TEST_CASE("real projective spaces") {
  CHECK(homology_of(rp_complex(3)) == table({"Z", "Z2", "0", "Z"}));
  CHECK(homology_of(rp_complex(2)) == table({"Z", "Z2", "0"}));
  CHECK(homology_of(rp_complex(1)) == table({"Z", "Z"}));
  CHECK(mod2_homology(rp_complex(3)) == std::vector<std::size_t>{1, 1, 1, 1});
  CHECK_THROWS_AS(rp_complex(0), std::invalid_argument);
}

TEST_CASE("schubert symbols") {
  const auto cells = schubert_cells(3, 7);
  CHECK(cells.size() == 13);
  for (std::size_t d = 0; d < cells.size(); ++d) {
    CHECK(cells[d].size() == partitions_in_box(d, 3, 4));
    for (const auto& s : cells[d]) CHECK(s.dimension() == d);
  }
  CHECK_THROWS_AS(SchubertSymbol(2, 5, {2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SchubertSymbol(2, 5, {0, 4}), std::invalid_argument);
  CHECK_THROWS_AS(SchubertSymbol(2, 5, {0}), std::invalid_argument);
}

TEST_CASE("unoriented grassmannians") {
  for (int n = 2; n <= 7; ++n) CHECK(homology_of(grassmann_complex(1, n)) == homology_of(rp_complex(n - 1)));

  const ChainComplex g37 = grassmann_complex(3, 7);
  check_dd_zero(g37);
  for (std::size_t d = 1; d <= g37.top_dim(); ++d) {
    const IntegerMatrix b = g37.boundary(d);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        CHECK(divides(2, b(i, j)));
        CHECK(abs(b(i, j)) <= 2);
      }
  }
  const auto m2 = mod2_homology(g37);
  for (std::size_t d = 0; d < m2.size(); ++d) CHECK(m2[d] == partitions_in_box(d, 3, 4));

  CHECK(poincare_polynomial(compute_homology(grassmann_complex(2, 4))) == std::vector<long>{1, 0, 0, 0, 1});
  CHECK(euler_characteristic(grassmann_complex(2, 4)) == 2);
  CHECK_THROWS_AS(grassmann_complex(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(grassmann_complex(0, 3), std::invalid_argument);
}

TEST_CASE("oriented double covers") {
  for (int n = 2; n <= 7; ++n) {
    const auto h = homology_of(oriented_grassmann_complex(1, n));
    CHECK(h == homology_of(sphere_complex(n - 1)));
  }
  CHECK(homology_of(oriented_grassmann_complex(2, 4)) == table({"Z", "0", "Z^2", "0", "Z"}));
  CHECK(homology_of(oriented_grassmann_complex(2, 7)) ==
        table({"Z", "0", "Z", "0", "Z", "0", "Z", "0", "Z", "0", "Z"}));
  CHECK(homology_of(oriented_grassmann_complex(3, 7)) ==
        table({"Z", "0", "Z2", "0", "Z^2", "Z2", "Z2", "0", "Z^2", "Z2", "0", "0", "Z"}));

  for (auto [k, n] : {std::pair{2, 5}, {3, 6}, {3, 7}}) {
    const ChainComplex base = grassmann_complex(k, n);
    const ChainComplex cover = oriented_grassmann_complex(k, n);
    check_dd_zero(cover);
    for (std::size_t d = 0; d <= base.top_dim(); ++d) CHECK(cover.rank(d) == 2 * base.rank(d));
    long chi2_base = 0, chi2_cover = 0;
    const auto mb = mod2_homology(base), mc = mod2_homology(cover);
    for (std::size_t d = 0; d < mb.size(); ++d) {
      chi2_base += (d % 2 ? -1 : 1) * static_cast<long>(mb[d]);
      chi2_cover += (d % 2 ? -1 : 1) * static_cast<long>(mc[d]);
    }
    CHECK(chi2_cover == 2 * chi2_base);
  }

  const ChainComplex base = grassmann_complex(2, 4);
  OrientationCharacter trivial{std::vector<bool>(base.rank(1), false)};
  CHECK_THROWS_AS(oriented_double_cover(base, trivial), std::invalid_argument);
  CHECK_THROWS_AS(oriented_double_cover(sphere_complex(3), OrientationCharacter{{}}), std::invalid_argument);
}

TEST_CASE("stiefel manifolds") {
  CHECK(homology_of(stiefel_complex(1, 7)) == homology_of(sphere_complex(6)));
  CHECK(homology_of(stiefel_complex(2, 7)) ==
        table({"Z", "0", "0", "0", "0", "Z2", "0", "0", "0", "0", "0", "Z"}));
  CHECK(homology_of(stiefel_complex(3, 7)) ==
        table({"Z", "0", "0", "0", "Z", "Z2", "0", "0", "0", "Z2", "0", "Z", "0", "0", "0", "Z"}));
  for (int n = 3; n <= 7; ++n)
    for (int k = 1; k < n; ++k) {
      const ChainComplex c = stiefel_complex(k, n);
      check_dd_zero(c);
      CHECK(c.top_dim() == static_cast<std::size_t>(k * n - k * (k + 1) / 2));
      const auto h = homology_of(c);
      CHECK(h.front() == FGAbelianGroup::free(1));
      CHECK(h.back() == FGAbelianGroup::free(1));
    }
  CHECK_THROWS_AS(stiefel_complex(7, 7), std::invalid_argument);
}

TEST_CASE("products") {
  const ChainComplex so4 = product_complex(sphere_complex(3), rp_complex(3));
  CHECK(homology_of(so4) == table({"Z", "Z2", "0", "Z^2", "Z2", "0", "Z"}));
  CHECK(homology_of(space_complex("so4")) == homology_of(so4));
  CHECK(euler_characteristic(so4) == 0);
  CHECK(homology_of(product_complex(sphere_complex(2), sphere_complex(2))) == table({"Z", "0", "Z^2", "0", "Z"}));
  CHECK(homology_of(product_complex(rp_complex(3), point_complex())) == homology_of(rp_complex(3)));

  const std::vector<ChainComplex> factors{rp_complex(2), rp_complex(3), sphere_complex(2), stiefel_complex(2, 5),
                                          grassmann_complex(2, 4)};
  for (const auto& a : factors)
    for (const auto& b : factors) {
      const ChainComplex p = product_complex(a, b);
      check_dd_zero(p);
      CHECK(homology_of(p) == kunneth(homology_of(a), homology_of(b)));
    }
}

TEST_CASE("euler characteristic") {
  CHECK(euler_characteristic(oriented_grassmann_complex(3, 7)) == 6);
  CHECK(euler_characteristic(rp_complex(3)) == 0);
  for (const char* name : {"so3", "so4", "grassmann+:3:7", "grassmann+:2:7", "stiefel:3:7", "rp:6", "product:rp:2xsphere:3"}) {
    const ChainComplex c = space_complex(name);
    CHECK(euler_characteristic(c) == euler_characteristic(compute_homology(c)));
  }
}

TEST_CASE("space names") {
  CHECK(space_complex("grassmann+:3:7").ranks() == oriented_grassmann_complex(3, 7).ranks());
  CHECK(homology_of(space_complex("so3")) == table({"Z", "Z2", "0", "Z"}));
  CHECK(homology_of(space_complex("point")) == table({"Z"}));
  CHECK_THROWS_AS(space_complex("klein"), std::invalid_argument);
  CHECK_THROWS_AS(space_complex("sphere:x"), std::invalid_argument);
  CHECK_THROWS_AS(space_complex("grassmann:3"), std::invalid_argument);
}

TEST_CASE("malformed complexes") {
  CHECK_THROWS_AS(ChainComplex({1, 1}, {make_matrix({{1, 0}})}), MalformedComplexError);
  CHECK_THROWS_AS(ChainComplex({1, 1, 1}, {make_matrix({{1}}), make_matrix({{1}})}), MalformedComplexError);
  CHECK_NOTHROW(ChainComplex({1, 1, 1}, {make_matrix({{0}}), make_matrix({{2}})}));
}

TEST_CASE("complex serialization round trip") {
  const ChainComplex c = oriented_grassmann_complex(2, 5);
  const ChainComplex back = complex_from_json(json::parse(to_json(c).dump()));
  CHECK(back.ranks() == c.ranks());
  for (std::size_t d = 1; d <= c.top_dim(); ++d) CHECK(back.boundary(d) == c.boundary(d));
  CHECK(back.labels() == c.labels());
  CHECK_THROWS_AS(complex_from_json(json::parse(R"({"ranks":[1,1],"boundaries":[[1,2]]})")), std::invalid_argument);
}

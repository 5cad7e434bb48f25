#include <doctest.h>
#include <g2topo/fixtures.hpp>
#include <g2topo/homology.hpp>

using namespace g2topo;

namespace {

const FixtureStore& store() {
  static const FixtureStore s = FixtureStore::load_default();
  return s;
}

}  // namespace

TEST_CASE("named tables match the reference fixtures") {
  for (const auto& name : store().names()) {
    if (store().kind(name) != "homology" || !store().entry(name).contains("space")) continue;
    CAPTURE(name);
    const auto space = store().entry(name).at("space").get<std::string>();
    const HomologyTable t = compute_homology(space_complex(space), space);
    const TableComparison cmp = compare_with_fixture(t, name, store());
    CHECK_MESSAGE(cmp.pass, cmp.detail);
  }
}

TEST_CASE("poincare polynomials") {
  CHECK(poincare_polynomial(compute_homology(space_complex("grassmann+:3:7"))) ==
        std::vector<long>{1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 1});
  CHECK(poincare_polynomial(compute_homology(rp_complex(3))) == std::vector<long>{1, 0, 0, 1});
  const auto v37 = poincare_polynomial(compute_homology(stiefel_complex(3, 7)));
  for (std::size_t d = 0; d < v37.size(); ++d) CHECK(v37[d] == (d == 0 || d == 4 || d == 11 || d == 15 ? 1 : 0));
}

TEST_CASE("mod 2 homology") {
  CHECK(mod2_homology(rp_complex(3)) == std::vector<std::size_t>{1, 1, 1, 1});
  CHECK(mod2_homology(sphere_complex(4)) == std::vector<std::size_t>{1, 0, 0, 0, 1});
  for (const char* name : {"so3", "so4", "grassmann+:2:7", "grassmann+:3:7", "stiefel:2:7", "stiefel:3:7",
                           "grassmann:3:7", "rp:6", "product:rp:2xrp:4"}) {
    CAPTURE(name);
    const ChainComplex c = space_complex(name);
    CHECK(mod2_homology(c) == mod2_from_integral(compute_homology(c)));
  }
}

TEST_CASE("duality and euler characteristic on closed manifolds") {
  for (auto [name, dim] : {std::pair{"grassmann+:2:7", 10}, {"grassmann+:3:7", 12}, {"stiefel:2:7", 11},
                           {"stiefel:3:7", 15}, {"so3", 3}, {"so4", 6}}) {
    CAPTURE(name);
    const ChainComplex c = space_complex(name);
    const HomologyTable t = compute_homology(c, name);
    CHECK(t.groups.size() == static_cast<std::size_t>(dim) + 1);
    CHECK(poincare_duality_check(t.groups, dim).pass);
    CHECK(euler_characteristic(c) == euler_characteristic(t));
  }
}

TEST_CASE("fixture comparison failures") {
  HomologyTable t = compute_homology(space_complex("grassmann+:3:7"));
  t.groups[5] = FGAbelianGroup();
  const TableComparison cmp = compare_with_fixture(t, "g37", store());
  CHECK_FALSE(cmp.pass);
  CHECK(cmp.differing_degrees == std::vector<std::size_t>{5});
  CHECK(cmp.detail.find("degree 5") != std::string::npos);
  CHECK_THROWS_AS(compare_with_fixture(t, "no_such_table", store()), UnknownFixtureError);
}

TEST_CASE("fixture file validation") {
  CHECK(store().version() == 1);
  CHECK_THROWS_AS(FixtureStore(json::parse(R"({"fixtures":{}})")), std::invalid_argument);
  CHECK_THROWS_AS(FixtureStore(json::parse(R"({"version":1,"fixtures":{"a":{"kind":"homology"}}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(FixtureStore::load("/nonexistent/tables.json"), std::runtime_error);
}

TEST_CASE("fixture tables are internally consistent") {
  CHECK(uct_cohomology(store().groups("ass")) == store().groups("ass_cohomology"));
  CHECK(poincare_duality_check(store().groups("g2"), 14).pass);
  CHECK(poincare_duality_check(store().groups("su3"), 8).pass);
  CHECK(poincare_duality_check(store().groups("ass"), 8).pass);
}

TEST_CASE("markdown rendering") {
  const std::string md = to_markdown(compute_homology(rp_complex(3), "rp:3"));
  CHECK(md.find("| 1 | Z2 |") != std::string::npos);
  CHECK(md.find("### rp:3") != std::string::npos);
}

#include <doctest.h>
#include <g2topo/fixtures.hpp>
#include <g2topo/g2algebra.hpp>

using namespace g2topo;

namespace {

const FixtureStore& store() {
  static const FixtureStore s = FixtureStore::load_default();
  return s;
}

using V = Vector7<Rational>;

V e(int i) { return basis_vector<Rational>(i); }

Form<Rational> fixture_form(const std::string& name, int degree) {
  return form_from_terms<Rational>(degree, store().entry(name).at("terms").get<std::vector<std::pair<std::string, int>>>());
}

Octonion<Rational> random_octonion(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  Octonion<Rational> o;
  for (int i = 0; i < 8; ++i) {
    o.c(i) = Rational(num(rng), den(rng));
    o.c(i).canonicalize();
  }
  return o;
}

}  // namespace

TEST_CASE("octonion multiplication") {
  using O = Octonion<Rational>;
  std::mt19937_64 rng(11);
  const O x = random_octonion(rng);
  CHECK(octonion_mul(O::unit(0), x) == x);
  CHECK(octonion_mul(x, O::unit(0)) == x);
  CHECK(octonion_mul(O::unit(1), O::unit(2)) == O::unit(3));
  O minus_li;
  minus_li.c(5) = -1;
  CHECK(octonion_mul(O::unit(4), O::unit(1)) == minus_li);
  CHECK(octonion_mul(O::unit(1), O::unit(4)) == O::unit(5));
  for (int t = 0; t < 1000; ++t) {
    const O a = random_octonion(rng), b = random_octonion(rng);
    CHECK(octonion_mul(a, b).norm2() == a.norm2() * b.norm2());
  }
}

TEST_CASE("cross product") {
  CHECK(cross(e(1), e(2)) == e(3));
  CHECK(cross(e(2), e(4)) == e(6));
  CHECK(cross(e(3), e(3)).isZero());
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const V u = random_rational_vector(rng), v = random_rational_vector(rng);
    const V w = cross(u, v);
    CHECK(w == V(-cross(v, u)));
    CHECK(w.dot(u) == 0);
    CHECK(w.dot(v) == 0);
  }
}

TEST_CASE("the three-form and its dual") {
  CHECK(phi_from_cross<Rational>() == phi0<Rational>());
  CHECK(phi0<Rational>() == fixture_form("phi0", 3));
  CHECK(star_phi0<Rational>() == fixture_form("star_phi0", 4));
  CHECK(hodge_star(phi0<Rational>()) == star_phi0<Rational>());
  CHECK(hodge_star(star_phi0<Rational>()) == phi0<Rational>());
  CHECK(phi<Rational>(e(1), e(2), e(3)) == 1);
  CHECK(phi<Rational>(e(2), e(5), e(7)) == -1);
  CHECK(phi<Rational>(e(1), e(2), e(4)) == 0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const V u = random_rational_vector(rng), v = random_rational_vector(rng), w = random_rational_vector(rng);
    CHECK(evaluate(phi0<Rational>(), columns<Rational>({u, v, w})) == phi<Rational>(u, v, w));
  }
}

TEST_CASE("metric from the three-form") {
  const Form<Rational> f = phi0<Rational>();
  for (int a = 1; a <= 7; ++a)
    for (int b = 1; b <= 7; ++b) CHECK(metric_from_phi(f, e(a), e(b)) == (a == b ? 1 : 0));
}

TEST_CASE("chi") {
  CHECK(chi<Rational>(e(1), e(2), e(3)).isZero());
  CHECK(chi<Rational>(e(1), e(2), e(4)).squaredNorm() == 1);
  CHECK(chi<Rational>(e(1), e(1), e(5)).isZero());
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const V u = random_rational_vector(rng), v = random_rational_vector(rng), w = random_rational_vector(rng);
    const V c = chi<Rational>(u, v, w);
    CHECK(c == chi_from_star<Rational>(u, v, w));
    CHECK(c.dot(u) == 0);
    CHECK(c.dot(v) == 0);
    CHECK(c.dot(w) == 0);
  }
}

TEST_CASE("calibration identity") {
  CHECK(calibration_identity_check(e(1), e(2), e(3)).holds());
  CHECK(calibration_identity_check(e(1), e(2), e(3)).phi_squared == 1);
  const auto dep = calibration_identity_check(e(1), e(2), V(e(1) + e(2)));
  CHECK(dep.holds());
  CHECK(dep.volume_squared == 0);
  const json& cfg = store().entry("calibration");
  std::mt19937_64 rng(cfg.at("seed").get<std::uint64_t>());
  const int n = cfg.at("samples").get<int>();
  int held = 0;
  for (int t = 0; t < n; ++t) {
    const V u = random_rational_vector(rng), v = random_rational_vector(rng), w = random_rational_vector(rng);
    held += calibration_identity_check(u, v, w).holds();
  }
  CHECK(held == n);
}

TEST_CASE("plane classification") {
  CHECK(classify_plane3(parse_plane("e1,e2,e3")).kind == PlaneKind::AssociativePositive);
  CHECK(classify_plane3(parse_plane("e2,e1,e3")).kind == PlaneKind::AssociativeNegative);
  CHECK(classify_plane3(parse_plane("e1,e2,e4")).kind == PlaneKind::HarveyLawson);
  CHECK(classify_plane3(parse_plane("e1,e2,e4")).phi_squared == 0);
  CHECK(classify_plane3(parse_plane("e1, [0 1 0 0 0 0 0], [0 0 1 1 0 0 0]")).phi_squared == Rational(1, 2));
  CHECK_THROWS_AS(classify_plane3(parse_plane("e1,e2,[1 1 0 0 0 0 0]")), RankDeficientError);
  CHECK_THROWS_AS(parse_plane("e1,e9,e2"), std::invalid_argument);

  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> small(-2, 2);
  for (int t = 0; t < 200; ++t) {
    const PlaneBasis<Rational> b =
        columns<Rational>({random_rational_vector(rng), random_rational_vector(rng), random_rational_vector(rng)});
    if (rank_of(b) != 3) continue;
    const PlaneClass c = classify_plane3(b);
    CHECK(c.phi_squared >= 0);
    CHECK(c.phi_squared <= 1);
    CHECK((c.phi_squared == 1) == (c.kind == PlaneKind::AssociativePositive || c.kind == PlaneKind::AssociativeNegative));

    Eigen::Matrix<Rational, 3, 3> g;
    do {
      for (int i = 0; i < 9; ++i) g(i) = small(rng);
    } while (determinant<Rational>(g) <= 0);
    const PlaneClass moved = classify_plane3(b * g);
    CHECK(moved.kind == c.kind);
    CHECK(moved.phi_squared == c.phi_squared);
  }
}

TEST_CASE("coassociative planes and complements") {
  CHECK(coassociative_check(parse_plane("e4,e5,e6,e7")));
  CHECK_FALSE(coassociative_check(parse_plane("e1,e2,e3,e4")));
  CHECK(same_span(perp(parse_plane("e1,e2,e3")), parse_plane("e4,e5,e6,e7")));

  std::vector<PlaneBasis<Rational>> associative{parse_plane("e1,e2,e3"), parse_plane("e1,e4,e5"),
                                                 parse_plane("e2,e4,e6"), parse_plane("e5,e2,e7")};
  std::mt19937_64 gen(31);
  for (int t = 0; t < 20; ++t) {
    const V u = random_rational_vector(gen), v = random_rational_vector(gen);
    if (cross(u, v).isZero()) continue;
    associative.push_back(columns<Rational>({u, v, cross(u, v)}));
  }
  for (const auto& a : associative) {
    CAPTURE(a.transpose());
    REQUIRE(classify_plane3(a).kind == PlaneKind::AssociativePositive);
    CHECK(coassociative_check(perp(a)));
    CHECK(same_span(perp(perp(a)), a));
  }

  std::mt19937_64 rng(29);
  for (int t = 0; t < 50; ++t) {
    const PlaneBasis<Rational> b =
        columns<Rational>({random_rational_vector(rng), random_rational_vector(rng), random_rational_vector(rng)});
    if (rank_of(b) != 3) continue;
    const PlaneBasis<Rational> p = perp(b);
    CHECK(rank_of(p) == 4);
    CHECK((b.transpose() * p).isZero());
  }
}

TEST_CASE("gradient flow of Phi") {
  const auto frame = [](const char* text) {
    const PlaneBasis<Rational> p = parse_plane(text);
    Eigen::Matrix<double, 7, 3> m;
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = p(i).get_d();
    return m;
  };
  const FlowResult fixed = flow_to_critical(frame("e1,e2,e3"));
  CHECK(fixed.converged);
  CHECK(fixed.iterations == 0);

  const FlowResult up = flow_to_critical(frame("e1,e2,e4"));
  CHECK(up.converged);
  CHECK(up.phi >= 1 - 1e-9);
  const PlaneClass limit = classify_plane3(rationalize(up.frame));
  CHECK(limit.phi_squared.get_d() == doctest::Approx(1).epsilon(1e-8));

  FlowOptions down;
  down.direction = -1;
  const FlowResult low = flow_to_critical(frame("e1,e2,e4"), down);
  CHECK(low.converged);
  CHECK(low.phi <= -1 + 1e-9);

  FlowOptions tight;
  tight.max_iterations = 3;
  CHECK_FALSE(flow_to_critical(frame("e1,e2,e4"), tight).converged);

  const json& cfg = store().entry("bott_morse");
  std::mt19937_64 rng(cfg.at("seed").get<std::uint64_t>());
  FlowOptions o;
  o.tol = cfg.at("tol").get<double>();
  o.step = cfg.at("step").get<double>();
  o.max_iterations = cfg.at("max_iterations").get<std::size_t>();
  for (int t = 0; t < 10; ++t) {
    const auto start = random_frame(rng);
    for (int dir : {1, -1}) {
      o.direction = dir;
      const FlowResult r = flow_to_critical(start, o);
      CHECK(r.converged);
      CHECK(dir * r.phi >= 1 - o.tol);
      for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(dir * r.trace[i] > dir * r.trace[i - 1]);
    }
  }
}

TEST_CASE("Harvey-Lawson pair criterion") {
  for (const auto& c : store().entry("hl_pairs").at("cases")) {
    CAPTURE(c.at("label").get<std::string>());
    CHECK(hl_pair_criterion(c.at("p1").get<long>(), c.at("euler").get<long>()) == c.at("expect").get<bool>());
  }
  for (long g = 0; g < 4; ++g)
    for (long h = 0; h < 4; ++h) CHECK(hl_pair_criterion(0, (2 - 2 * g) * (2 - 2 * h)) == (g != 1 && h != 1));
}

#include <g2topo/cells.hpp>
#include <g2topo/fixtures.hpp>
#include <g2topo/g2algebra.hpp>
#include <g2topo/homology.hpp>
#include <g2topo/report.hpp>
#include <g2topo/smith.hpp>
#include <g2topo/specseq.hpp>

#include <chrono>
#include <iostream>
#include <map>
#include <random>

using namespace g2topo;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
  void note(const std::string& s) {
    if (pass) detail += (detail.empty() ? "" : "; ") + s;
  }
};

void fixture(Verdict& v, const FixtureStore& store, const std::string& name) {
  const FixtureResult r = check_fixture(store, name);
  v.require(r.pass, name + ": got " + r.computed + ", want " + r.expected + (r.detail.empty() ? "" : " (" + r.detail + ")"));
}

long euler(const std::vector<FGAbelianGroup>& t) {
  long c = 0;
  for (std::size_t n = 0; n < t.size(); ++n) c += (n % 2 ? -1 : 1) * static_cast<long>(t[n].rank());
  return c;
}

std::vector<FGAbelianGroup> table(std::initializer_list<const char*> groups) {
  std::vector<FGAbelianGroup> out;
  for (const char* g : groups) out.push_back(parse_group(g));
  return out;
}

Verdict homology_tables(const FixtureStore& store) {
  Verdict v;
  v.require(compute_homology(space_complex("grassmann+:2:7")).groups ==
                table({"Z", "0", "Z", "0", "Z", "0", "Z", "0", "Z", "0", "Z"}),
            "G2+R7 table");
  v.require(compute_homology(space_complex("grassmann+:3:7")).groups ==
                table({"Z", "0", "Z2", "0", "Z^2", "Z2", "Z2", "0", "Z^2", "Z2", "0", "0", "Z"}),
            "G3+R7 table");
  for (const char* name : {"g27", "g37", "v27", "v37", "so3", "so4"}) fixture(v, store, name);
  return v;
}

struct Replay {
  FibrationProblem problem;
  SolveResult result;
};

std::map<std::string, Replay> run_replays(const FixtureStore& store, double& seconds) {
  std::map<std::string, Replay> out;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& name : replay_names()) {
    SolveBounds bounds;
    Replay r{named_problem(name, store, &bounds), {}};
    r.result = solve(r.problem, bounds);
    out.emplace(name, std::move(r));
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Verdict characteristics(const FixtureStore& store, const std::map<std::string, Replay>& replays) {
  Verdict v;
  const auto g37 = poincare_polynomial(compute_homology(space_complex("grassmann+:3:7")));
  v.require(g37 == std::vector<long>{1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 1}, "Poincare polynomial of G3+R7");
  v.require(euler_characteristic(space_complex("grassmann+:3:7")) == 6, "chi(G3+R7)");
  v.require(euler_characteristic(space_complex("so4")) == 0, "chi(SO4)");
  v.require(euler(store.groups("g2")) == 0, "chi(G2)");
  for (const char* name : {"g37_poincare", "chi_g37", "chi_so4", "chi_g2"}) fixture(v, store, name);
  for (const auto& [name, r] : replays)
    for (const Solution& s : r.result.solutions)
      v.require(euler(s.total) == euler(s.base) * euler(r.problem.fiber), name + " is not multiplicative");
  return v;
}

Verdict spectral(const FixtureStore& store, const std::map<std::string, Replay>& replays, double seconds) {
  Verdict v;
  for (const auto& [name, r] : replays) v.require(!r.result.solutions.empty(), name + " has no consistent solution");
  const auto& s1 = replays.at("s1-v27-g27").result.solutions;
  v.require(s1.size() == 1 && s1.front().base == homology_of(store, "g27"), "s1-v27-g27 base not unique or wrong");
  const auto& s4 = replays.at("s4-v37-v27").result.solutions;
  v.require(s4.size() == 1 && s4.front().total == homology_of(store, "v37"), "s4-v37-v27 total not unique or wrong");
  for (const Solution& s : replays.at("so4-g2-ass").result.solutions) {
    v.require(s.total.at(8) == FGAbelianGroup::cyclic(2), "so4-g2-ass H8 = " + s.total.at(8).to_string());
    v.require(s.total.at(9).rank() == 0, "so4-g2-ass H9 has free part");
  }
  v.require(seconds < 60, "replays took " + std::to_string(seconds) + " s");
  for (const auto& [name, r] : replays)
    if (r.result.necessary_only) v.note(name + " partly by necessary conditions");
  v.note(std::to_string(seconds).substr(0, 4) + " s");
  return v;
}

Verdict gysin(const FixtureStore& store) {
  Verdict v;
  fixture(v, store, "gysin_e0");
  fixture(v, store, "gysin_g37_h5");
  return v;
}

Verdict rings(const FixtureStore& store) {
  Verdict v;
  for (const auto& name : store.names())
    if (store.kind(name) == "ring") fixture(v, store, name);
  fixture(v, store, "i_star");
  fixture(v, store, "i_star_negative");
  return v;
}

Verdict g2_algebra(const FixtureStore& store) {
  Verdict v;
  fixture(v, store, "phi0");
  fixture(v, store, "star_phi0");
  fixture(v, store, "calibration");
  v.require(store.entry("calibration").at("samples").get<int>() == 1000, "calibration sample count");
  v.require(hodge_star(phi0<Rational>()) == star_phi0<Rational>(), "*phi0 is not the Hodge star of phi0");

  Form<Rational> psi;
  psi.degree = 4;
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = j + 1; k <= 7; ++k)
        for (int l = k + 1; l <= 7; ++l) {
          const Rational c = chi<Rational>(basis_vector<Rational>(i), basis_vector<Rational>(j), basis_vector<Rational>(k))
                                 .dot(basis_vector<Rational>(l));
          if (c != 0) psi.add(index_mask(std::to_string(i * 1000 + j * 100 + k * 10 + l)), c);
        }
  v.require(psi == star_phi0<Rational>(), "*phi0 from the octonionic chi");

  v.require(classify_plane3(parse_plane("e1,e2,e3")).kind == PlaneKind::AssociativePositive, "span(e1,e2,e3) is not ASS+");
  std::vector<PlaneBasis<Rational>> planes{parse_plane("e1,e2,e3"), parse_plane("e1,e4,e5"), parse_plane("e2,e4,e6"),
                                           parse_plane("e5,e2,e7")};
  std::mt19937_64 rng(store.entry("calibration").at("seed").get<std::uint64_t>());
  while (planes.size() < 50) {
    const auto a = random_rational_vector(rng), b = random_rational_vector(rng);
    if (!cross(a, b).isZero()) planes.push_back(columns<Rational>({a, b, cross(a, b)}));
  }
  int tested = 0;
  for (const auto& p : planes) {
    if (classify_plane3(p).kind != PlaneKind::AssociativePositive) {
      v.fail("test plane is not ASS+");
      continue;
    }
    ++tested;
    v.require(coassociative_check(perp(p)), "perp of an ASS+ plane is not coassociative");
  }
  v.note(std::to_string(tested) + " ASS+ planes");
  return v;
}

Verdict flow(const FixtureStore& store) {
  Verdict v;
  const json& e = store.entry("bott_morse");
  v.require(e.at("starts").get<int>() == 100, "start count");
  v.require(e.at("tol").get<double>() <= 1e-8, "tolerance");
  v.require(e.at("max_iterations").get<std::size_t>() <= 100000, "iteration cap");
  const FixtureResult r = check_fixture(store, "bott_morse");
  v.require(r.pass, r.computed);
  v.note(r.detail);
  return v;
}

Verdict cross_checks(const FixtureStore& store) {
  Verdict v;
  std::vector<std::string> spaces{"point", "so3", "so4", "product:so3xso3", "product:sphere:2xrp:4"};
  for (int n = 1; n <= 8; ++n) {
    spaces.push_back("sphere:" + std::to_string(n));
    spaces.push_back("rp:" + std::to_string(n));
  }
  for (int n = 2; n <= 7; ++n)
    for (int k = 1; k < n; ++k) {
      spaces.push_back("grassmann:" + std::to_string(k) + ":" + std::to_string(n));
      spaces.push_back("grassmann+:" + std::to_string(k) + ":" + std::to_string(n));
    }
  for (int n = 3; n <= 7; ++n) spaces.push_back("stiefel:2:" + std::to_string(n));
  for (int n = 4; n <= 7; ++n) spaces.push_back("stiefel:3:" + std::to_string(n));

  for (const auto& name : spaces) {
    const ChainComplex c = space_complex(name);
    for (std::size_t d = 2; d <= c.top_dim(); ++d)
      v.require((c.boundary(d - 1) * c.boundary(d)).isZero(), name + ": boundary squared is nonzero");
    const HomologyTable t = compute_homology(c, name);
    v.require(mod2_homology(c) == mod2_from_integral(t), name + ": mod 2 homology disagrees with UCT");
  }
  fixture(v, store, "so3_mod2");

  int orientable = 0;
  for (const auto& name : store.names()) {
    const json& e = store.entry(name);
    if (store.kind(name) != "homology" || !e.contains("manifold_dim") || !e.value("orientable", true)) continue;
    const auto h = homology_of(store, name);
    const DualityReport d = poincare_duality_check(h, e.at("manifold_dim").get<std::size_t>());
    v.require(d.pass, name + ": " + d.detail);
    const auto cohomology = uct_cohomology(h);
    std::vector<std::size_t> predicted(h.size()), direct(h.size());
    for (std::size_t n = 0; n < h.size(); ++n) {
      predicted[n] = h[n].rank() + h[n].torsion().size() + (n ? h[n - 1].torsion().size() : 0);
      direct[n] = cohomology[n].rank() + cohomology[n].torsion().size() +
                  (n + 1 < h.size() ? cohomology[n + 1].torsion().size() : 0);
    }
    v.require(predicted == direct, name + ": mod 2 ranks differ between homology and cohomology");
    ++orientable;
  }

  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<int> dim(1, 12), entry(-50, 50);
  int snf = 0;
  for (int t = 0; t < 500; ++t) {
    IntegerMatrix m(dim(rng), dim(rng));
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = entry(rng);
    const auto s = smith_normal_form(m);
    bool ok = s.U * m * s.V == s.S;
    ok = ok && s.U * s.U_inv == IntegerMatrix::Identity(m.rows(), m.rows());
    ok = ok && s.V * s.V_inv == IntegerMatrix::Identity(m.cols(), m.cols());
    for (Eigen::Index i = 0; i < s.S.rows(); ++i)
      for (Eigen::Index j = 0; j < s.S.cols(); ++j)
        if (i != j || i >= s.rank) ok = ok && s.S(i, j) == 0;
    for (Eigen::Index i = 0; i + 1 < s.rank; ++i) ok = ok && s.S(i, i) > 0 && s.S(i + 1, i + 1) % s.S(i, i) == 0;
    snf += ok;
  }
  v.require(snf == 500, std::to_string(snf) + "/500 Smith decompositions verified");
  v.note(std::to_string(spaces.size()) + " complexes, " + std::to_string(orientable) + " manifolds, 500 SNF");
  return v;
}

}  // namespace

int main() {
  try {
    const FixtureStore store = FixtureStore::load_default();
    double seconds = 0;
    const auto replays = run_replays(store, seconds);
    const std::vector<std::pair<std::string, Verdict>> criteria{
        {"homology tables", homology_tables(store)},
        {"Poincare polynomial and Euler characteristics", characteristics(store, replays)},
        {"spectral sequence replays", spectral(store, replays, seconds)},
        {"Gysin deductions", gysin(store)},
        {"ring presentations", rings(store)},
        {"G2 algebra", g2_algebra(store)},
        {"gradient flow", flow(store)},
        {"cross-checks", cross_checks(store)},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      const auto& [title, v] = criteria[i];
      std::cout << "criterion " << i + 1 << ": " << (v.pass ? "PASS" : "FAIL") << "  " << title
                << (v.detail.empty() ? "" : " [" + v.detail + "]") << "\n";
      all = all && v.pass;
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

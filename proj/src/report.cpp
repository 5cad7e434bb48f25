#include <g2topo/report.hpp>

#include <g2topo/cells.hpp>
#include <g2topo/g2algebra.hpp>
#include <g2topo/gradedring.hpp>
#include <g2topo/homology.hpp>
#include <g2topo/specseq.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace g2topo {

std::string table_string(const std::vector<FGAbelianGroup>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + t[i].to_string();
  return s + ")";
}

std::vector<FGAbelianGroup> homology_of(const FixtureStore& store, const std::string& name) {
  if (!store.contains(name)) return compute_homology(space_complex(name)).groups;
  const json& e = store.entry(name);
  if (e.contains("space")) return compute_homology(space_complex(e.at("space").get<std::string>())).groups;
  return store.groups(name);
}

namespace {

template <typename T>
std::string list_string(const std::vector<T>& xs) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
  os << ")";
  return os.str();
}

long euler_of(const std::vector<FGAbelianGroup>& t) {
  long c = 0;
  for (std::size_t n = 0; n < t.size(); ++n) c += (n % 2 ? -1 : 1) * static_cast<long>(t[n].rank());
  return c;
}

void expect_equal(FixtureResult& r, const std::string& computed, const std::string& expected) {
  r.computed = computed;
  r.expected = expected;
  r.pass = computed == expected;
}

void check_homology(const FixtureStore& store, const json& e, FixtureResult& r) {
  const auto recorded = store.groups(r.name);
  r.expected = table_string(recorded);
  r.pass = true;
  if (e.contains("space")) {
    const auto computed = homology_of(store, r.name);
    r.computed = table_string(computed);
    r.pass = compare_tables(computed, recorded).pass;
  } else if (e.contains("prefix_of")) {
    auto computed = homology_of(store, e.at("prefix_of").get<std::string>());
    computed.resize(recorded.size());
    r.computed = table_string(computed);
    r.pass = computed == recorded;
  } else {
    r.computed = r.expected;
    r.detail = "recorded table";
  }
  if (e.contains("manifold_dim")) {
    const DualityReport d = poincare_duality_check(recorded, e.at("manifold_dim").get<std::size_t>(),
                                                   e.value("orientable", true));
    if (!d.pass) {
      r.pass = false;
      r.detail = "Poincare duality: " + d.detail;
    }
  }
}

void check_spectral(const FixtureStore& store, const json& e, FixtureResult& r, const ReportOptions&) {
  SolveBounds bounds;
  const FibrationProblem problem = named_problem(e.at("problem").get<std::string>(), store, &bounds);
  const SolveResult result = solve(problem, bounds);
  const json& want = e.at("expect");
  std::vector<std::string> failures;
  if (want.value("consistent", false) && result.solutions.empty()) failures.push_back("no consistent solution");
  if (want.value("unique", false) && result.solutions.size() != 1)
    failures.push_back(std::to_string(result.solutions.size()) + " solutions, expected one");
  for (const Solution& s : result.solutions) {
    if (euler_of(s.total) != euler_of(s.base) * euler_of(problem.fiber)) failures.push_back("euler characteristic not multiplicative");
    if (want.contains("base") && s.base != homology_of(store, want.at("base").get<std::string>()))
      failures.push_back("base " + table_string(s.base));
    if (want.contains("total") && s.total != homology_of(store, want.at("total").get<std::string>()))
      failures.push_back("total " + table_string(s.total));
    if (want.contains("total_degree"))
      for (const auto& [deg, g] : want.at("total_degree").items())
        if (s.total.at(std::stoul(deg)) != group_from_json(g))
          failures.push_back("H" + deg + " = " + s.total.at(std::stoul(deg)).to_string());
    if (want.contains("total_free_rank"))
      for (const auto& [deg, k] : want.at("total_free_rank").items())
        if (s.total.at(std::stoul(deg)).rank() != k.get<std::size_t>())
          failures.push_back("H" + deg + " has free rank " + std::to_string(s.total.at(std::stoul(deg)).rank()));
  }
  std::sort(failures.begin(), failures.end());
  failures.erase(std::unique(failures.begin(), failures.end()), failures.end());
  std::set<std::vector<FGAbelianGroup>> totals, bases;
  for (const Solution& s : result.solutions) {
    totals.insert(s.total);
    bases.insert(s.base);
  }
  std::string computed = std::to_string(result.solutions.size()) + " solutions";
  if (bases.size() == 1) computed += "; base " + table_string(*bases.begin());
  if (totals.size() == 1) computed += "; total " + table_string(*totals.begin());
  r.computed = computed;
  r.expected = want.dump();
  r.pass = failures.empty();
  for (const auto& f : failures) r.detail += (r.detail.empty() ? "" : "; ") + f;
  if (result.necessary_only) r.detail += (r.detail.empty() ? "" : "; ") + std::string("necessary conditions only");
}

/// Vertical S4-bundle over G2+R7, then the horizontal S2-bundle over G3+R7.
std::map<std::string, FGAbelianGroup> gysin_chain(const FixtureStore& store) {
  std::map<std::string, FGAbelianGroup> out;
  std::vector<std::optional<FGAbelianGroup>> g27, unknown(6, std::nullopt);
  for (const auto& g : uct_cohomology(homology_of(store, "g27"))) g27.emplace_back(g);
  const GysinResult v = gysin_solve(gysin_segment(g27, unknown, 4, 5, "G2+", "E0"));
  if (!v.forced()) return out;
  out["H5(E0)"] = *v.filled.nodes[2];

  std::vector<std::optional<FGAbelianGroup>> g37;
  for (const auto& g : uct_cohomology(store.groups("g37_low"))) g37.emplace_back(g);
  g37.resize(13, std::nullopt);
  std::vector<std::optional<FGAbelianGroup>> e0(6, std::nullopt);
  e0[5] = out["H5(E0)"];
  LongExactTemplate h = gysin_segment(g37, e0, 2, 5, "G3+", "E0");
  h.nodes.resize(3);
  h.labels.resize(3);
  h.maps.resize(2);
  const GysinResult hr = gysin_solve(h);
  if (hr.forced()) out["H5(G3)"] = *hr.filled.nodes[1];
  return out;
}

void check_gysin(const FixtureStore& store, const json& e, FixtureResult& r) {
  const auto got = gysin_chain(store);
  r.pass = true;
  for (const auto& [label, g] : e.at("expect").items()) {
    const auto it = got.find(label);
    const std::string value = it == got.end() ? "not forced" : it->second.to_string();
    r.computed += label + " = " + value;
    r.expected += label + " = " + g.get<std::string>();
    if (it == got.end() || it->second != parse_group(g.get<std::string>())) r.pass = false;
  }
}

RingPresentation ring_of(const FixtureStore& store, const std::string& name) {
  return presentation_from_json(store.entry(name).at("presentation"));
}

void check_ring(const FixtureStore& store, const json& e, FixtureResult& r) {
  const int cutoff = e.at("cutoff").get<int>();
  const auto n = static_cast<std::size_t>(cutoff) + 1;
  const GradedDimensionTable t = graded_dimensions(ring_of(store, r.name), cutoff);
  const json& want = e.at("expect");
  if (want.contains("uct_of")) {
    auto expected = uct_cohomology(homology_of(store, want.at("uct_of").get<std::string>()));
    expected.resize(n);
    expect_equal(r, table_string(t.groups), table_string(expected));
    return;
  }
  std::vector<long> expected;
  if (want.contains("poincare_of")) {
    expected = store.entry(want.at("poincare_of").get<std::string>()).at("coefficients").get<std::vector<long>>();
  } else if (want.contains("mod2_of")) {
    for (std::size_t d : mod2_from_integral(HomologyTable{"", homology_of(store, want.at("mod2_of").get<std::string>())}))
      expected.push_back(static_cast<long>(d));
  } else if (want.contains("polynomial_degrees")) {
    expected = polynomial_series(want.at("polynomial_degrees").get<std::vector<int>>(), cutoff);
  } else if (want.contains("ranks")) {
    expected = want.at("ranks").get<std::vector<long>>();
  } else if (want.contains("free_ranks_of")) {
    const auto other = want.at("free_ranks_of").get<std::string>();
    expected = graded_dimensions(ring_of(store, other), store.entry(other).at("cutoff").get<int>()).ranks();
  } else {
    throw std::invalid_argument("ring fixture without a recognized expectation");
  }
  expected.resize(n);
  expect_equal(r, list_string(t.ranks()), list_string(expected));
}

void check_ring_hom_fixture(const FixtureStore& store, const json& e, FixtureResult& r) {
  std::vector<std::pair<std::string, std::string>> required;
  if (e.contains("required")) required = e.at("required").get<std::vector<std::pair<std::string, std::string>>>();
  const HomCheck h = check_ring_hom(ring_of(store, e.at("source").get<std::string>()),
                                    ring_of(store, e.at("target").get<std::string>()),
                                    e.at("images").get<std::map<std::string, std::string>>(), required);
  const bool want = e.at("expect_pass").get<bool>();
  r.computed = h.pass ? "homomorphism" : "not a homomorphism";
  r.expected = want ? "homomorphism" : "not a homomorphism";
  r.pass = h.pass == want;
  for (const auto& f : h.failures) r.detail += (r.detail.empty() ? "" : "; ") + f;
}

std::string form_string(const Form<Rational>& f) {
  std::string s;
  for (const auto& [m, c] : f.terms) {
    const bool neg = c < 0;
    s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    if (abs(c) != 1) s += Rational(abs(c)).get_str() + "*";
    s += "e" + mask_digits(m);
  }
  return s.empty() ? "0" : s;
}

void check_form(const FixtureStore& store, const json& e, FixtureResult& r) {
  const auto terms = e.at("terms").get<std::vector<std::pair<std::string, int>>>();
  const int degree = static_cast<int>(terms.front().first.size());
  const Form<Rational> want = form_from_terms<Rational>(degree, terms);
  const Form<Rational> from_octonions = phi_from_cross<Rational>();
  Form<Rational> got;
  if (degree == 3)
    got = from_octonions;
  else if (degree == 4)
    got = hodge_star(from_octonions);
  else
    throw std::invalid_argument("form fixture of degree " + std::to_string(degree));
  expect_equal(r, form_string(got), form_string(want));
  (void)store;
}

void check_identities(const json& e, FixtureResult& r, const ReportOptions& o) {
  std::mt19937_64 rng(o.seed.value_or(e.at("seed").get<std::uint64_t>()));
  const int n = e.at("samples").get<int>();
  int calibration = 0, chi_routes = 0, phi_routes = 0;
  for (int t = 0; t < n; ++t) {
    const auto u = random_rational_vector(rng), v = random_rational_vector(rng), w = random_rational_vector(rng);
    calibration += calibration_identity_check(u, v, w).holds();
    chi_routes += chi<Rational>(u, v, w) == chi_from_star<Rational>(u, v, w);
    phi_routes += evaluate(phi0<Rational>(), columns<Rational>({u, v, w})) == phi<Rational>(u, v, w);
  }
  const auto line = [](int c, int total) { return std::to_string(c) + "/" + std::to_string(total); };
  r.computed = "calibration " + line(calibration, n) + ", chi " + line(chi_routes, n) + ", phi " + line(phi_routes, n);
  r.expected = "calibration " + line(n, n) + ", chi " + line(n, n) + ", phi " + line(n, n);
  r.pass = r.computed == r.expected;
}

void check_flow(const json& e, FixtureResult& r, const ReportOptions& o) {
  std::mt19937_64 rng(o.seed.value_or(e.at("seed").get<std::uint64_t>()));
  FlowOptions f;
  f.tol = e.at("tol").get<double>();
  f.step = e.value("step", f.step);
  f.max_iterations = e.value("max_iterations", f.max_iterations);
  const int starts = e.at("starts").get<int>();
  int ok = 0;
  std::size_t worst = 0;
  for (int t = 0; t < starts; ++t) {
    const auto start = random_frame(rng);
    bool both = true;
    for (int dir : {1, -1}) {
      f.direction = dir;
      const FlowResult res = flow_to_critical(start, f);
      bool monotone = true;
      for (std::size_t i = 1; i < res.trace.size(); ++i) monotone = monotone && dir * res.trace[i] > dir * res.trace[i - 1];
      both = both && res.converged && dir * res.phi >= 1 - f.tol && monotone;
      worst = std::max(worst, res.iterations);
    }
    ok += both;
  }
  r.computed = std::to_string(ok) + "/" + std::to_string(starts) + " starts reach +-1 monotonically";
  r.expected = std::to_string(starts) + "/" + std::to_string(starts) + " starts reach +-1 monotonically";
  r.detail = "at most " + std::to_string(worst) + " iterations";
  r.pass = ok == starts;
}

void check_hl(const json& e, FixtureResult& r) {
  r.pass = true;
  for (const auto& c : e.at("cases")) {
    const bool got = hl_pair_criterion(c.at("p1").get<long>(), c.at("euler").get<long>());
    const bool want = c.at("expect").get<bool>();
    r.computed += (r.computed.empty() ? "" : ", ") + std::string(got ? "yes" : "no");
    r.expected += (r.expected.empty() ? "" : ", ") + std::string(want ? "yes" : "no");
    if (got != want) {
      r.pass = false;
      r.detail += (r.detail.empty() ? "" : "; ") + c.at("label").get<std::string>();
    }
  }
}

}  // namespace

FixtureResult check_fixture(const FixtureStore& store, const std::string& name, const ReportOptions& options) {
  const json& e = store.entry(name);
  FixtureResult r;
  r.name = name;
  r.kind = store.kind(name);
  r.citation = store.citation(name);
  try {
    if (r.kind == "homology") {
      check_homology(store, e, r);
    } else if (r.kind == "cohomology") {
      expect_equal(r, table_string(uct_cohomology(homology_of(store, e.at("homology").get<std::string>()))),
                   table_string(store.groups(name)));
    } else if (r.kind == "euler") {
      const long got = e.contains("space") ? euler_characteristic(compute_homology(space_complex(e.at("space").get<std::string>())))
                                           : euler_of(homology_of(store, e.at("table").get<std::string>()));
      expect_equal(r, std::to_string(got), std::to_string(e.at("value").get<long>()));
    } else if (r.kind == "poincare") {
      const auto got = poincare_polynomial(compute_homology(space_complex(e.at("space").get<std::string>())));
      expect_equal(r, list_string(got), list_string(e.at("coefficients").get<std::vector<long>>()));
    } else if (r.kind == "mod2") {
      const ChainComplex c = space_complex(e.at("space").get<std::string>());
      const auto direct = mod2_homology(c);
      expect_equal(r, list_string(direct), list_string(e.at("ranks").get<std::vector<std::size_t>>()));
      if (mod2_from_integral(compute_homology(c)) != direct) {
        r.pass = false;
        r.detail = "universal coefficients disagree with the mod-2 complex";
      }
    } else if (r.kind == "e2_page") {
      const BigradedPage page = e2_page(homology_of(store, e.at("base").get<std::string>()),
                                        homology_of(store, e.at("fiber").get<std::string>()));
      BigradedPage want;
      const auto& rows = e.at("rows");
      for (std::size_t q = 0; q < rows.size(); ++q)
        for (std::size_t p = 0; p < rows[q].size(); ++p)
          want.set(static_cast<int>(p), static_cast<int>(q), group_from_json(rows[q][p]));
      expect_equal(r, page.to_string(), want.to_string());
    } else if (r.kind == "spectral") {
      check_spectral(store, e, r, options);
    } else if (r.kind == "gysin") {
      check_gysin(store, e, r);
    } else if (r.kind == "ring") {
      check_ring(store, e, r);
    } else if (r.kind == "ring_hom") {
      check_ring_hom_fixture(store, e, r);
    } else if (r.kind == "form") {
      check_form(store, e, r);
    } else if (r.kind == "g2_identities") {
      check_identities(e, r, options);
    } else if (r.kind == "flow") {
      check_flow(e, r, options);
    } else if (r.kind == "hl_pair") {
      check_hl(e, r);
    } else {
      r.pass = false;
      r.detail = "unknown fixture kind";
    }
  } catch (const std::exception& ex) {
    r.pass = false;
    r.detail = ex.what();
  }
  return r;
}

std::vector<FixtureResult> run_report(const FixtureStore& store, const ReportOptions& options) {
  std::vector<std::string> names = options.only.empty() ? store.names() : options.only;
  std::sort(names.begin(), names.end());
  std::vector<FixtureResult> out;
  for (const auto& n : names) {
    if (!store.contains(n)) throw UnknownFixtureError("unknown fixture '" + n + "'");
    out.push_back(check_fixture(store, n, options));
  }
  return out;
}

bool all_pass(const std::vector<FixtureResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const FixtureResult& r) { return r.pass; });
}

json to_json(const FixtureResult& r) {
  json j = {{"name", r.name},         {"kind", r.kind},         {"citation", r.citation}, {"pass", r.pass},
            {"computed", r.computed}, {"expected", r.expected}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

json to_json(const std::vector<FixtureResult>& results) {
  json list = json::array();
  for (const auto& r : results) list.push_back(to_json(r));
  return {{"pass", all_pass(results)}, {"fixtures", list}};
}

std::string to_markdown(const std::vector<FixtureResult>& results) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass;
  os << "# Verification report\n\n" << passed << " of " << results.size() << " fixtures pass.\n\n";
  os << "| fixture | citation | status | computed | expected |\n|---|---|---|---|---|\n";
  const auto cell = [](std::string s) {
    std::string out;
    for (char c : s) out += c == '|' ? std::string("\\|") : std::string(1, c);
    return out;
  };
  for (const auto& r : results) {
    os << "| " << r.name << " | " << cell(r.citation) << " | " << (r.pass ? "pass" : "FAIL")
       << (r.detail.empty() ? "" : " (" + cell(r.detail) + ")") << " | " << cell(r.computed) << " | "
       << cell(r.expected) << " |\n";
  }
  return os.str();
}

}  // namespace g2topo

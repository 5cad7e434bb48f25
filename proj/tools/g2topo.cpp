#include <CLI11.hpp>
#include <g2topo/cells.hpp>
#include <g2topo/fixtures.hpp>
#include <g2topo/g2algebra.hpp>
#include <g2topo/gradedring.hpp>
#include <g2topo/homology.hpp>
#include <g2topo/report.hpp>
#include <g2topo/serialize.hpp>
#include <g2topo/specseq.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace g2topo;

namespace {

constexpr int kFail = 1;
constexpr int kUsage = 2;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

/// A file path, or a ring fixture name.
RingPresentation load_ring(const std::string& arg, const FixtureStore& store) {
  if (std::filesystem::exists(arg)) return presentation_from_json(read_json(arg));
  if (store.contains(arg) && store.kind(arg) == "ring") return presentation_from_json(store.entry(arg).at("presentation"));
  throw InputError("no presentation file or ring fixture named " + arg);
}

/// "x=d,y=-d" or a JSON object file.
std::map<std::string, std::string> parse_images(const std::string& arg) {
  std::map<std::string, std::string> out;
  if (std::filesystem::exists(arg)) return read_json(arg).get<std::map<std::string, std::string>>();
  std::stringstream ss(arg);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("image '" + item + "' is not of the form gen=poly");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

Eigen::Matrix<double, 7, 3> frame_of(const PlaneBasis<Rational>& p) {
  if (p.cols() != 3) throw InputError("a flow starts from three spanning vectors");
  Eigen::Matrix<double, 7, 3> m;
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = p(i).get_d();
  return m;
}

void print(const json& j, bool as_json, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact homology, spectral sequences, cohomology rings and G2 geometry"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  std::string fixtures;
  app.add_flag("--json", as_json, "Machine-readable JSON on stdout");
  app.add_option("--fixtures", fixtures, "Fixture file (default: $G2TOPO_FIXTURES or the bundled tables)");

  auto* homology = app.add_subcommand("homology", "Cellular homology of a named space or a complex file");
  std::string space, complex_file;
  bool markdown = false;
  auto* space_opt = homology->add_option("--space", space,
                                         "sphere:n, rp:n, grassmann:k:n, grassmann+:k:n, stiefel:k:n, so3, so4, product:AxB");
  homology->add_option("--complex", complex_file, "Chain complex JSON")->excludes(space_opt);
  homology->add_flag("--markdown", markdown, "Markdown table");

  auto* specseq = app.add_subcommand("specseq", "Serre spectral sequence replays and searches");
  specseq->require_subcommand(1);
  auto* replay = specseq->add_subcommand("replay", "Replay a named fibration");
  std::string problem_name;
  replay->add_option("name", problem_name, "Fibration name")->required();
  auto* solve_cmd = specseq->add_subcommand("solve", "Solve a problem file");
  std::string problem_file;
  solve_cmd->add_option("file", problem_file, "Problem JSON")->required()->check(CLI::ExistingFile);
  bool show_pages = false;
  specseq->add_flag("--pages", show_pages, "Print every page of each solution");

  auto* ring = app.add_subcommand("ring", "Graded ring presentations");
  ring->require_subcommand(1);
  auto* dims = ring->add_subcommand("dims", "Additive groups of a presentation");
  std::string ring_arg;
  int cutoff = 16;
  dims->add_option("presentation", ring_arg, "Presentation JSON file or ring fixture name")->required();
  dims->add_option("--cutoff", cutoff, "Highest degree")->check(CLI::NonNegativeNumber);
  auto* hom = ring->add_subcommand("hom", "Check a ring homomorphism");
  std::string src_arg, dst_arg, map_arg;
  std::vector<std::string> requires_;
  hom->add_option("source", src_arg)->required();
  hom->add_option("target", dst_arg)->required();
  hom->add_option("map", map_arg, "gen=poly,... or a JSON object file")->required();
  hom->add_option("--require", requires_, "Required image, e.g. 'x*y=d^2'");

  auto* g2 = app.add_subcommand("g2", "Octonionic geometry");
  g2->require_subcommand(1);
  auto* classify = g2->add_subcommand("classify", "Classify a 3-plane, or test a 4-plane for coassociativity");
  std::string plane_arg;
  classify->add_option("--plane", plane_arg, "e.g. \"e1,e2,e4\" or \"[1 0 0 0 0 0 0],e2,e3\"")->required();
  auto* flow = g2->add_subcommand("flow", "Gradient flow of Phi");
  std::string start_arg, dir = "up";
  FlowOptions flow_opts;
  flow->add_option("--start", start_arg, "Starting plane")->required();
  flow->add_option("--dir", dir, "up or down")->check(CLI::IsMember({"up", "down"}));
  flow->add_option("--step", flow_opts.step);
  flow->add_option("--tol", flow_opts.tol);
  flow->add_option("--max-iter", flow_opts.max_iterations);
  auto* hl = g2->add_subcommand("hl-pair", "Harvey-Lawson pair criterion");
  long p1 = 0, euler = 0;
  hl->add_option("--p1", p1, "<p1(normal bundle), [X]>")->required();
  hl->add_option("--euler", euler, "Euler number of the normal bundle")->required();

  auto* report = app.add_subcommand("report", "Check every fixture");
  std::vector<std::string> only;
  std::uint64_t seed = 0;
  std::string format = "markdown";
  report->add_option("--only", only, "Fixture names");
  auto* seed_opt = report->add_option("--seed", seed, "Seed for randomized checks");
  report->add_option("--format", format, "json or markdown")->check(CLI::IsMember({"json", "markdown"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    const FixtureStore store = fixtures.empty() ? FixtureStore::load_default() : FixtureStore::load(fixtures);

    if (*homology) {
      if (space.empty() && complex_file.empty()) throw InputError("homology needs --space or --complex");
      const ChainComplex c = space.empty() ? complex_from_json(read_json(complex_file)) : space_complex(space);
      const HomologyTable t = compute_homology(c, space.empty() ? complex_file : space);
      print(to_json(t), as_json, markdown ? to_markdown(t) : table_string(t.groups) + "\n");
      return 0;
    }

    if (*specseq) {
      SolveBounds bounds;
      const FibrationProblem p = *replay ? named_problem(problem_name, store, &bounds)
                                         : problem_from_json(read_json(problem_file), store, &bounds);
      const SolveResult r = solve(p, bounds);
      std::ostringstream text;
      text << p.name << ": " << r.solutions.size() << " solution(s), " << r.nodes << " search nodes"
           << (r.necessary_only ? ", some degrees checked by necessary conditions only" : "") << "\n";
      for (std::size_t i = 0; i < r.solutions.size(); ++i) {
        const Solution& s = r.solutions[i];
        text << "[" << i << "] base " << table_string(s.base) << "\n    total " << table_string(s.total) << "\n";
        if (show_pages)
          for (const auto& page : s.pages) text << to_markdown(page) << "\n";
      }
      print(to_json(r), as_json, text.str());
      return r.solutions.empty() ? kFail : 0;
    }

    if (*ring) {
      if (*dims) {
        const RingPresentation r = load_ring(ring_arg, store);
        const GradedDimensionTable t = graded_dimensions(r, cutoff);
        json j = {{"presentation", to_json(r)}, {"groups", to_json(t.groups)}, {"ranks", t.ranks()}};
        std::ostringstream text;
        for (std::size_t n = 0; n < t.groups.size(); ++n) text << n << "\t" << t.groups[n].to_string() << "\n";
        print(j, as_json, text.str());
        return 0;
      }
      std::vector<std::pair<std::string, std::string>> required;
      for (const auto& r : requires_) {
        const auto eq = r.find('=');
        if (eq == std::string::npos) throw InputError("--require needs lhs=rhs");
        required.emplace_back(r.substr(0, eq), r.substr(eq + 1));
      }
      const HomCheck h = check_ring_hom(load_ring(src_arg, store), load_ring(dst_arg, store), parse_images(map_arg), required);
      std::string text = h.pass ? "homomorphism\n" : "not a homomorphism\n";
      for (const auto& f : h.failures) text += "  " + f + "\n";
      print({{"pass", h.pass}, {"failures", h.failures}}, as_json, text);
      return h.pass ? 0 : kFail;
    }

    if (*g2) {
      if (*classify) {
        const PlaneBasis<Rational> p = parse_plane(plane_arg);
        if (p.cols() == 4) {
          const bool co = coassociative_check(p);
          print({{"coassociative", co}}, as_json, co ? "coassociative\n" : "not coassociative\n");
          return 0;
        }
        const PlaneClass c = classify_plane3(p);
        print({{"class", to_string(c.kind)}, {"phi_squared", c.phi_squared.get_str()}}, as_json,
              to_string(c.kind) + " (Phi^2 = " + c.phi_squared.get_str() + ")\n");
        return 0;
      }
      if (*flow) {
        flow_opts.direction = dir == "up" ? 1 : -1;
        const FlowResult r = flow_to_critical(frame_of(parse_plane(start_arg)), flow_opts);
        json frame = json::array();
        for (int j = 0; j < 3; ++j) {
          json col = json::array();
          for (int i = 0; i < 7; ++i) col.push_back(r.frame(i, j));
          frame.push_back(col);
        }
        const PlaneClass limit = classify_plane3(rationalize(r.frame));
        std::ostringstream text;
        text.precision(12);
        text << (r.converged ? "converged" : "did not converge") << " after " << r.iterations << " iterations, Phi = " << r.phi
             << "\nrationalized limit: " << to_string(limit.kind) << "\n";
        print({{"converged", r.converged}, {"iterations", r.iterations}, {"phi", r.phi}, {"frame", frame},
               {"limit_class", to_string(limit.kind)}},
              as_json, text.str());
        return r.converged ? 0 : kFail;
      }
      const bool ok = hl_pair_criterion(p1, euler);
      print({{"hl_pair", ok}}, as_json, ok ? "admits a Harvey-Lawson pair\n" : "criterion fails\n");
      return 0;
    }

    ReportOptions opts;
    opts.only = only;
    if (*seed_opt) opts.seed = seed;
    const auto results = run_report(store, opts);
    if (as_json || format == "json")
      std::cout << to_json(results).dump(2) << "\n";
    else
      std::cout << to_markdown(results);
    return all_pass(results) ? 0 : kFail;
  } catch (const UnknownFixtureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}

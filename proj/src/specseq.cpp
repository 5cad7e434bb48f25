#include <g2topo/fixtures.hpp>
#include <g2topo/specseq.hpp>

#include <algorithm>
#include <climits>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <tuple>

namespace g2topo {

FGAbelianGroup BigradedPage::at(int p, int q) const {
  const auto it = entries.find({p, q});
  return it == entries.end() ? FGAbelianGroup() : it->second;
}

void BigradedPage::set(int p, int q, FGAbelianGroup g) {
  if (p < 0 || q < 0) throw SpectralSequenceError("entries live in the first quadrant");
  if (g.is_zero())
    entries.erase({p, q});
  else
    entries[{p, q}] = std::move(g);
}

int BigradedPage::max_p() const {
  int m = -1;
  for (const auto& [pq, g] : entries) m = std::max(m, pq.first);
  return m;
}

int BigradedPage::max_q() const {
  int m = -1;
  for (const auto& [pq, g] : entries) m = std::max(m, pq.second);
  return m;
}

std::vector<FGAbelianGroup> BigradedPage::diagonal(int n) const {
  std::vector<FGAbelianGroup> out;
  for (int p = 0; p <= n; ++p) out.push_back(at(p, n - p));
  return out;
}

std::string BigradedPage::to_string() const {
  std::ostringstream os;
  os << "E^" << page << ":";
  for (const auto& [pq, g] : entries) os << " (" << pq.first << "," << pq.second << ")=" << g;
  return os.str();
}

bool operator==(const BigradedPage& a, const BigradedPage& b) { return a.entries == b.entries; }

BigradedPage e2_page(const std::vector<FGAbelianGroup>& base, const std::vector<FGAbelianGroup>& fiber,
                     bool base_simply_connected, bool override_untwisted) {
  if (!base_simply_connected && !override_untwisted)
    throw SpectralSequenceError("base is not simply connected; local coefficients are not supported");
  BigradedPage page;
  for (std::size_t p = 0; p <= base.size(); ++p)
    for (std::size_t q = 0; q < fiber.size(); ++q) {
      FGAbelianGroup g = p < base.size() ? tensor(base[p], fiber[q]) : FGAbelianGroup();
      if (p > 0) g = direct_sum(g, tor(base[p - 1], fiber[q]));
      page.set(static_cast<int>(p), static_cast<int>(q), g);
    }
  return page;
}

namespace {

Bidegree target_of(const Bidegree& x, int r) { return {x.first - r, x.second + r - 1}; }
Bidegree source_of(const Bidegree& x, int r) { return {x.first + r, x.second - r + 1}; }

IntegerMatrix kernel_lattice(const GroupHom& f) {
  const IntegerMatrix null = integer_kernel(hcat(f.matrix(), f.codomain().relations()));
  return null.topRows(f.matrix().cols());
}

std::string describe(const Bidegree& x) {
  return "(" + std::to_string(x.first) + "," + std::to_string(x.second) + ")";
}

}  // namespace

BigradedPage turn_page(const BigradedPage& page, const DifferentialAssignment& d) {
  const int r = page.page;
  if (d.page != r) throw SpectralSequenceError("differential is for page " + std::to_string(d.page));
  for (const auto& [src, f] : d.maps) {
    const Bidegree tgt = target_of(src, r);
    if (src.first < 0 || src.second < 0 || tgt.first < 0)
      throw SpectralSequenceError("differential from " + describe(src) + " leaves the first quadrant");
    if (!(f.domain() == page.at(src.first, src.second)) || !(f.codomain() == page.at(tgt.first, tgt.second)))
      throw SpectralSequenceError("differential from " + describe(src) + " does not match the page entries");
  }
  for (const auto& [src, f] : d.maps) {
    const auto next = d.maps.find(target_of(src, r));
    if (next != d.maps.end() && !compose(next->second, f).is_zero())
      throw SpectralSequenceError("d o d is nonzero at " + describe(src));
  }
  BigradedPage out;
  out.page = r + 1;
  for (const auto& [x, g] : page.entries) {
    const auto n = static_cast<Eigen::Index>(g.num_generators());
    const auto outgoing = d.maps.find(x);
    const auto incoming = d.maps.find(source_of(x, r));
    const IntegerMatrix k = outgoing != d.maps.end() ? kernel_lattice(outgoing->second)
                                                      : IntegerMatrix(IntegerMatrix::Identity(n, n));
    const IntegerMatrix b =
        incoming != d.maps.end() ? hcat(incoming->second.matrix(), g.relations()) : g.relations();
    out.set(x.first, x.second, Subquotient(k, b).group());
  }
  return out;
}

namespace {

bool all_zero(const std::vector<FGAbelianGroup>& layers) {
  return std::all_of(layers.begin(), layers.end(), [](const FGAbelianGroup& g) { return g.is_zero(); });
}

BigInt torsion_order(const std::vector<FGAbelianGroup>& layers) {
  BigInt o = 1;
  for (const auto& g : layers) o *= g.torsion_part().order();
  return o;
}

std::size_t total_rank(const std::vector<FGAbelianGroup>& layers) {
  std::size_t r = 0;
  for (const auto& g : layers) r += g.rank();
  return r;
}

std::vector<FGAbelianGroup> nonzero(const std::vector<FGAbelianGroup>& layers) {
  std::vector<FGAbelianGroup> out;
  for (const auto& g : layers)
    if (!g.is_zero()) out.push_back(g);
  return out;
}

}  // namespace

bool diagonal_supports(const std::vector<FGAbelianGroup>& layers, const FGAbelianGroup& total,
                       std::size_t max_extension_order, bool* necessary_only) {
  const auto ls = nonzero(layers);
  if (ls.empty()) return total.is_zero();
  if (total_rank(ls) != total.rank()) return false;
  const BigInt order = torsion_order(ls);
  if (order <= BigInt(static_cast<unsigned long>(max_extension_order))) {
    if (const auto ext = iterated_extensions(ls)) return ext->count(total) > 0;
  }
  if (necessary_only) *necessary_only = true;
  return total.torsion_part().order() <= order;
}

ConvergenceReport infinity_consistency(const BigradedPage& limit, const std::vector<FGAbelianGroup>& total,
                                       std::size_t max_extension_order) {
  ConvergenceReport rep;
  std::ostringstream detail;
  const int top = std::max(limit.max_p() + limit.max_q(), static_cast<int>(total.size()) - 1);
  for (int n = 0; n <= top; ++n) {
    const auto layers = limit.diagonal(n);
    const FGAbelianGroup t = n < static_cast<int>(total.size()) ? total[static_cast<std::size_t>(n)] : FGAbelianGroup();
    if (!diagonal_supports(layers, t, max_extension_order, &rep.necessary_only)) {
      rep.pass = false;
      rep.failing_degrees.push_back(n);
      detail << "degree " << n << ": no filtration with quotients";
      for (const auto& g : nonzero(layers)) detail << " " << g;
      if (nonzero(layers).empty()) detail << " (none)";
      detail << " gives " << t << "; ";
    }
  }
  rep.detail = detail.str();
  return rep;
}

namespace {

struct HomChoice {
  FGAbelianGroup ker;
  FGAbelianGroup coker;
  IntegerMatrix rep;
  IntegerMatrix proj;
};

void torsion_chains(const BigInt& max_exponent, std::size_t max_factors, std::vector<BigInt>& current,
                    std::vector<std::vector<BigInt>>& out) {
  out.push_back(current);
  if (current.size() == max_factors) return;
  const BigInt start = current.empty() ? BigInt(2) : current.back();
  for (BigInt d = start; d <= max_exponent; ++d) {
    if (!current.empty() && !divides(current.back(), d)) continue;
    current.push_back(d);
    torsion_chains(max_exponent, max_factors, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<BigInt>> invariant_chains(const BigInt& max_exponent, std::size_t max_factors) {
  std::vector<std::vector<BigInt>> out;
  std::vector<BigInt> current;
  torsion_chains(max_exponent, max_factors, current, out);
  return out;
}

BigInt hom_enumeration_size(const FGAbelianGroup& a, const FGAbelianGroup& b, const BigInt& bound) {
  BigInt total = 1;
  for (std::size_t j = 0; j < a.num_generators(); ++j) {
    const BigInt s = a.generator_order(j);
    for (std::size_t i = 0; i < b.num_generators(); ++i) {
      const BigInt e = b.generator_order(i);
      if (e == 0)
        total *= s == 0 ? BigInt(2 * bound + 1) : BigInt(1);
      else
        total *= s == 0 ? e : BigInt(gcd(s, e));
    }
  }
  return total;
}

std::vector<HomChoice> compute_hom_choices(const FGAbelianGroup& a, const FGAbelianGroup& b, const BigInt& bound) {
  std::vector<IntegerMatrix> mats;
  const auto na = static_cast<Eigen::Index>(a.num_generators());
  const auto nb = static_cast<Eigen::Index>(b.num_generators());
  if (a.is_finite() == false && b.is_finite() == false && a.torsion().empty() && b.torsion().empty()) {
    // Free to free: one representative per Smith form.
    const std::size_t m = std::min(a.rank(), b.rank());
    for (std::size_t r = 0; r <= m; ++r) {
      std::vector<std::vector<BigInt>> chains;
      std::function<void(std::vector<BigInt>&)> go = [&](std::vector<BigInt>& cur) {
        if (cur.size() == r) {
          chains.push_back(cur);
          return;
        }
        const BigInt start = cur.empty() ? BigInt(1) : cur.back();
        for (BigInt d = start; d <= bound; ++d) {
          if (!cur.empty() && !divides(cur.back(), d)) continue;
          cur.push_back(d);
          go(cur);
          cur.pop_back();
        }
      };
      std::vector<BigInt> cur;
      go(cur);
      for (const auto& c : chains) {
        IntegerMatrix mat = IntegerMatrix::Zero(nb, na);
        for (std::size_t i = 0; i < c.size(); ++i) mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = c[i];
        mats.push_back(mat);
      }
    }
  } else {
    if (hom_enumeration_size(a, b, bound) > 200000)
      throw SearchBudgetExceeded("too many homomorphisms " + a.to_string() + " -> " + b.to_string());
    for (const auto& h : enumerate_homs(a, b, bound)) mats.push_back(h.matrix());
  }
  std::map<std::pair<FGAbelianGroup, FGAbelianGroup>, HomChoice> seen;
  for (const auto& mat : mats) {
    const GroupHom h(a, b, mat);
    const Subquotient cok = h.cokernel();
    auto key = std::make_pair(h.kernel().group(), cok.group());
    if (seen.count(key)) continue;
    HomChoice c{key.first, key.second, h.matrix(), cok.coordinates(IntegerMatrix(IntegerMatrix::Identity(nb, nb)))};
    seen.emplace(std::move(key), std::move(c));
  }
  std::vector<HomChoice> out;
  for (auto& [k, c] : seen) out.push_back(std::move(c));
  return out;
}

struct ChainOutcome {
  std::vector<FGAbelianGroup> result;
  std::vector<IntegerMatrix> maps;
};

using SolutionKey = std::tuple<std::vector<FGAbelianGroup>, std::vector<FGAbelianGroup>,
                               std::map<Bidegree, FGAbelianGroup>>;

struct TotalSpec {
  std::vector<std::optional<FGAbelianGroup>> table;
  std::vector<GroupConstraint> constraints;  // per-degree, total role
  std::optional<std::size_t> duality_dim;
};

bool satisfies(const FGAbelianGroup& g, const GroupConstraint& c) {
  switch (c.kind) {
    case GroupConstraint::Kind::Equals:
      return g == c.group;
    case GroupConstraint::Kind::FreeRank:
      return g.rank() == c.value;
    case GroupConstraint::Kind::Cyclic:
      return g.is_cyclic();
    case GroupConstraint::Kind::PoincareDuality:
      return true;
  }
  return true;
}

class Solver {
 public:
  Solver(const SolveBounds& bounds, const TotalSpec& total, std::size_t& nodes,
         std::map<std::pair<FGAbelianGroup, FGAbelianGroup>, std::vector<HomChoice>>& hom_cache,
         std::map<std::vector<FGAbelianGroup>, std::optional<std::set<FGAbelianGroup>>>& ext_cache)
      : bounds_(bounds), total_(total), nodes_(nodes), hom_cache_(hom_cache), ext_cache_(ext_cache) {}

  int check_limit = INT_MAX;
  bool existence_only = false;
  bool found = false;
  bool necessary_only = false;
  std::map<SolutionKey, Solution> solutions;
  std::vector<FGAbelianGroup> base;

  void run(const BigradedPage& e2, int last_page) {
    last_page_ = last_page;
    top_ = std::max(e2.max_p() + e2.max_q(), static_cast<int>(total_.table.size()) - 1);
    path_pages_.clear();
    path_diffs_.clear();
    explore(e2, 2);
  }

 private:
  const SolveBounds& bounds_;
  const TotalSpec& total_;
  std::size_t& nodes_;
  std::map<std::pair<FGAbelianGroup, FGAbelianGroup>, std::vector<HomChoice>>& hom_cache_;
  std::map<std::vector<FGAbelianGroup>, std::optional<std::set<FGAbelianGroup>>>& ext_cache_;
  std::map<std::vector<FGAbelianGroup>, std::vector<ChainOutcome>> chain_cache_;
  std::set<std::pair<int, std::map<Bidegree, FGAbelianGroup>>> visited_;
  std::vector<BigradedPage> path_pages_;
  std::vector<DifferentialAssignment> path_diffs_;
  int last_page_ = 1;
  int top_ = 0;

  void tick() {
    if (++nodes_ > bounds_.node_budget)
      throw SearchBudgetExceeded("search exceeded the node budget of " + std::to_string(bounds_.node_budget));
  }

  std::optional<FGAbelianGroup> total_at(int n) const {
    if (n < static_cast<int>(total_.table.size())) return total_.table[static_cast<std::size_t>(n)];
    return FGAbelianGroup();
  }

  const std::optional<std::set<FGAbelianGroup>>& extensions(const std::vector<FGAbelianGroup>& layers) {
    const auto ls = nonzero(layers);
    auto it = ext_cache_.find(ls);
    if (it == ext_cache_.end()) {
      std::optional<std::set<FGAbelianGroup>> ext;
      if (torsion_order(ls) <= BigInt(static_cast<unsigned long>(bounds_.max_extension_order)))
        ext = iterated_extensions(ls);
      it = ext_cache_.emplace(ls, std::move(ext)).first;
    }
    return it->second;
  }

  bool supports(const std::vector<FGAbelianGroup>& layers, const FGAbelianGroup& t) {
    const auto ls = nonzero(layers);
    if (ls.empty()) return t.is_zero();
    if (total_rank(ls) != t.rank()) return false;
    const auto& ext = extensions(ls);
    if (ext) return ext->count(t) > 0;
    necessary_only = true;
    return t.torsion_part().order() <= torsion_order(ls);
  }

  std::vector<FGAbelianGroup> candidates(int n, const std::vector<FGAbelianGroup>& layers) {
    const auto& ext = extensions(layers);
    if (!ext) throw SearchBudgetExceeded("extension problem in degree " + std::to_string(n) + " is too large");
    std::vector<FGAbelianGroup> out;
    for (const auto& g : *ext) {
      bool ok = true;
      for (const auto& c : total_.constraints)
        if (static_cast<int>(c.degree) == n && !satisfies(g, c)) ok = false;
      if (ok) out.push_back(g);
    }
    return out;
  }

  bool diagonal_ok(int n, const std::vector<FGAbelianGroup>& layers) {
    if (n > check_limit) return true;
    const auto t = total_at(n);
    if (t) return supports(layers, *t);
    return !candidates(n, layers).empty();
  }

  // Necessary condition for a diagonal that may still shrink.
  bool diagonal_may_work(int n, const std::vector<FGAbelianGroup>& layers) const {
    if (n > check_limit) return true;
    const auto t = total_at(n);
    if (!t) return true;
    if (total_rank(layers) < t->rank()) return false;
    return !(all_zero(layers) && !t->is_zero());
  }

  const std::vector<HomChoice>& hom_choices(const FGAbelianGroup& a, const FGAbelianGroup& b) {
    auto key = std::make_pair(a, b);
    auto it = hom_cache_.find(key);
    if (it == hom_cache_.end()) it = hom_cache_.emplace(key, compute_hom_choices(a, b, bounds_.max_exponent)).first;
    return it->second;
  }

  const std::vector<ChainOutcome>& chain_outcomes(const std::vector<FGAbelianGroup>& groups) {
    auto it = chain_cache_.find(groups);
    if (it != chain_cache_.end()) return it->second;
    std::map<std::vector<FGAbelianGroup>, ChainOutcome> seen;
    ChainOutcome cur{std::vector<FGAbelianGroup>(groups.size()), std::vector<IntegerMatrix>(groups.size() - 1)};
    std::function<void(std::size_t, const FGAbelianGroup&, const IntegerMatrix&)> go =
        [&](std::size_t i, const FGAbelianGroup& c, const IntegerMatrix& proj) {
          tick();
          if (i + 1 == groups.size()) {
            cur.result[i] = c;
            seen.emplace(cur.result, cur);
            return;
          }
          for (const auto& choice : hom_choices(c, groups[i + 1])) {
            cur.result[i] = choice.ker;
            cur.maps[i] = choice.rep * proj;
            go(i + 1, choice.coker, choice.proj);
          }
        };
    const auto n0 = static_cast<Eigen::Index>(groups[0].num_generators());
    go(0, groups[0], IntegerMatrix::Identity(n0, n0));
    std::vector<ChainOutcome> out;
    for (auto& [k, v] : seen) out.push_back(std::move(v));
    return chain_cache_.emplace(groups, std::move(out)).first->second;
  }

  bool frozen_after(const BigradedPage& page, const Bidegree& x, int r) const {
    for (int s = r + 1; s <= last_page_; ++s) {
      const Bidegree t = target_of(x, s), u = source_of(x, s);
      if (t.first >= 0 && !page.at(t.first, t.second).is_zero()) return false;
      if (u.second >= 0 && !page.at(u.first, u.second).is_zero()) return false;
    }
    return true;
  }

  void explore(const BigradedPage& page, int r) {
    if (existence_only && found) return;
    tick();
    if (r > last_page_) {
      finish(page);
      return;
    }
    if (!visited_.insert({r, page.entries}).second) return;

    std::vector<std::vector<Bidegree>> chains;
    for (const auto& [x, g] : page.entries) {
      const Bidegree prev = source_of(x, r);
      if (prev.second >= 0 && !page.at(prev.first, prev.second).is_zero()) continue;
      std::vector<Bidegree> chain{x};
      for (Bidegree y = target_of(x, r); y.first >= 0 && !page.at(y.first, y.second).is_zero(); y = target_of(y, r))
        chain.push_back(y);
      if (chain.size() >= 2) chains.push_back(std::move(chain));
    }

    // Diagonal n can be judged once every chain touching it is chosen, if nothing later can change it.
    std::vector<int> last_chain(static_cast<std::size_t>(top_ + 1), -1);
    std::vector<bool> frozen(static_cast<std::size_t>(top_ + 1), true);
    for (const auto& [x, g] : page.entries)
      if (!frozen_after(page, x, r)) frozen[static_cast<std::size_t>(x.first + x.second)] = false;
    for (std::size_t c = 0; c < chains.size(); ++c)
      for (const auto& x : chains[c]) last_chain[static_cast<std::size_t>(x.first + x.second)] = static_cast<int>(c);
    for (int n = 0; n <= top_; ++n) {
      const auto layers = page.diagonal(n);
      const auto un = static_cast<std::size_t>(n);
      if (!diagonal_may_work(n, layers)) return;
      if (frozen[un] && last_chain[un] < 0 && !diagonal_ok(n, layers)) return;
    }

    BigradedPage next = page;
    next.page = r + 1;
    DifferentialAssignment d{r, {}};
    path_pages_.push_back(page);
    std::function<void(std::size_t)> go = [&](std::size_t ci) {
      if (existence_only && found) return;
      if (ci == chains.size()) {
        path_diffs_.push_back(d);
        explore(next, r + 1);
        path_diffs_.pop_back();
        return;
      }
      const auto& chain = chains[ci];
      std::vector<FGAbelianGroup> groups;
      for (const auto& x : chain) groups.push_back(page.at(x.first, x.second));
      for (const auto& outcome : chain_outcomes(groups)) {
        tick();
        for (std::size_t i = 0; i < chain.size(); ++i) next.set(chain[i].first, chain[i].second, outcome.result[i]);
        bool ok = true;
        for (int n = 0; n <= top_ && ok; ++n) {
          const auto un = static_cast<std::size_t>(n);
          if (last_chain[un] != static_cast<int>(ci)) continue;
          const auto layers = next.diagonal(n);
          ok = frozen[un] ? diagonal_ok(n, layers) : diagonal_may_work(n, layers);
        }
        if (!ok) continue;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
          const GroupHom h(groups[i], groups[i + 1], outcome.maps[i]);
          if (!h.is_zero()) d.maps[chain[i]] = h;
        }
        go(ci + 1);
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) d.maps.erase(chain[i]);
      }
      for (std::size_t i = 0; i < chain.size(); ++i) next.set(chain[i].first, chain[i].second, groups[i]);
    };
    go(0);
    path_pages_.pop_back();
  }

  void finish(const BigradedPage& limit) {
    for (int n = 0; n <= top_; ++n)
      if (!diagonal_ok(n, limit.diagonal(n))) return;
    if (existence_only) {
      found = true;
      return;
    }
    const std::size_t len = total_.table.size();
    std::vector<std::vector<FGAbelianGroup>> options(len);
    for (std::size_t n = 0; n < len; ++n) {
      if (total_.table[n])
        options[n] = {*total_.table[n]};
      else
        options[n] = candidates(static_cast<int>(n), limit.diagonal(static_cast<int>(n)));
    }
    std::vector<FGAbelianGroup> table(len);
    std::function<void(std::size_t)> go = [&](std::size_t n) {
      if (n == len) {
        if (total_.duality_dim && !poincare_duality_check(table, *total_.duality_dim).pass) return;
        SolutionKey key{base, table, limit.entries};
        if (solutions.count(key)) return;
        Solution s{base, table, path_pages_, path_diffs_};
        s.pages.push_back(limit);
        solutions.emplace(std::move(key), std::move(s));
        return;
      }
      for (const auto& g : options[n]) {
        table[n] = g;
        go(n + 1);
      }
    };
    go(0);
  }
};

std::optional<std::size_t> duality_dim(const std::vector<GroupConstraint>& cs, SpaceRole role) {
  for (const auto& c : cs)
    if (c.space == role && c.kind == GroupConstraint::Kind::PoincareDuality) return c.value;
  return std::nullopt;
}

bool partial_duality_ok(const std::vector<FGAbelianGroup>& assigned, std::size_t dim) {
  const std::size_t m = assigned.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (k > dim) {
      if (!assigned[k].is_zero()) return false;
      continue;
    }
    const std::size_t j = dim - k;
    if (j < m && assigned[j].rank() != assigned[k].rank()) return false;
    if (dim >= k + 1) {
      const std::size_t t = dim - k - 1;
      if (t < m && assigned[t].torsion() != assigned[k].torsion()) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<std::pair<FGAbelianGroup, FGAbelianGroup>> hom_outcomes(const FGAbelianGroup& a,
                                                                    const FGAbelianGroup& b,
                                                                    const BigInt& bound) {
  std::vector<std::pair<FGAbelianGroup, FGAbelianGroup>> out;
  for (const auto& c : compute_hom_choices(a, b, bound)) out.emplace_back(c.ker, c.coker);
  return out;
}

SolveResult solve(const FibrationProblem& problem, const SolveBounds& bounds) {
  if (problem.fiber.empty() || problem.base.empty() || problem.total.empty())
    throw std::invalid_argument("fibration problem needs fiber, base and total tables");
  if (!problem.base_simply_connected)
    throw SpectralSequenceError("base is not simply connected; local coefficients are not supported");

  TotalSpec total{problem.total, {}, duality_dim(problem.constraints, SpaceRole::Total)};
  std::vector<GroupConstraint> base_constraints;
  for (const auto& c : problem.constraints) {
    if (c.kind == GroupConstraint::Kind::PoincareDuality) continue;
    (c.space == SpaceRole::Total ? total.constraints : base_constraints).push_back(c);
  }
  const auto base_dim = duality_dim(problem.constraints, SpaceRole::Base);

  const int last_page = std::min(static_cast<int>(problem.base.size()), static_cast<int>(problem.fiber.size()));
  SolveResult result;
  std::map<std::pair<FGAbelianGroup, FGAbelianGroup>, std::vector<HomChoice>> hom_cache;
  std::map<std::vector<FGAbelianGroup>, std::optional<std::set<FGAbelianGroup>>> ext_cache;
  std::map<SolutionKey, Solution> all;

  std::vector<FGAbelianGroup> candidates_pool;
  for (std::size_t r = 0; r <= bounds.max_rank; ++r)
    for (const auto& chain : invariant_chains(bounds.max_exponent, bounds.max_torsion_factors))
      candidates_pool.emplace_back(r, chain);
  std::sort(candidates_pool.begin(), candidates_pool.end());

  auto base_options = [&](std::size_t p) {
    std::vector<FGAbelianGroup> opts;
    if (problem.base[p])
      opts = {*problem.base[p]};
    else if (p == 0)
      opts = {FGAbelianGroup::free(1)};
    else if (p == 1)
      opts = {FGAbelianGroup()};
    else
      opts = candidates_pool;
    std::vector<FGAbelianGroup> out;
    for (const auto& g : opts) {
      bool ok = true;
      for (const auto& c : base_constraints)
        if (c.degree == p && !satisfies(g, c)) ok = false;
      if (ok) out.push_back(g);
    }
    return out;
  };

  bool any_unknown_base = false;
  for (const auto& g : problem.base) any_unknown_base = any_unknown_base || !g;

  std::vector<FGAbelianGroup> assigned;
  std::function<void()> go = [&]() {
    const std::size_t m = assigned.size();
    if (m == problem.base.size()) {
      Solver s(bounds, total, result.nodes, hom_cache, ext_cache);
      s.base = assigned;
      s.run(e2_page(assigned, problem.fiber), last_page);
      result.necessary_only = result.necessary_only || s.necessary_only;
      for (auto& [k, v] : s.solutions) all.emplace(k, std::move(v));
      return;
    }
    for (const auto& g : base_options(m)) {
      assigned.push_back(g);
      bool ok = !base_dim || partial_duality_ok(assigned, *base_dim);
      const int limit = static_cast<int>(m) - last_page + 1;
      if (ok && any_unknown_base && limit >= 0 && m + 1 < problem.base.size()) {
        Solver s(bounds, total, result.nodes, hom_cache, ext_cache);
        s.check_limit = limit;
        s.existence_only = true;
        s.run(e2_page(assigned, problem.fiber), last_page);
        ok = s.found;
      }
      if (ok) go();
      assigned.pop_back();
    }
  };
  go();
  for (auto& [k, v] : all) result.solutions.push_back(std::move(v));
  return result;
}

LongExactTemplate gysin_segment(const std::vector<std::optional<FGAbelianGroup>>& base_cohomology,
                                const std::vector<std::optional<FGAbelianGroup>>& total_cohomology, int r, int m,
                                const std::string& base_name, const std::string& total_name) {
  if (r < 1) throw std::invalid_argument("sphere fiber dimension must be positive");
  auto lookup = [](const std::vector<std::optional<FGAbelianGroup>>& t, int d) -> std::optional<FGAbelianGroup> {
    if (d < 0 || d >= static_cast<int>(t.size())) return FGAbelianGroup();
    return t[static_cast<std::size_t>(d)];
  };
  LongExactTemplate t;
  t.sphere_dim = r;
  const std::vector<std::pair<bool, int>> shape{{false, m - r - 1}, {false, m}, {true, m}, {false, m - r}, {false, m + 1}};
  for (const auto& [is_total, d] : shape) {
    t.labels.push_back("H^" + std::to_string(d) + "(" + (is_total ? total_name : base_name) + ")");
    t.nodes.push_back(lookup(is_total ? total_cohomology : base_cohomology, d));
  }
  t.maps.assign(shape.size() - 1, std::nullopt);
  return t;
}

bool GysinResult::forced() const {
  return std::all_of(candidates.begin(), candidates.end(), [](const auto& kv) { return kv.second.size() == 1; });
}

GysinResult gysin_solve(const LongExactTemplate& t, const BigInt& free_bound) {
  const std::size_t n = t.nodes.size();
  if (n == 0 || t.maps.size() + 1 != n) throw std::invalid_argument("template needs one map between consecutive nodes");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!t.maps[i]) continue;
    if (!t.nodes[i] || !t.nodes[i + 1] || !(t.maps[i]->domain() == *t.nodes[i]) ||
        !(t.maps[i]->codomain() == *t.nodes[i + 1]))
      throw std::invalid_argument("map " + std::to_string(i) + " does not match its nodes");
  }
  auto label = [&](std::size_t i) { return i < t.labels.size() ? t.labels[i] : "node " + std::to_string(i); };
  std::vector<std::size_t> unknown;
  for (std::size_t i = 0; i < n; ++i)
    if (!t.nodes[i]) {
      if ((i > 0 && !t.nodes[i - 1]) || (i + 1 < n && !t.nodes[i + 1]))
        throw std::invalid_argument("adjacent unknown nodes at " + label(i));
      unknown.push_back(i);
    }
  auto is_zero_node = [&](std::size_t i) { return t.nodes[i] && t.nodes[i]->is_zero(); };

  // Maps that must be known or enumerated: those between two known nodes.
  std::vector<std::size_t> free_maps;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!t.maps[i] && t.nodes[i] && t.nodes[i + 1]) free_maps.push_back(i);
  std::vector<std::vector<GroupHom>> choices;
  BigInt combos = 1;
  for (auto i : free_maps) {
    choices.push_back(enumerate_homs(*t.nodes[i], *t.nodes[i + 1], free_bound));
    combos *= static_cast<unsigned long>(choices.back().size());
  }
  if (combos > 1000000) throw SearchBudgetExceeded("too many candidate maps in the exact sequence");

  GysinResult res;
  res.filled = t;
  for (auto i : unknown) res.candidates[i];
  bool any = false;
  std::vector<std::optional<GroupHom>> maps = t.maps;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k < free_maps.size()) {
      for (const auto& h : choices[k]) {
        maps[free_maps[k]] = h;
        go(k + 1);
      }
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (!t.nodes[i - 1] || !t.nodes[i] || !t.nodes[i + 1]) continue;
      if (!exact_sequence_check({*t.nodes[i - 1], *t.nodes[i], *t.nodes[i + 1]}, {*maps[i - 1], *maps[i]}).pass) return;
    }
    std::map<std::size_t, std::set<FGAbelianGroup>> local;
    for (auto i : unknown) {
      FGAbelianGroup sub, quot;
      if (i == 0 || i + 1 == n) throw std::invalid_argument("not enough known nodes around " + label(i));
      if (!is_zero_node(i - 1)) {
        if (i < 2) throw std::invalid_argument("not enough known nodes before " + label(i));
        sub = maps[i - 2]->cokernel().group();
      }
      if (!is_zero_node(i + 1)) {
        if (i + 2 >= n) throw std::invalid_argument("not enough known nodes after " + label(i));
        quot = maps[i + 1]->kernel().group();
      }
      const auto mids = extension_middles(sub, quot);
      if (!mids) throw SearchBudgetExceeded("extension problem at " + label(i) + " is too large");
      local[i] = *mids;
    }
    any = true;
    for (auto& [i, s] : local) res.candidates[i].insert(s.begin(), s.end());
  };
  go(0);
  if (!any) throw InconsistentTemplateError("no exact filling of the sequence exists");
  for (const auto& [i, s] : res.candidates)
    if (s.size() == 1) res.filled.nodes[i] = *s.begin();
  return res;
}

namespace {

std::vector<std::optional<FGAbelianGroup>> table_from_json(const json& j, const json& parent, const std::string& role,
                                                           const FixtureStore& store) {
  std::vector<std::optional<FGAbelianGroup>> out;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "?") {
      if (!parent.contains(role + "_top")) throw std::invalid_argument("unknown " + role + " needs '" + role + "_top'");
      out.assign(parent.at(role + "_top").get<std::size_t>() + 1, std::nullopt);
      return out;
    }
    std::vector<FGAbelianGroup> groups;
    if (store.contains(s) && store.kind(s) == "homology")
      groups = store.groups(s);
    else
      groups = compute_homology(space_complex(s)).groups;
    for (auto& g : groups) out.emplace_back(std::move(g));
    return out;
  }
  if (!j.is_array()) throw std::invalid_argument(role + " must be a name, \"?\" or a table");
  for (const auto& e : j) {
    if (e.is_string() && e.get<std::string>() == "?")
      out.emplace_back(std::nullopt);
    else
      out.emplace_back(group_from_json(e));
  }
  return out;
}

}  // namespace

FibrationProblem problem_from_json(const json& j, const FixtureStore& store, SolveBounds* bounds) {
  for (const char* key : {"fiber", "base", "total"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("problem needs '") + key + "'");
  FibrationProblem p;
  p.name = j.value("name", "");
  for (const auto& g : table_from_json(j.at("fiber"), j, "fiber", store)) {
    if (!g) throw std::invalid_argument("fiber homology must be known");
    p.fiber.push_back(*g);
  }
  p.base = table_from_json(j.at("base"), j, "base", store);
  p.total = table_from_json(j.at("total"), j, "total", store);
  p.base_simply_connected = j.value("simply_connected", true);
  if (j.contains("constraints"))
    for (const auto& c : j.at("constraints")) {
      GroupConstraint gc;
      const auto space = c.value("space", "total");
      if (space != "base" && space != "total") throw std::invalid_argument("constraint space must be base or total");
      gc.space = space == "base" ? SpaceRole::Base : SpaceRole::Total;
      if (c.contains("poincare_duality")) {
        gc.kind = GroupConstraint::Kind::PoincareDuality;
        gc.value = c.at("poincare_duality").get<std::size_t>();
      } else {
        if (!c.contains("degree")) throw std::invalid_argument("constraint needs a degree");
        gc.degree = c.at("degree").get<std::size_t>();
        if (c.contains("group")) {
          gc.kind = GroupConstraint::Kind::Equals;
          gc.group = group_from_json(c.at("group"));
        } else if (c.contains("free_rank")) {
          gc.kind = GroupConstraint::Kind::FreeRank;
          gc.value = c.at("free_rank").get<std::size_t>();
        } else if (c.value("cyclic", false)) {
          gc.kind = GroupConstraint::Kind::Cyclic;
        } else {
          throw std::invalid_argument("unrecognized constraint " + c.dump());
        }
      }
      p.constraints.push_back(gc);
    }
  if (bounds && j.contains("bounds")) {
    const json& b = j.at("bounds");
    if (b.contains("rank")) bounds->max_rank = b.at("rank").get<std::size_t>();
    if (b.contains("exponent")) bounds->max_exponent = bigint_from_json(b.at("exponent"));
    if (b.contains("torsion_factors")) bounds->max_torsion_factors = b.at("torsion_factors").get<std::size_t>();
    if (b.contains("node_budget")) bounds->node_budget = b.at("node_budget").get<std::size_t>();
    if (b.contains("max_extension_order")) bounds->max_extension_order = b.at("max_extension_order").get<std::size_t>();
  }
  return p;
}

std::vector<std::string> replay_names() {
  return {"so3-v37-g37", "s1-v27-g27", "s4-v37-v27", "su3-g2-s6", "so4-g2-ass"};
}

std::string problems_dir() {
  if (const char* env = std::getenv("G2TOPO_PROBLEMS"); env && *env) return env;
  return std::string(G2TOPO_DATA_DIR) + "/problems";
}

FibrationProblem named_problem(const std::string& name, const FixtureStore& store, SolveBounds* bounds) {
  const auto names = replay_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw std::invalid_argument("unknown fibration '" + name + "'");
  const std::string path = problems_dir() + "/" + name + ".json";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file " + path);
  json j;
  in >> j;
  FibrationProblem p = problem_from_json(j, store, bounds);
  if (p.name.empty()) p.name = name;
  return p;
}

json to_json(const BigradedPage& page) {
  json entries = json::array();
  for (const auto& [x, g] : page.entries) entries.push_back({{"p", x.first}, {"q", x.second}, {"group", to_json(g)}});
  return {{"page", page.page}, {"entries", entries}};
}

json to_json(const Solution& s) {
  json pages = json::array();
  for (const auto& p : s.pages) pages.push_back(to_json(p));
  json diffs = json::array();
  for (const auto& d : s.differentials) {
    json maps = json::array();
    for (const auto& [src, h] : d.maps) {
      const Bidegree tgt = target_of(src, d.page);
      maps.push_back({{"source", {src.first, src.second}},
                      {"target", {tgt.first, tgt.second}},
                      {"rows", h.matrix().rows()},
                      {"cols", h.matrix().cols()},
                      {"matrix", to_json(h.matrix())}});
    }
    diffs.push_back({{"page", d.page}, {"maps", maps}});
  }
  return {{"base", to_json(s.base)},
          {"total", to_json(s.total)},
          {"limit", to_json(s.limit())},
          {"pages", pages},
          {"differentials", diffs}};
}

json to_json(const SolveResult& r) {
  json sols = json::array();
  for (const auto& s : r.solutions) sols.push_back(to_json(s));
  return {{"count", r.solutions.size()}, {"nodes", r.nodes}, {"necessary_only", r.necessary_only}, {"solutions", sols}};
}

std::string to_markdown(const BigradedPage& page) {
  std::ostringstream os;
  const int mp = page.max_p(), mq = page.max_q();
  os << "| q \\ p |";
  for (int p = 0; p <= mp; ++p) os << " " << p << " |";
  os << "\n|---:|";
  for (int p = 0; p <= mp; ++p) os << ":---:|";
  os << "\n";
  for (int q = mq; q >= 0; --q) {
    os << "| " << q << " |";
    for (int p = 0; p <= mp; ++p) os << " " << page.at(p, q) << " |";
    os << "\n";
  }
  return os.str();
}

}  // namespace g2topo

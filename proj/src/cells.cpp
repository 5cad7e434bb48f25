#include <g2topo/cells.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <stdexcept>

namespace g2topo {

ChainComplex::ChainComplex(std::vector<std::size_t> ranks, std::vector<IntegerMatrix> boundaries,
                           std::vector<std::vector<std::string>> labels)
    : ranks_(std::move(ranks)), boundaries_(std::move(boundaries)), labels_(std::move(labels)) {
  const std::size_t expected = ranks_.empty() ? 0 : ranks_.size() - 1;
  if (boundaries_.size() != expected) throw MalformedComplexError("one boundary matrix per positive degree");
  for (std::size_t d = 1; d < ranks_.size(); ++d) {
    const auto& m = boundaries_[d - 1];
    if (m.rows() != static_cast<Eigen::Index>(ranks_[d - 1]) || m.cols() != static_cast<Eigen::Index>(ranks_[d]))
      throw MalformedComplexError("boundary " + std::to_string(d) + " has the wrong shape");
  }
  for (std::size_t d = 2; d < ranks_.size(); ++d)
    if (!is_zero(boundaries_[d - 2] * boundaries_[d - 1]))
      throw MalformedComplexError("boundary composite nonzero in degree " + std::to_string(d));
  if (labels_.empty()) {
    for (std::size_t d = 0; d < ranks_.size(); ++d) {
      labels_.emplace_back();
      for (std::size_t i = 0; i < ranks_[d]; ++i)
        labels_.back().push_back("c" + std::to_string(d) + "_" + std::to_string(i));
    }
  }
  if (labels_.size() != ranks_.size()) throw std::invalid_argument("labels must cover every degree");
  for (std::size_t d = 0; d < ranks_.size(); ++d)
    if (labels_[d].size() != ranks_[d]) throw std::invalid_argument("one label per cell");
}

IntegerMatrix ChainComplex::boundary(std::size_t d) const {
  if (d >= 1 && d < ranks_.size()) return boundaries_[d - 1];
  return IntegerMatrix::Zero(static_cast<Eigen::Index>(d == 0 ? 0 : rank(d - 1)), static_cast<Eigen::Index>(rank(d)));
}

void ChainComplex::set_sheets(std::vector<std::vector<SheetIncidence>> sheets) {
  if (sheets.size() != ranks_.size()) throw std::invalid_argument("sheet data must cover every degree");
  for (std::size_t d = 1; d < ranks_.size(); ++d) {
    IntegerMatrix m = IntegerMatrix::Zero(static_cast<Eigen::Index>(ranks_[d - 1]), static_cast<Eigen::Index>(ranks_[d]));
    for (const auto& s : sheets[d]) {
      if (s.cell >= ranks_[d] || s.face >= ranks_[d - 1]) throw std::invalid_argument("sheet refers to a missing cell");
      for (auto c : s.loop)
        if (c >= rank(1)) throw std::invalid_argument("sheet loop refers to a missing 1-cell");
      m(static_cast<Eigen::Index>(s.face), static_cast<Eigen::Index>(s.cell)) += s.sign;
    }
    if (m != boundaries_[d - 1]) throw std::invalid_argument("sheets do not sum to the boundary in degree " + std::to_string(d));
  }
  sheets_ = std::move(sheets);
}

SchubertSymbol::SchubertSymbol(std::size_t k_, std::size_t n_, std::vector<std::size_t> jumps_)
    : k(k_), n(n_), jumps(std::move(jumps_)) {
  if (k == 0 || k >= n) throw std::invalid_argument("Schubert symbol needs 1 <= k < n");
  if (jumps.size() != k) throw std::invalid_argument("Schubert symbol needs k jumps");
  for (std::size_t i = 0; i < k; ++i) {
    if (jumps[i] > n - k) throw std::invalid_argument("Schubert jump out of range");
    if (i > 0 && jumps[i] < jumps[i - 1]) throw std::invalid_argument("Schubert jumps must be weakly increasing");
  }
}

std::size_t SchubertSymbol::dimension() const {
  std::size_t d = 0;
  for (auto a : jumps) d += a;
  return d;
}

std::string SchubertSymbol::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < jumps.size(); ++i) s += (i ? "," : "") + std::to_string(jumps[i]);
  return s + ")";
}

std::vector<std::vector<SchubertSymbol>> schubert_cells(std::size_t k, std::size_t n) {
  if (k == 0 || k >= n) throw std::invalid_argument("Grassmannian needs 1 <= k < n");
  const std::size_t m = n - k;
  std::vector<std::vector<SchubertSymbol>> out(k * m + 1);
  std::vector<std::size_t> a(k, 0);
  while (true) {
    SchubertSymbol s(k, n, a);
    out[s.dimension()].push_back(s);
    // next weakly increasing sequence in lexicographic order
    std::size_t i = k;
    while (i > 0 && a[i - 1] == m) --i;
    if (i == 0) break;
    ++a[i - 1];
    for (std::size_t j = i; j < k; ++j) a[j] = a[i - 1];
  }
  for (auto& cells : out)
    std::sort(cells.begin(), cells.end(), [](const SchubertSymbol& x, const SchubertSymbol& y) { return x.jumps < y.jumps; });
  return out;
}

bool OrientationCharacter::is_trivial() const {
  return std::none_of(values.begin(), values.end(), [](bool v) { return v; });
}

namespace {

ChainComplex from_sheets(const std::vector<std::size_t>& ranks, const std::vector<std::vector<SheetIncidence>>& sheets,
                         std::vector<std::vector<std::string>> labels) {
  std::vector<IntegerMatrix> bd;
  for (std::size_t d = 1; d < ranks.size(); ++d) {
    IntegerMatrix m = IntegerMatrix::Zero(static_cast<Eigen::Index>(ranks[d - 1]), static_cast<Eigen::Index>(ranks[d]));
    for (const auto& s : sheets[d]) m(static_cast<Eigen::Index>(s.face), static_cast<Eigen::Index>(s.cell)) += s.sign;
    bd.push_back(m);
  }
  ChainComplex c(ranks, std::move(bd), std::move(labels));
  c.set_sheets(sheets);
  return c;
}

// Schubert complex: a face lowers one jump a_i by one (keeping the sequence weakly increasing).
// The removed box sits in row k - i, column a_i; its content parity decides whether the two sheets
// over the face agree (odd content) or cancel (even content) downstairs.
ChainComplex schubert_complex(std::size_t k, std::size_t n) {
  const auto cells = schubert_cells(k, n);
  std::vector<std::size_t> ranks;
  std::vector<std::vector<std::string>> labels;
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> index(cells.size());
  for (std::size_t d = 0; d < cells.size(); ++d) {
    ranks.push_back(cells[d].size());
    labels.emplace_back();
    for (std::size_t i = 0; i < cells[d].size(); ++i) {
      index[d][cells[d][i].jumps] = i;
      labels.back().push_back(cells[d][i].to_string());
    }
  }
  std::vector<std::vector<SheetIncidence>> sheets(cells.size());
  for (std::size_t d = 1; d < cells.size(); ++d) {
    for (std::size_t ci = 0; ci < cells[d].size(); ++ci) {
      const auto& a = cells[d][ci].jumps;
      for (std::size_t i = 0; i < k; ++i) {
        if (a[i] == 0) continue;
        if (i > 0 && a[i - 1] > a[i] - 1) continue;
        auto f = a;
        --f[i];
        const long row = static_cast<long>(k - i);
        const long content = static_cast<long>(a[i]) - row;
        const int eps = (content % 2 != 0) ? 1 : -1;
        std::size_t above = 0;
        for (std::size_t j = i + 1; j < k; ++j) above += a[j];
        const int s = (above % 2) ? -1 : 1;
        const std::size_t fi = index[d - 1].at(f);
        sheets[d].push_back({ci, fi, s, {}});
        sheets[d].push_back({ci, fi, s * eps, {0}});
      }
    }
  }
  return from_sheets(ranks, sheets, std::move(labels));
}

}  // namespace

ChainComplex point_complex() { return ChainComplex({1}, {}, {{"pt"}}); }

ChainComplex sphere_complex(int n) {
  if (n <= 0) throw std::invalid_argument("sphere dimension must be positive");
  std::vector<std::size_t> ranks(static_cast<std::size_t>(n) + 1, 0);
  ranks.front() = 1;
  ranks.back() = 1;
  std::vector<IntegerMatrix> bd;
  std::vector<std::vector<std::string>> labels(ranks.size());
  labels.front() = {"e0"};
  labels.back() = {"e" + std::to_string(n)};
  for (int d = 1; d <= n; ++d)
    bd.push_back(IntegerMatrix::Zero(static_cast<Eigen::Index>(ranks[d - 1]), static_cast<Eigen::Index>(ranks[d])));
  return ChainComplex(ranks, bd, labels);
}

ChainComplex rp_complex(int n) {
  if (n <= 0) throw std::invalid_argument("projective space dimension must be positive");
  ChainComplex c = schubert_complex(1, static_cast<std::size_t>(n) + 1);
  std::vector<std::vector<std::string>> labels;
  for (int d = 0; d <= n; ++d) labels.push_back({"e" + std::to_string(d)});
  std::vector<IntegerMatrix> bd;
  for (int d = 1; d <= n; ++d) bd.push_back(c.boundary(static_cast<std::size_t>(d)));
  ChainComplex out(c.ranks(), bd, labels);
  out.set_sheets(*c.sheets());
  return out;
}

ChainComplex grassmann_complex(int k, int n) {
  if (k < 1 || k >= n) throw std::invalid_argument("Grassmannian needs 1 <= k < n");
  return schubert_complex(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
}

OrientationCharacter grassmann_w1(int k, int n) {
  if (k < 1 || k >= n) throw std::invalid_argument("Grassmannian needs 1 <= k < n");
  return {{true}};
}

ChainComplex oriented_double_cover(const ChainComplex& base, const OrientationCharacter& w1) {
  if (!base.sheets()) throw std::invalid_argument("complex carries no attaching-path data for a cover");
  if (w1.values.size() != base.rank(1)) throw std::invalid_argument("orientation character needs one value per 1-cell");
  if (w1.is_trivial()) throw std::invalid_argument("trivial orientation character gives a disconnected cover");
  if (base.rank(0) == 0) throw std::invalid_argument("cover of an empty complex");

  std::vector<std::size_t> ranks;
  std::vector<std::vector<std::string>> labels;
  for (std::size_t d = 0; d <= base.top_dim(); ++d) {
    ranks.push_back(2 * base.rank(d));
    labels.emplace_back();
    for (std::size_t i = 0; i < base.rank(d); ++i) {
      labels.back().push_back(base.label(d, i) + "+");
      labels.back().push_back(base.label(d, i) + "-");
    }
  }
  std::vector<IntegerMatrix> bd;
  for (std::size_t d = 1; d <= base.top_dim(); ++d) {
    IntegerMatrix m = IntegerMatrix::Zero(static_cast<Eigen::Index>(ranks[d - 1]), static_cast<Eigen::Index>(ranks[d]));
    for (const auto& s : (*base.sheets())[d]) {
      bool twist = false;
      for (auto c : s.loop) twist ^= static_cast<bool>(w1.values[c]);
      const auto c = static_cast<Eigen::Index>(2 * s.cell);
      const auto f = static_cast<Eigen::Index>(2 * s.face);
      m(f + (twist ? 1 : 0), c) += s.sign;
      m(f + (twist ? 0 : 1), c + 1) += s.sign;
    }
    bd.push_back(m);
  }
  ChainComplex cover(ranks, bd, labels);
  if (homology_at(cover.boundary(1), IntegerMatrix::Zero(0, static_cast<Eigen::Index>(ranks[0]))).rank() != 1)
    throw std::invalid_argument("base complex is not connected");
  return cover;
}

ChainComplex oriented_grassmann_complex(int k, int n) {
  return oriented_double_cover(grassmann_complex(k, n), grassmann_w1(k, n));
}

// Cells are subsets of {n-k, ..., n-1}; each generator e_j has ∂e_j = (1 + (-1)^j) e_{j-1}
// (zero for the bottom generator) and ∂ extends as a derivation with e_j e_j = 0.
ChainComplex stiefel_complex(int k, int n) {
  if (k < 1 || k > n - 1) throw std::invalid_argument("Stiefel manifold needs 1 <= k <= n - 1");
  const int lo = n - k;
  std::size_t top = 0;
  for (int j = lo; j < n; ++j) top += static_cast<std::size_t>(j);
  std::vector<std::vector<std::vector<int>>> cells(top + 1);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> s;
    std::size_t dim = 0;
    for (int b = 0; b < k; ++b)
      if (mask & (1u << b)) {
        s.push_back(lo + b);
        dim += static_cast<std::size_t>(lo + b);
      }
    cells[dim].push_back(s);
  }
  std::vector<std::size_t> ranks;
  std::vector<std::vector<std::string>> labels;
  std::vector<std::map<std::vector<int>, std::size_t>> index(cells.size());
  for (std::size_t d = 0; d < cells.size(); ++d) {
    std::sort(cells[d].begin(), cells[d].end());
    ranks.push_back(cells[d].size());
    labels.emplace_back();
    for (std::size_t i = 0; i < cells[d].size(); ++i) {
      index[d][cells[d][i]] = i;
      std::string l = "e";
      if (cells[d][i].empty()) l += "0";
      for (std::size_t t = 0; t < cells[d][i].size(); ++t) l += (t ? "," : "") + std::to_string(cells[d][i][t]);
      labels.back().push_back(l);
    }
  }
  std::vector<IntegerMatrix> bd;
  for (std::size_t d = 1; d < cells.size(); ++d) {
    IntegerMatrix m = IntegerMatrix::Zero(static_cast<Eigen::Index>(ranks[d - 1]), static_cast<Eigen::Index>(ranks[d]));
    for (std::size_t ci = 0; ci < cells[d].size(); ++ci) {
      const auto& s = cells[d][ci];
      int prefix = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const int j = s[i];
        const int coeff = (j - 1 >= lo && j % 2 == 0) ? 2 : 0;
        if (coeff != 0 && !(i > 0 && s[i - 1] == j - 1)) {
          auto f = s;
          f[i] = j - 1;
          const int sign = (prefix % 2) ? -1 : 1;
          m(static_cast<Eigen::Index>(index[d - 1].at(f)), static_cast<Eigen::Index>(ci)) += sign * coeff;
        }
        prefix += j;
      }
    }
    bd.push_back(m);
  }
  return ChainComplex(ranks, bd, labels);
}

ChainComplex product_complex(const ChainComplex& a, const ChainComplex& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t top = a.top_dim() + b.top_dim();
  // cell (i, x, j, y) with i + j = d, ordered by i then x then y
  std::vector<std::vector<std::array<std::size_t, 4>>> cells(top + 1);
  for (std::size_t i = 0; i <= a.top_dim(); ++i)
    for (std::size_t x = 0; x < a.rank(i); ++x)
      for (std::size_t j = 0; j <= b.top_dim(); ++j)
        for (std::size_t y = 0; y < b.rank(j); ++y) cells[i + j].push_back({i, x, j, y});
  for (auto& c : cells) std::sort(c.begin(), c.end());
  std::vector<std::size_t> ranks;
  std::vector<std::vector<std::string>> labels;
  std::vector<std::map<std::array<std::size_t, 4>, std::size_t>> index(cells.size());
  for (std::size_t d = 0; d <= top; ++d) {
    ranks.push_back(cells[d].size());
    labels.emplace_back();
    for (std::size_t t = 0; t < cells[d].size(); ++t) {
      const auto& c = cells[d][t];
      index[d][c] = t;
      labels.back().push_back(a.label(c[0], c[1]) + "x" + b.label(c[2], c[3]));
    }
  }
  std::vector<IntegerMatrix> bd;
  for (std::size_t d = 1; d <= top; ++d) {
    IntegerMatrix m = IntegerMatrix::Zero(static_cast<Eigen::Index>(ranks[d - 1]), static_cast<Eigen::Index>(ranks[d]));
    for (std::size_t t = 0; t < cells[d].size(); ++t) {
      const auto [i, x, j, y] = cells[d][t];
      if (i > 0) {
        const IntegerMatrix da = a.boundary(i);
        for (std::size_t u = 0; u < a.rank(i - 1); ++u) {
          const BigInt& v = da(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(x));
          if (v != 0) m(static_cast<Eigen::Index>(index[d - 1].at({i - 1, u, j, y})), static_cast<Eigen::Index>(t)) += v;
        }
      }
      if (j > 0) {
        const IntegerMatrix db = b.boundary(j);
        const int sign = (i % 2) ? -1 : 1;
        for (std::size_t u = 0; u < b.rank(j - 1); ++u) {
          const BigInt& v = db(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(y));
          if (v != 0)
            m(static_cast<Eigen::Index>(index[d - 1].at({i, x, j - 1, u})), static_cast<Eigen::Index>(t)) += sign * v;
        }
      }
    }
    bd.push_back(m);
  }
  return ChainComplex(ranks, bd, labels);
}

long euler_characteristic(const ChainComplex& c) {
  long chi = 0;
  for (std::size_t d = 0; d <= c.top_dim() && !c.empty(); ++d)
    chi += (d % 2 ? -1 : 1) * static_cast<long>(c.rank(d));
  return chi;
}

namespace {

std::vector<int> parse_ints(const std::string& s, std::size_t expected, const std::string& name) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad space parameter in '" + name + "'");
    }
  }
  if (out.size() != expected) throw std::invalid_argument("wrong number of parameters in '" + name + "'");
  return out;
}

}  // namespace

ChainComplex space_complex(const std::string& name) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (head == "point" && rest.empty()) return point_complex();
  if (head == "so3" && rest.empty()) return rp_complex(3);
  if (head == "so4" && rest.empty()) return product_complex(sphere_complex(3), rp_complex(3));
  if (head == "sphere") return sphere_complex(parse_ints(rest, 1, name)[0]);
  if (head == "rp") return rp_complex(parse_ints(rest, 1, name)[0]);
  if (head == "grassmann") {
    auto v = parse_ints(rest, 2, name);
    return grassmann_complex(v[0], v[1]);
  }
  if (head == "grassmann+") {
    auto v = parse_ints(rest, 2, name);
    return oriented_grassmann_complex(v[0], v[1]);
  }
  if (head == "stiefel") {
    auto v = parse_ints(rest, 2, name);
    return stiefel_complex(v[0], v[1]);
  }
  if (head == "product") {
    // split at the top-level 'x' separating two space names
    for (std::size_t p = 0; p < rest.size(); ++p) {
      if (rest[p] != 'x') continue;
      try {
        ChainComplex a = space_complex(rest.substr(0, p));
        ChainComplex b = space_complex(rest.substr(p + 1));
        return product_complex(a, b);
      } catch (const std::invalid_argument&) {
      }
    }
    throw std::invalid_argument("cannot parse product space '" + name + "'");
  }
  throw std::invalid_argument("unknown space '" + name + "'");
}

}  // namespace g2topo

#include <g2topo/serialize.hpp>

#include <cctype>
#include <limits>

namespace g2topo {

json to_json(const BigInt& x) {
  if (x.fits_slong_p()) return json(x.get_si());
  return json(x.get_str());
}

BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long>());
  if (j.is_string()) {
    BigInt x;
    if (x.set_str(j.get<std::string>(), 10) != 0) throw std::invalid_argument("bad integer string");
    return x;
  }
  throw std::invalid_argument("expected an integer");
}

json to_json(const FGAbelianGroup& g) {
  json t = json::array();
  for (const auto& d : g.torsion()) t.push_back(to_json(d));
  return {{"rank", g.rank()}, {"torsion", t}};
}

FGAbelianGroup parse_group(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "0" || s.empty()) return {};
  std::vector<BigInt> orders;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t plus = s.find('+', pos);
    if (plus == std::string::npos) plus = s.size();
    const std::string term = s.substr(pos, plus - pos);
    if (term.empty() || term[0] != 'Z') throw std::invalid_argument("bad group term '" + term + "' in '" + text + "'");
    const std::size_t caret = term.find('^');
    const std::string base = term.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
    long power = 1;
    if (caret != std::string::npos) {
      try {
        power = std::stol(term.substr(caret + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent in '" + text + "'");
      }
      if (power < 0) throw std::invalid_argument("negative exponent in '" + text + "'");
    }
    BigInt order = 0;
    if (!base.empty()) {
      if (order.set_str(base, 10) != 0 || order < 2) throw std::invalid_argument("bad cyclic order in '" + text + "'");
    }
    for (long i = 0; i < power; ++i) orders.push_back(order);
    pos = plus + 1;
  }
  return FGAbelianGroup::from_cyclic_orders(orders);
}

FGAbelianGroup group_from_json(const json& j) {
  if (j.is_string()) return parse_group(j.get<std::string>());
  if (!j.is_object() || !j.contains("rank")) throw std::invalid_argument("group must be an object with rank and torsion");
  const auto rank = j.at("rank").get<long>();
  if (rank < 0) throw std::invalid_argument("negative rank");
  std::vector<BigInt> torsion;
  if (j.contains("torsion"))
    for (const auto& d : j.at("torsion")) torsion.push_back(bigint_from_json(d));
  return FGAbelianGroup(static_cast<std::size_t>(rank), torsion);
}

json to_json(const std::vector<FGAbelianGroup>& groups) {
  json out = json::array();
  for (const auto& g : groups) out.push_back(to_json(g));
  return out;
}

std::vector<FGAbelianGroup> groups_from_json(const json& j) {
  std::vector<FGAbelianGroup> out;
  for (const auto& g : j) out.push_back(group_from_json(g));
  return out;
}

json to_json(const HomologyTable& t) { return {{"space", t.space_name}, {"groups", to_json(t.groups)}}; }

json to_json(const IntegerMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(to_json(m(i, j)));
  return out;
}

json to_json(const ChainComplex& c) {
  json ranks = c.ranks();
  json bd = json::array();
  for (std::size_t d = 1; d <= c.top_dim() && !c.empty(); ++d) bd.push_back(to_json(c.boundary(d)));
  json labels = json::array();
  for (const auto& per_degree : c.labels())
    for (const auto& l : per_degree) labels.push_back(l);
  return {{"ranks", ranks}, {"boundaries", bd}, {"labels", labels}};
}

ChainComplex complex_from_json(const json& j) {
  const auto ranks = j.at("ranks").get<std::vector<std::size_t>>();
  const json& bd = j.at("boundaries");
  if (ranks.empty()) throw std::invalid_argument("complex needs at least one degree");
  if (bd.size() + 1 != ranks.size()) throw std::invalid_argument("one boundary matrix per positive degree");
  std::vector<IntegerMatrix> mats;
  for (std::size_t d = 1; d < ranks.size(); ++d) {
    const json& flat = bd[d - 1];
    const auto r = static_cast<Eigen::Index>(ranks[d - 1]);
    const auto c = static_cast<Eigen::Index>(ranks[d]);
    if (flat.size() != static_cast<std::size_t>(r * c))
      throw std::invalid_argument("boundary " + std::to_string(d) + " has the wrong number of entries");
    IntegerMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index k = 0; k < c; ++k) m(i, k) = bigint_from_json(flat[static_cast<std::size_t>(i * c + k)]);
    mats.push_back(m);
  }
  std::vector<std::vector<std::string>> labels;
  if (j.contains("labels")) {
    const auto flat = j.at("labels").get<std::vector<std::string>>();
    std::size_t total = 0;
    for (auto r : ranks) total += r;
    if (flat.size() != total) throw std::invalid_argument("one label per cell");
    std::size_t pos = 0;
    for (auto r : ranks) {
      labels.emplace_back(flat.begin() + static_cast<long>(pos), flat.begin() + static_cast<long>(pos + r));
      pos += r;
    }
  }
  return ChainComplex(ranks, mats, labels);
}

}  // namespace g2topo

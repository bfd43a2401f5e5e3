#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hsfw/problems/problems.hpp"

namespace hsfw {

std::uint64_t triangle_count(std::size_t d) {
  const std::uint64_t n = d;
  return d < 3 ? 0 : n * (n - 1) * (n - 2) / 2;
}

namespace {

// Block 0: spread equality. Block 1 + j*P + p: triangle with middle vertex j
// and the p-th lexicographic pair (a < b) of the remaining d-1 vertices.
class SparsestCutSource final : public BlockSource {
 public:
  explicit SparsestCutSource(std::size_t d) : d_(d) {
    const std::uint32_t m = static_cast<std::uint32_t>(d - 1);
    for (std::uint32_t a = 0; a < m; ++a)
      for (std::uint32_t b = a + 1; b < m; ++b) pairs_.emplace_back(a, b);
  }
  std::size_t size() const override { return 1 + d_ * pairs_.size(); }
  ConstraintBlock block(std::size_t index) const override {
    if (index == 0) {
      const double dd = static_cast<double>(d_);
      return {SpreadOp{}, TargetSet::point(dd * dd / 2.0)};
    }
    const std::size_t t = index - 1;
    const auto j = static_cast<std::uint32_t>(t / pairs_.size());
    const auto [a, b] = pairs_[t % pairs_.size()];
    const std::uint32_t i = a + (a >= j ? 1 : 0);
    const std::uint32_t k = b + (b >= j ? 1 : 0);
    return {TriangleOp{i, j, k}, TargetSet::half_space_le(0.0)};
  }

 private:
  std::size_t d_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
};

bool is_comment_or_blank(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%' || line[pos] == '#';
}

bool parse_index(const std::string& tok, long long& out) {
  std::size_t used = 0;
  try {
    out = std::stoll(tok, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == tok.size() && out >= 0;
}

}  // namespace

GraphInput ingest_edge_list(std::istream& in) {
  struct Raw {
    long long u, v;
    double w;
  };
  std::vector<Raw> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ss(line);
    std::string su, sv, sw, extra;
    ss >> su >> sv;
    Raw r{0, 0, 1.0};
    if (sv.empty() || !parse_index(su, r.u) || !parse_index(sv, r.v))
      throw std::runtime_error("edge list line " + std::to_string(line_no) +
                               ": expected two non-negative integer endpoints");
    if (ss >> sw) {
      std::size_t used = 0;
      try {
        r.w = std::stod(sw, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != sw.size())
        throw std::runtime_error("edge list line " + std::to_string(line_no) + ": bad weight '" + sw + "'");
    }
    raw.push_back(r);
  }
  if (raw.empty()) throw std::runtime_error("edge list: no edges");

  long long lo = raw.front().u;
  long long hi = 0;
  for (const auto& r : raw) {
    lo = std::min({lo, r.u, r.v});
    hi = std::max({hi, r.u, r.v});
  }
  const long long base = lo == 0 ? 0 : 1;

  GraphInput g;
  g.node_count = static_cast<std::size_t>(hi - base + 1);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> seen;
  for (const auto& r : raw) {
    auto u = static_cast<std::uint32_t>(r.u - base);
    auto v = static_cast<std::uint32_t>(r.v - base);
    if (u == v) {
      ++g.self_loops_dropped;
      continue;
    }
    if (u > v) std::swap(u, v);
    if (!seen.emplace(std::make_pair(u, v), g.edges.size()).second) {
      ++g.duplicates_merged;
      continue;
    }
    g.edges.push_back({u, v, r.w});
  }
  return g;
}

GraphInput ingest_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
  return ingest_edge_list(in);
}

GraphInput erdos_renyi(std::size_t d, double p, std::uint64_t seed) {
  RngStream rng = make_stream(seed, StreamTag::Problem);
  std::bernoulli_distribution coin(p);
  GraphInput g;
  g.node_count = d;
  for (std::uint32_t u = 0; u < d; ++u)
    for (std::uint32_t v = u + 1; v < d; ++v)
      if (coin(rng)) g.edges.push_back({u, v, 1.0});
  return g;
}

SymMatrix laplacian(const GraphInput& g) {
  SymMatrix l(g.node_count);
  for (const auto& e : g.edges) {
    l.add(e.u, e.u, e.weight);
    l.add(e.v, e.v, e.weight);
    l.add(e.u, e.v, -e.weight);
  }
  return l;
}

ProblemInstance build_sparsest_cut_sdp(const GraphInput& g) {
  const std::size_t d = g.node_count;
  if (d < 3) throw std::invalid_argument("build_sparsest_cut_sdp: need at least 3 nodes");
  const double dd = static_cast<double>(d);
  ProblemInstance p{DomainSpec::trace_ball(d, dd),
                    ConstraintSystem(d, std::make_shared<SparsestCutSource>(d),
                                     std::max(2.5, dd * dd * (dd - 1.0))),
                    std::make_shared<LinearObjective>(laplacian(g)),
                    {}};
  p.meta.name = "sparsestcut";
  p.meta.dim = d;
  p.meta.constraint_count = p.constraints.size();
  return p;
}

}  // namespace hsfw

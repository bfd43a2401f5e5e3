#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hsfw/problems/problems.hpp"

namespace hsfw {

namespace {

// RowSum(i) -> Point(1) for i < d, then Entry(i, j) -> Nonneg at d + i*d + j.
class KMeansSource final : public BlockSource {
 public:
  explicit KMeansSource(std::size_t d) : d_(d) {}
  std::size_t size() const override { return d_ + d_ * d_; }
  ConstraintBlock block(std::size_t index) const override {
    if (index < d_) return {RowSumOp{static_cast<std::uint32_t>(index)}, TargetSet::point(1.0)};
    const std::size_t e = index - d_;
    return {EntryOp{static_cast<std::uint32_t>(e / d_), static_cast<std::uint32_t>(e % d_)},
            TargetSet::nonneg()};
  }

 private:
  std::size_t d_;
};

}  // namespace

ProblemInstance build_kmeans_sdp(const std::vector<std::vector<double>>& points, std::size_t k) {
  const std::size_t d = points.size();
  if (d == 0) throw std::invalid_argument("build_kmeans_sdp: empty point list");
  if (d < 2) throw std::invalid_argument("build_kmeans_sdp: need at least two points");
  if (k < 1 || k > d) throw std::invalid_argument("build_kmeans_sdp: k must lie in [1, d]");
  const std::size_t width = points.front().size();
  for (const auto& p : points)
    if (p.size() != width) throw std::invalid_argument("build_kmeans_sdp: mismatched point lengths");

  SymMatrix cost(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < width; ++c) {
        const double diff = points[i][c] - points[j][c];
        s += diff * diff;
      }
      cost.set(i, j, s);
    }

  const double la = (static_cast<double>(d) + 1.0) / 2.0;
  ProblemInstance p{DomainSpec::trace_ball(d, static_cast<double>(k)),
                    ConstraintSystem(d, std::make_shared<KMeansSource>(d), la),
                    std::make_shared<LinearObjective>(std::move(cost)),
                    {}};
  p.meta.name = "kmeans";
  p.meta.dim = d;
  p.meta.constraint_count = p.constraints.size();
  return p;
}

LabeledPoints gaussian_blobs(std::size_t clusters, std::size_t per_cluster, std::size_t dim,
                             double spread, double separation, std::uint64_t seed) {
  if (clusters == 0 || per_cluster == 0 || dim == 0)
    throw std::invalid_argument("gaussian_blobs: counts must be positive");
  RngStream rng = make_stream(seed, StreamTag::Problem);
  std::uniform_real_distribution<double> center(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, spread);
  LabeledPoints out;
  for (std::size_t c = 0; c < clusters; ++c) {
    std::vector<double> mu(dim);
    for (auto& m : mu) m = separation * center(rng);
    for (std::size_t s = 0; s < per_cluster; ++s) {
      std::vector<double> p(dim);
      for (std::size_t j = 0; j < dim; ++j) p[j] = mu[j] + noise(rng);
      out.points.push_back(std::move(p));
      out.labels.push_back(c);
    }
  }
  return out;
}

SymMatrix clustering_matrix(const std::vector<std::size_t>& labels) {
  const std::size_t d = labels.size();
  std::vector<std::size_t> sizes;
  for (auto l : labels) {
    if (l >= sizes.size()) sizes.resize(l + 1, 0);
    ++sizes[l];
  }
  SymMatrix x(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      if (labels[i] == labels[j]) x.set(i, j, 1.0 / static_cast<double>(sizes[labels[i]]));
  return x;
}

std::vector<std::vector<double>> read_points_csv(std::istream& in) {
  std::vector<std::vector<double>> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
      continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || cell.find_first_not_of(" \t\r", used) != std::string::npos)
        throw std::runtime_error("points csv line " + std::to_string(line_no) + ": '" + cell +
                                 "' is not a real number");
      row.push_back(v);
    }
    if (!points.empty() && row.size() != points.front().size())
      throw std::runtime_error("points csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(points.front().size()) + " columns");
    points.push_back(std::move(row));
  }
  if (points.empty()) throw std::runtime_error("points csv: no points");
  return points;
}

std::vector<std::vector<double>> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open points file '" + path + "'");
  return read_points_csv(in);
}

}  // namespace hsfw

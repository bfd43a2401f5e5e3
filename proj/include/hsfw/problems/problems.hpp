#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hsfw/constraints/objective.hpp"
#include "hsfw/constraints/system.hpp"
#include "hsfw/domains/domain.hpp"

namespace hsfw {

struct ProblemMetadata {
  std::string name;
  std::size_t dim = 0;
  std::size_t constraint_count = 0;
  std::optional<SymMatrix> planted;  // known feasible point
  std::optional<double> f_star;      // known optimal value
};

/// min <C, X> over the domain subject to <A_i, X> in b_i, i = 1..n.
struct ProblemInstance {
  DomainSpec domain;
  ConstraintSystem constraints;
  std::shared_ptr<const LinearObjective> objective;
  ProblemMetadata meta;

  const SymMatrix& cost() const { return objective->matrix(); }
};

// ---------------------------------------------------------------- synthetic

/// Planted synthetic SDP: C and every A_i have upper-triangle entries drawn
/// from U(0,1) and mirrored; domain {X >= 0, tr X <= 1/d}; b_i = <A_i, X*> with
/// X* = (1/(2 d r)) sum_{j<=r} v_j v_j^T, r = ceil(d/4), v_j random orthonormal.
/// f* = <C, X*> is recorded when the equality system pins X* down uniquely.
ProblemInstance build_synthetic_sdp(std::size_t d, std::size_t n, std::uint64_t seed,
                                    double sigma_f = 0.0);

/// Rank of the equality system X -> (<A_i, X>)_i over symmetric matrices,
/// compared with d(d+1)/2.
struct RankReport {
  std::size_t rank = 0;
  std::size_t full_rank = 0;
  bool all_equalities = true;
  bool unique() const { return all_equalities && rank == full_rank; }
};
RankReport equality_system_rank(const ConstraintSystem& sys);

// ------------------------------------------------------------------ k-means

/// Peng-Wei relaxation: C = squared Euclidean distance matrix, constraints
/// X 1 = 1 (d RowSum blocks, first) and X_ij >= 0 (d^2 Entry blocks, row-major
/// after them), domain {X >= 0, tr X <= k}.
ProblemInstance build_kmeans_sdp(const std::vector<std::vector<double>>& points, std::size_t k);

struct LabeledPoints {
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> labels;
};

/// Isotropic Gaussian blobs; centers uniform in [-1,1]^dim scaled by `separation`.
LabeledPoints gaussian_blobs(std::size_t clusters, std::size_t per_cluster, std::size_t dim,
                             double spread, double separation, std::uint64_t seed);

/// sum_c (1/|c|) 1_c 1_c^T for a labeling.
SymMatrix clustering_matrix(const std::vector<std::size_t>& labels);

/// One point per row, comma-separated reals; '#' starts a comment line.
std::vector<std::vector<double>> read_points_csv(std::istream& in);
std::vector<std::vector<double>> read_points_csv(const std::string& path);

// ------------------------------------------------------------- sparsest cut

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double weight = 1.0;
};

struct GraphInput {
  std::size_t node_count = 0;
  std::vector<Edge> edges;  // u < v, no duplicates
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
};

/// Whitespace-separated "u v [w]" lines; '%' or '#' comment lines. Indices are
/// 0-based if the smallest one is 0, otherwise 1-based. Duplicate edges keep
/// the first weight. Throws std::runtime_error naming the line on bad input.
GraphInput ingest_edge_list(std::istream& in);
GraphInput ingest_edge_list(const std::string& path);

/// G(d, p) with unit weights.
GraphInput erdos_renyi(std::size_t d, double p, std::uint64_t seed);

SymMatrix laplacian(const GraphInput& g);

/// Uniform sparsest cut embedding SDP: objective <L, X>; block 0 is the spread
/// equality d tr X - 1^T X 1 = d^2/2; blocks 1.. are triangle rows
/// X_ij + X_jk - X_ik - X_jj <= 0 enumerated lexicographically in (j, i, k)
/// with i < k and j not in {i, k}; domain {X >= 0, tr X <= d}.
ProblemInstance build_sparsest_cut_sdp(const GraphInput& g);

/// d (d-1) (d-2) / 2
std::uint64_t triangle_count(std::size_t d);

}  // namespace hsfw

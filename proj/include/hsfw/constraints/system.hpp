#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "hsfw/constraints/target_set.hpp"
#include "hsfw/core/sym_matrix.hpp"

namespace hsfw {

/// <A, X> for an explicit symmetric d x d matrix A (full row-major).
struct ExplicitRow {
  std::span<const double> a;
};
/// X(i,j) + X(j,k) - X(i,k) - X(j,j); j is the middle vertex.
struct TriangleOp {
  std::uint32_t i, j, k;
};
/// sum_j X(i,j)
struct RowSumOp {
  std::uint32_t i;
};
/// X(i,j)
struct EntryOp {
  std::uint32_t i, j;
};
/// d tr(X) - 1^T X 1
struct SpreadOp {};

using ConstraintOperator = std::variant<ExplicitRow, TriangleOp, RowSumOp, EntryOp, SpreadOp>;

/// Scalar linear functional <A, X> with A symmetric. For the implicit kinds
/// A is the symmetric representative, e.g. a triangle row puts 1/2 on each of
/// its three off-diagonal pairs and -1 on (j,j).
double apply(const ConstraintOperator& op, const SymMatrix& x);
/// out += u * A, touching only the cells A is supported on.
void add_adjoint(const ConstraintOperator& op, double u, SymMatrix& out);
/// ||A||_F^2, the squared operator norm of X -> <A, X>.
double squared_norm(const ConstraintOperator& op, std::size_t dim);

/// One sampled scalar inclusion <A_i, X> in b_i.
struct ConstraintBlock {
  ConstraintOperator op;
  TargetSet target;
  double weight = 1.0;  // sampling probability; uniform, i.e. 1/n
};

/// Indexed, possibly implicit, collection of blocks in a fixed canonical order.
class BlockSource {
 public:
  virtual ~BlockSource() = default;
  virtual std::size_t size() const = 0;
  /// The returned block may reference memory owned by the source.
  virtual ConstraintBlock block(std::size_t index) const = 0;
};

/// Owning description of a block, for building small systems by hand.
struct BlockSpec {
  std::variant<std::vector<double>, TriangleOp, RowSumOp, EntryOp, SpreadOp> op;
  TargetSet target;
};

class ConstraintSystem {
 public:
  ConstraintSystem() = default;
  ConstraintSystem(std::size_t dim, std::shared_ptr<const BlockSource> source, double la_bound);

  /// Generic list; LA bound = max ||A_i||_F^2 computed from the blocks.
  static ConstraintSystem from_blocks(std::size_t dim, std::vector<BlockSpec> blocks);
  /// n explicit rows stored contiguously (n * dim^2 doubles), one target each.
  static ConstraintSystem from_rows(std::size_t dim, std::vector<double> rows,
                                    std::vector<TargetSet> targets);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return source_ ? source_->size() : 0; }
  /// Uniform upper bound on ||A(xi)||^2.
  double la_bound() const { return la_bound_; }
  ConstraintBlock block(std::size_t index) const;

 private:
  std::size_t dim_ = 0;
  std::shared_ptr<const BlockSource> source_;
  double la_bound_ = 0.0;
};

/// Max over all blocks of squared_norm; O(n) for implicit kinds.
double max_squared_norm(const BlockSource& source, std::size_t dim);

}  // namespace hsfw

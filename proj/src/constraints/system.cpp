#include "hsfw/constraints/system.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "hsfw/simd/kernels.hpp"

namespace hsfw {

double apply(const ConstraintOperator& op, const SymMatrix& x) {
  return std::visit(
      [&x](const auto& o) -> double {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, ExplicitRow>) {
          return simd::dot(o.a, x.data());
        } else if constexpr (std::is_same_v<T, TriangleOp>) {
          return x(o.i, o.j) + x(o.j, o.k) - x(o.i, o.k) - x(o.j, o.j);
        } else if constexpr (std::is_same_v<T, RowSumOp>) {
          return simd::sum(x.row(o.i));
        } else if constexpr (std::is_same_v<T, EntryOp>) {
          return x(o.i, o.j);
        } else {
          return static_cast<double>(x.dim()) * x.trace() - simd::sum(x.data());
        }
      },
      op);
}

void add_adjoint(const ConstraintOperator& op, double u, SymMatrix& out) {
  std::visit(
      [u, &out](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, ExplicitRow>) {
          simd::axpy(u, o.a, out.raw());
        } else if constexpr (std::is_same_v<T, TriangleOp>) {
          const double half = 0.5 * u;
          out.add(o.i, o.j, half);
          out.add(o.j, o.k, half);
          out.add(o.i, o.k, -half);
          out.add(o.j, o.j, -u);
        } else if constexpr (std::is_same_v<T, RowSumOp>) {
          const double half = 0.5 * u;
          for (std::uint32_t j = 0; j < out.dim(); ++j)
            if (j != o.i) out.add(o.i, j, half);
          out.add(o.i, o.i, u);
        } else if constexpr (std::is_same_v<T, EntryOp>) {
          out.add(o.i, o.j, o.i == o.j ? u : 0.5 * u);
        } else {
          const std::size_t d = out.dim();
          auto cells = out.raw();
          for (auto& c : cells) c -= u;
          const double diag = static_cast<double>(d) * u;
          for (std::size_t i = 0; i < d; ++i) cells[i * d + i] += diag;
        }
      },
      op);
}

double squared_norm(const ConstraintOperator& op, std::size_t dim) {
  const double d = static_cast<double>(dim);
  return std::visit(
      [d](const auto& o) -> double {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, ExplicitRow>) return simd::dot(o.a, o.a);
        else if constexpr (std::is_same_v<T, TriangleOp>) return 2.5;
        else if constexpr (std::is_same_v<T, RowSumOp>) return (d + 1.0) / 2.0;
        else if constexpr (std::is_same_v<T, EntryOp>) return o.i == o.j ? 1.0 : 0.5;
        else return d * d * (d - 1.0);
      },
      op);
}

ConstraintSystem::ConstraintSystem(std::size_t dim, std::shared_ptr<const BlockSource> source,
                                   double la_bound)
    : dim_(dim), source_(std::move(source)), la_bound_(la_bound) {
  if (!source_) throw std::invalid_argument("ConstraintSystem: null block source");
}

ConstraintBlock ConstraintSystem::block(std::size_t index) const {
  if (index >= size())
    throw std::out_of_range("constraint index " + std::to_string(index) + " out of range");
  ConstraintBlock b = source_->block(index);
  b.weight = 1.0 / static_cast<double>(size());
  return b;
}

double max_squared_norm(const BlockSource& source, std::size_t dim) {
  double worst = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i)
    worst = std::max(worst, squared_norm(source.block(i).op, dim));
  return worst;
}

namespace {

class ListSource final : public BlockSource {
 public:
  ListSource(std::size_t dim, std::vector<BlockSpec> blocks) : blocks_(std::move(blocks)) {
    for (const auto& b : blocks_) {
      if (const auto* row = std::get_if<std::vector<double>>(&b.op)) {
        if (row->size() != dim * dim)
          throw std::invalid_argument("explicit constraint row must have dim^2 entries");
        for (std::size_t i = 0; i < dim; ++i)
          for (std::size_t j = i + 1; j < dim; ++j)
            if ((*row)[i * dim + j] != (*row)[j * dim + i])
              throw std::invalid_argument("explicit constraint row must be symmetric");
      }
    }
  }
  std::size_t size() const override { return blocks_.size(); }
  ConstraintBlock block(std::size_t index) const override {
    const auto& b = blocks_[index];
    ConstraintOperator op = std::visit(
        [](const auto& o) -> ConstraintOperator {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, std::vector<double>>) return ExplicitRow{o};
          else return o;
        },
        b.op);
    return {op, b.target};
  }

 private:
  std::vector<BlockSpec> blocks_;
};

class RowsSource final : public BlockSource {
 public:
  RowsSource(std::size_t dim, std::vector<double> rows, std::vector<TargetSet> targets)
      : stride_(dim * dim), rows_(std::move(rows)), targets_(std::move(targets)) {
    if (rows_.size() != stride_ * targets_.size())
      throw std::invalid_argument("from_rows: rows buffer must hold n * dim^2 entries");
  }
  std::size_t size() const override { return targets_.size(); }
  ConstraintBlock block(std::size_t index) const override {
    return {ExplicitRow{{rows_.data() + index * stride_, stride_}}, targets_[index]};
  }

 private:
  std::size_t stride_;
  std::vector<double> rows_;
  std::vector<TargetSet> targets_;
};

}  // namespace

ConstraintSystem ConstraintSystem::from_blocks(std::size_t dim, std::vector<BlockSpec> blocks) {
  auto source = std::make_shared<ListSource>(dim, std::move(blocks));
  const double la = max_squared_norm(*source, dim);
  return ConstraintSystem(dim, std::move(source), la);
}

ConstraintSystem ConstraintSystem::from_rows(std::size_t dim, std::vector<double> rows,
                                             std::vector<TargetSet> targets) {
  auto source = std::make_shared<RowsSource>(dim, std::move(rows), std::move(targets));
  const double la = max_squared_norm(*source, dim);
  return ConstraintSystem(dim, std::move(source), la);
}

}  // namespace hsfw

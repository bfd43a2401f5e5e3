#include "hsfw/constraints/target_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsfw {

TargetSet TargetSet::interval(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("Interval target: lo must not exceed hi");
  return TargetSet(IntervalTarget{lo, hi});
}

double TargetSet::project(double y) const {
  return std::visit(
      [y](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, PointTarget>) return t.b;
        else if constexpr (std::is_same_v<T, HalfSpaceLe>) return std::min(y, t.b);
        else if constexpr (std::is_same_v<T, NonnegTarget>) return std::max(y, 0.0);
        else return std::clamp(y, t.lo, t.hi);
      },
      v_);
}

double TargetSet::distance(double y) const { return std::abs(y - project(y)); }

}  // namespace hsfw

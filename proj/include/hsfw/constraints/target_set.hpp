#pragma once

#include <variant>

namespace hsfw {

/// {b}
struct PointTarget {
  double b = 0.0;
};
/// (-inf, b]
struct HalfSpaceLe {
  double b = 0.0;
};
/// [0, inf)
struct NonnegTarget {};
/// [lo, hi]; construct through TargetSet::interval to validate lo <= hi.
struct IntervalTarget {
  double lo = 0.0;
  double hi = 0.0;
};

/// The closed convex set b(xi) a scalar constraint value must land in.
class TargetSet {
 public:
  static TargetSet point(double b) { return TargetSet(PointTarget{b}); }
  static TargetSet half_space_le(double b) { return TargetSet(HalfSpaceLe{b}); }
  static TargetSet nonneg() { return TargetSet(NonnegTarget{}); }
  static TargetSet interval(double lo, double hi);

  /// Euclidean projection of y onto the set.
  double project(double y) const;
  /// |y - project(y)|
  double distance(double y) const;

  const auto& variant() const { return v_; }

 private:
  using Variant = std::variant<PointTarget, HalfSpaceLe, NonnegTarget, IntervalTarget>;
  explicit TargetSet(Variant v) : v_(v) {}
  Variant v_;
};

inline double project_target(const TargetSet& t, double y) { return t.project(y); }

}  // namespace hsfw

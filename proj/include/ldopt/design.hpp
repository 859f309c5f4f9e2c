#pragma once

#include <cstddef>
#include <vector>

#include "ldopt/linalg.hpp"

namespace ldopt {

struct SupportPoint {
  double c = 0.0;
  double w = 0.0;

  friend bool operator==(const SupportPoint&, const SupportPoint&) = default;
};

/// An approximate design in canonical space: support points with positive
/// weights summing to one, pairwise distinct, inside the region.
class Design {
 public:
  static constexpr double kWeightSumTol = 1e-12;
  static constexpr double kDistinctTol = 1e-9;

  Design() = default;

  /// Validates and stores. Throws DomainError when an invariant fails.
  static Design make(std::vector<SupportPoint> points, Interval region);

  /// A design with no points (an empty first stage).
  static Design empty_on(Interval region);

  const std::vector<SupportPoint>& points() const { return points_; }
  const Interval& region() const { return region_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

 private:
  Design(std::vector<SupportPoint> points, Interval region)
      : points_(std::move(points)), region_(region) {}

  std::vector<SupportPoint> points_;
  Interval region_{};
};

}  // namespace ldopt

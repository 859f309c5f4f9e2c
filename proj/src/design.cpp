#include "ldopt/design.hpp"

#include <cmath>
#include <string>

#include "ldopt/error.hpp"

namespace ldopt {

Design Design::make(std::vector<SupportPoint> points, Interval region) {
  if (std::isnan(region.lo) || std::isnan(region.hi) || region.lo > region.hi) {
    throw DomainError("design region must satisfy lo <= hi");
  }
  if (points.empty()) throw DomainError("design needs at least one support point");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!std::isfinite(p.c)) throw DomainError("support point " + std::to_string(i) + " is not finite");
    if (!(p.w > 0.0) || !std::isfinite(p.w)) {
      throw DomainError("weight of support point " + std::to_string(i) + " must be positive");
    }
    if (!region.contains(p.c, 1e-12 * (1.0 + std::abs(p.c)))) {
      throw DomainError("support point " + std::to_string(i) + " lies outside the region");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(points[j].c - p.c) <= kDistinctTol) {
        throw DomainError("support points " + std::to_string(j) + " and " + std::to_string(i) +
                          " coincide");
      }
    }
    total += p.w;
  }
  if (std::abs(total - 1.0) > kWeightSumTol * points.size() + kWeightSumTol) {
    throw DomainError("weights must sum to 1");
  }
  return Design(std::move(points), region);
}

Design Design::empty_on(Interval region) { return Design({}, region); }

}  // namespace ldopt

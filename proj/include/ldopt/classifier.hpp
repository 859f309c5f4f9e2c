#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldopt/linalg.hpp"
#include "ldopt/model.hpp"

namespace ldopt {

enum class Verdict { TypeI, TypeII, Neither };

const char* to_string(Verdict v);

/// Signs (-1, 0 for inconclusive, +1) of the three tested expressions at one
/// grid point: Psi1', (Psi2'/Psi1')' and the ratio-of-ratios derivative.
struct GridSample {
  double c = 0.0;
  int psi1_slope = 0;
  int ratio12_slope = 0;
  int ratio_ratio_slope = 0;
};

struct Classification {
  Interval interval;  // as requested
  Interval tested;    // after capping infinite ends
  Verdict verdict = Verdict::Neither;
  std::vector<GridSample> diagnostics;
  bool condition_41 = false;
  std::optional<double> first_violation;
  std::string reason;
};

inline constexpr int kDefaultGrid = 512;

/// Replaces an infinite end by the point where Psi1 has decayed below
/// 1e-12 of its running maximum, or by 30 units of c, whichever comes
/// first. With both ends infinite each side is capped from the origin.
Interval cap_interval(const Triple& triple, Interval interval);
Interval cap_interval(const Model& model, Interval interval);

Classification check_type(const Triple& triple, Interval interval, int grid_n = kDefaultGrid);
Classification check_type(const Model& model, Interval interval, int grid_n = kDefaultGrid);

enum class BreakpointKind { Psi1PrimeZero, RatioConditionZero };

const char* to_string(BreakpointKind k);

struct Breakpoint {
  double c = 0.0;
  BreakpointKind kind = BreakpointKind::Psi1PrimeZero;
};

std::vector<Breakpoint> find_breakpoints(const Model& model, Interval search,
                                         int scan_n = 4096);

/// True iff (Psi3'/Psi1')' > 0 throughout the interval.
bool check_condition_41(const Model& model, Interval interval, int grid_n = kDefaultGrid);

}  // namespace ldopt

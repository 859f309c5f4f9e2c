#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ldopt/classifier.hpp"
#include "ldopt/design.hpp"
#include "ldopt/infomat.hpp"
#include "ldopt/model.hpp"

namespace ldopt {

/// Which end of the interval a pair merge is anchored at: the lower end A
/// for a type I triple, the upper end B for a type II triple.
enum class Orientation { TypeI, TypeII };

struct MergeResult {
  double c = 0.0;             // merged point c_x
  double anchor_share = 0.0;  // weight moved onto the anchor, omega_x
  double psi1_residual = 0.0;
  double psi2_residual = 0.0;
  double psi3_slack = 0.0;    // merged minus original third moment, >= 0 in theory
};

struct MergeRecord {
  double anchor = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double omega = 0.0;
  Orientation orientation = Orientation::TypeI;
  MergeResult result;
};

/// Called once for every pair merge a reduction performs.
using MergeObserver = std::function<void(const MergeRecord&)>;

/// Replaces {(c1, omega), (c2, 1 - omega)} by {(anchor, omega_x), (c_x, 1 - omega_x)}
/// with equal Psi1 and Psi2 moments and a larger Psi3 moment.
/// Type I requires anchor < c1 < c2; type II requires c1 < c2 < anchor.
MergeResult merge_pair(const Model& model, double anchor, double c1, double c2, double omega,
                       Orientation orientation);

/// The c in (c1, c2) with Psi1(c) = omega Psi1(c1) + (1 - omega) Psi1(c2).
/// Requires Psi1 decreasing and (Psi3'/Psi1')' > 0 on (c1, c2).
double merge_to_single(const Model& model, double c1, double c2, double omega);

struct EndpointCheck {
  double omega = 0.0;
  bool holds = false;
};

/// Weight omega on A matching the Psi1 value at c, and whether the endpoint
/// pair then has at least the Psi3 value at c.
EndpointCheck endpoint_dominates(const Model& model, double a, double b, double c);

enum class Structure {
  TwoSymmetric,
  TwoSymmetricPlusZero,
  EndpointPairLower,
  EndpointPairUpper,
  D1Anchored,
  Endpoints,
  Unchanged,
};

const char* to_string(Structure s);

/// How closely a reduced design reproduces the input's moments. Normally
/// the Psi1 and Psi2 moments are matched and the Psi3 moment may grow; the
/// degenerate power models match a different pair, recorded here.
struct Certificate {
  std::array<int, 2> matched{1, 2};
  int slack_index = 3;
  std::array<double, 2> moment_residuals{0.0, 0.0};  // reduced minus input
  double third_moment_slack = 0.0;                   // reduced minus input, slack_index
  double psd_margin = 0.0;  // smallest eigenvalue of C_reduced - C_input
  double input_trace = 0.0;

  bool valid() const;
};

struct ReductionOutcome {
  Design reduced;
  Certificate certificate;
  Structure structure = Structure::Unchanged;
};

Certificate certify(const Model& model, const Design& input, const Design& reduced,
                    std::array<int, 2> matched = {1, 2}, int slack_index = 3);

ReductionOutcome collapse(const Model& model, const Design& design, const Classification& verdict,
                          const MergeObserver& observer = {});
ReductionOutcome symmetrize_binary(const Model& model, const Design& design,
                                   const MergeObserver& observer = {});
ReductionOutcome reduce_one_sided(const Model& model, const Design& design,
                                  const MergeObserver& observer = {});
ReductionOutcome reduce_asymmetric(const Model& model, const Design& design,
                                   const MergeObserver& observer = {});
/// Moves all mass onto the region's end points; for power models with one
/// constant Psi.
ReductionOutcome reduce_endpoints(const Model& model, const Design& design);

/// Dispatches to the reduction that applies to the model and region.
ReductionOutcome reduce(const Model& model, const Design& design,
                        const MergeObserver& observer = {});

}  // namespace ldopt

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldopt/design.hpp"
#include "ldopt/infomat.hpp"
#include "ldopt/model.hpp"

namespace ldopt {

enum class CriterionKind { D, A, E, PhiP, COptimal };

/// An optimality criterion, sign-normalised so that larger is better.
struct Criterion {
  CriterionKind kind = CriterionKind::D;
  double p = 0.0;                      // PhiP only; -inf gives E
  std::array<double, 2> v{0.0, 0.0};   // COptimal only
  std::optional<ParamTransform> transform;

  /// "D", "A", "E", "phi_p(<p>)", "c(<v1>,<v2>)".
  static Criterion parse(std::string_view text);
  std::string name() const;
};

/// D: det M. A: -trace(M^-1). E: smallest eigenvalue. PhiP: (tr(M^p)/2)^(1/p).
/// COptimal: -v^T M^-1 v. A singular M gives the worst value (0 or -inf).
double criterion_value(const InfoMatrix& m, const Criterion& crit);

enum class StructureKind {
  TwoSymmetric,          // {-c, c}
  TwoWithAnchor,         // {anchor, c}
  TwoSymmetricPlusZero,  // {-c, 0, c}
  AnchorPlusZero,        // {anchor, 0, c}
  Endpoints,             // {lo, hi}
  TwoFree,               // {c1, c2}
};

struct SupportStructure {
  StructureKind kind = StructureKind::TwoFree;
  double anchor = 0.0;

  std::string name() const;
  friend bool operator==(const SupportStructure&, const SupportStructure&) = default;
};

/// Support classes that contain a dominating design for the model on the
/// (finite) region. Throws UnclassifiableRegion when none is known.
std::vector<SupportStructure> reduced_structures(const Model& model, Interval region);

struct OptimizeResult {
  Design design;
  double value = 0.0;
  SupportStructure structure;
  Interval region;  // after capping
};

/// Maximises the criterion over designs of the given structure.
OptimizeResult optimize(const Model& model, Interval region, double alpha, double beta,
                        const Criterion& crit, const SupportStructure& structure);

/// The best result over every structure from reduced_structures.
OptimizeResult optimize(const Model& model, Interval region, double alpha, double beta,
                        const Criterion& crit);

/// Chooses the second-stage design d2 maximising the criterion of
/// (1 - new_mass) C(d1) + new_mass C(d2). `value` is that combined criterion.
OptimizeResult augment_multistage(const Design& d1, const Model& model, Interval region,
                                  double alpha, double beta, const Criterion& crit,
                                  double new_mass, const SupportStructure& structure);
OptimizeResult augment_multistage(const Design& d1, const Model& model, Interval region,
                                  double alpha, double beta, const Criterion& crit,
                                  double new_mass);

struct EquivalenceReport {
  double max_variance = 0.0;
  double argmax = 0.0;
  std::vector<double> support_variances;
  bool certified = false;
};

inline constexpr double kEquivalenceTol = 1e-6;

/// Standardised variance Psi1(c) (1, c) C^-1 (1, c)^T over the region; a
/// D-optimal design keeps it at or below 2 with equality on its support.
EquivalenceReport verify_equivalence_D(const Design& design, const Model& model, Interval region,
                                       int grid_n = 2001);

}  // namespace ldopt

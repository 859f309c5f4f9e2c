#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ldopt/design.hpp"
#include "ldopt/infomat.hpp"
#include "ldopt/model.hpp"
#include "ldopt/optimizer.hpp"

namespace ldopt {

/// A design file after loading. Everything is held in canonical space; a
/// natural-space file is converted on load.
struct DesignDocument {
  Model model = Model::logistic();
  double alpha = 0.0;
  double beta = 1.0;
  Interval requested;  // canonical region before capping
  Interval region;     // canonical region after capping
  std::vector<SupportPoint> support;
  std::optional<Criterion> criterion;
  std::optional<ParamTransform> transform;

  /// The support as a validated Design on `region`.
  Design design() const;
  /// The criterion (D when absent) carrying the document's transform.
  Criterion effective_criterion() const;
};

/// Parses a document. Errors are ParseError naming the field and the line
/// of the raw text it sits on.
DesignDocument parse_document(std::string_view text);
DesignDocument load_document(const std::string& path);

/// Canonical-space document for `design`, with an optional "report" object.
nlohmann::ordered_json to_json(const DesignDocument& doc, const Design& design,
                               const nlohmann::ordered_json& report = nullptr);

nlohmann::ordered_json region_json(const Interval& r);

/// Serialises with round-trip-exact numbers and a trailing newline.
std::string dump(const nlohmann::ordered_json& j);

}  // namespace ldopt

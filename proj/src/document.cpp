#include "ldopt/document.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include "ldopt/classifier.hpp"
#include "ldopt/error.hpp"

namespace ldopt {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int line_at(std::string_view text, std::size_t pos) {
  pos = std::min(pos, text.size());
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

// Byte offset of the n-th occurrence of "key" used as an object key, at or
// after `from`; npos when absent.
std::size_t key_offset(std::string_view text, std::string_view key, int n = 0,
                       std::size_t from = 0) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  std::size_t pos = from;
  while ((pos = text.find(quoted, pos)) != std::string_view::npos) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') {
      if (n-- == 0) return pos;
    }
    pos += quoted.size();
  }
  return std::string_view::npos;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what,
                         std::size_t pos = std::string_view::npos) const {
    if (pos == std::string_view::npos) pos = locate(field);
    throw ParseError(field, pos == std::string_view::npos ? 0 : line_at(text_, pos), what);
  }

  // Position of a dotted field path such as "support[2].weight".
  std::size_t locate(const std::string& field) const {
    static const std::regex kIndexed(R"(^support\[(\d+)\]\.?(\w*)$)");
    std::smatch m;
    if (std::regex_match(field, m, kIndexed)) {
      const std::size_t base = key_offset(text_, "support");
      if (base == std::string_view::npos) return base;
      const int index = std::stoi(m[1]);
      const std::string sub = m[2].str();
      if (!sub.empty()) {
        const std::size_t p = key_offset(text_, sub, index, base);
        if (p != std::string_view::npos) return p;
      }
      // Count opening braces of array elements as a fallback.
      std::size_t p = text_.find('[', base);
      for (int k = 0; p != std::string_view::npos && k <= index; ++k) {
        p = text_.find('{', p + 1);
      }
      return p == std::string_view::npos ? base : p;
    }
    const auto dot = field.find_first_of(".[");
    const std::string head = field.substr(0, dot);
    const std::size_t base = key_offset(text_, head);
    if (dot == std::string::npos || base == std::string_view::npos || field[dot] == '[') {
      return base;
    }
    const std::size_t p = key_offset(text_, field.substr(dot + 1), 0, base);
    return p == std::string_view::npos ? base : p;
  }

  double number(const Json& j, const std::string& field) const {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
  }

  // A number, or one of the strings "inf" / "-inf".
  double extended(const Json& j, const std::string& field) const {
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "inf" || s == "+inf") return kInf;
      if (s == "-inf") return -kInf;
      fail(field, "expected a number, \"inf\" or \"-inf\"");
    }
    return number(j, field);
  }

  std::string string(const Json& j, const std::string& field) const {
    if (!j.is_string()) fail(field, "expected a string");
    return j.get<std::string>();
  }

  void only_keys(const Json& j, const std::string& field,
                 std::initializer_list<std::string_view> keys) const {
    if (!j.is_object()) fail(field, "expected an object");
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (auto key : keys) known = known || key == k;
      if (!known) {
        const std::string path = field.empty() ? k : field + "." + k;
        std::size_t pos = key_offset(text_, k, 0, field.empty() ? 0 : locate(field));
        fail(path, "unknown field", pos);
      }
    }
  }

  void require(const Json& j, const std::string& parent, const char* key) const {
    if (!j.contains(key)) {
      fail(parent.empty() ? key : parent + "." + key, "missing required field",
           parent.empty() ? 0 : locate(parent));
    }
  }

 private:
  std::string_view text_;
};

// The point in canonical space for a natural-space value; region ends at the
// boundary of the covariate range map to the boundary of the c range.
double to_canonical(const Model& model, double alpha, double beta, double x, bool region_end) {
  if (model.link() == LinkKind::Saturating && region_end) {
    if (x == kInf) return alpha;
    if (x == 0.0) return 0.0;
  }
  return model.x_to_c(alpha, beta, x);
}

}  // namespace

Design DesignDocument::design() const {
  if (support.empty()) return Design::empty_on(region);
  return Design::make(support, region);
}

Criterion DesignDocument::effective_criterion() const {
  Criterion c = criterion.value_or(Criterion{});
  if (transform) c.transform = transform;
  return c;
}

DesignDocument parse_document(std::string_view text) {
  Reader rd(text);
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Name the last key that opened before the error position.
    const std::size_t pos = e.byte > 0 ? e.byte - 1 : 0;
    static const std::regex kKey(R"re("([^"\\]*)"\s*:)re");
    std::string field = "<document>";
    const std::string head(text.substr(0, std::min(pos, text.size())));
    for (auto it = std::sregex_iterator(head.begin(), head.end(), kKey); it != std::sregex_iterator();
         ++it) {
      field = (*it)[1].str();
    }
    throw ParseError(field, line_at(text, pos), "malformed document: " + std::string(e.what()));
  }

  rd.only_keys(j, "", {"model", "params", "space", "region", "support", "criterion", "transform",
                       "report"});
  for (const char* key : {"model", "params", "region", "support"}) rd.require(j, "", key);

  DesignDocument doc;
  try {
    doc.model = Model::parse(rd.string(j["model"], "model"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    rd.fail("model", e.what());
  }

  const Json& params = j["params"];
  rd.only_keys(params, "params", {"alpha", "beta"});
  rd.require(params, "params", "alpha");
  rd.require(params, "params", "beta");
  doc.alpha = rd.number(params["alpha"], "params.alpha");
  doc.beta = rd.number(params["beta"], "params.beta");
  if (doc.beta == 0.0) rd.fail("params.beta", "beta must be nonzero");

  std::string space = "canonical";
  if (j.contains("space")) {
    space = rd.string(j["space"], "space");
    if (space != "canonical" && space != "natural") {
      rd.fail("space", "expected \"canonical\" or \"natural\"");
    }
  }
  const bool natural = space == "natural";

  const Json& region = j["region"];
  if (!region.is_array() || region.size() != 2) rd.fail("region", "expected [lo, hi]");
  double lo = rd.extended(region[0], "region[0]");
  double hi = rd.extended(region[1], "region[1]");
  if (!(lo < hi)) rd.fail("region", "expected lo < hi");
  try {
    if (natural) {
      lo = to_canonical(doc.model, doc.alpha, doc.beta, lo, true);
      hi = to_canonical(doc.model, doc.alpha, doc.beta, hi, true);
      if (lo > hi) std::swap(lo, hi);
    }
    const Interval dom = doc.model.natural_domain();
    if (lo < dom.lo || hi > dom.hi) {
      rd.fail("region", "region lies outside the natural domain of " + doc.model.id());
    }
    doc.requested = {lo, hi};
    doc.region = doc.requested.finite() ? doc.requested : cap_interval(doc.model, doc.requested);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    rd.fail("region", e.what());
  }

  const Json& support = j["support"];
  if (!support.is_array()) rd.fail("support", "expected a list of {point, weight}");
  for (std::size_t i = 0; i < support.size(); ++i) {
    const std::string field = "support[" + std::to_string(i) + "]";
    rd.only_keys(support[i], field, {"point", "weight"});
    rd.require(support[i], field, "point");
    rd.require(support[i], field, "weight");
    double c = rd.number(support[i]["point"], field + ".point");
    const double w = rd.number(support[i]["weight"], field + ".weight");
    if (natural) {
      try {
        c = to_canonical(doc.model, doc.alpha, doc.beta, c, false);
      } catch (const Error& e) {
        rd.fail(field + ".point", e.what());
      }
    }
    doc.support.push_back({c, w});
  }
  try {
    (void)doc.design();
  } catch (const DomainError& e) {
    rd.fail("support", e.what());
  }

  try {
    if (j.contains("criterion")) doc.criterion = Criterion::parse(rd.string(j["criterion"], "criterion"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    rd.fail("criterion", e.what());
  }
  try {
    if (j.contains("transform")) {
      doc.transform = ParamTransform::parse(rd.string(j["transform"], "transform"));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    rd.fail("transform", e.what());
  }
  if (j.contains("report") && !j["report"].is_object()) rd.fail("report", "expected an object");
  return doc;
}

DesignDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

Json region_json(const Interval& r) {
  auto end = [](double v) -> Json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  return Json::array({end(r.lo), end(r.hi)});
}

Json to_json(const DesignDocument& doc, const Design& design, const Json& report) {
  Json j;
  j["model"] = doc.model.id();
  j["params"] = {{"alpha", doc.alpha}, {"beta", doc.beta}};
  j["space"] = "canonical";
  j["region"] = region_json(design.region());
  Json support = Json::array();
  for (const auto& p : design.points()) support.push_back({{"point", p.c}, {"weight", p.w}});
  j["support"] = std::move(support);
  if (doc.criterion) j["criterion"] = doc.criterion->name();
  if (doc.transform) j["transform"] = doc.transform->name();
  if (!report.is_null()) j["report"] = report;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ldopt

#include "ldopt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ldopt/classifier.hpp"
#include "ldopt/document.hpp"
#include "ldopt/error.hpp"
#include "ldopt/infomat.hpp"
#include "ldopt/optimizer.hpp"
#include "ldopt/reducer.hpp"

namespace ldopt::cli {

namespace {

using Json = nlohmann::ordered_json;

double parse_end(const std::string& s, const std::string& field) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || std::isnan(v)) {
    throw ParseError(field, 0, "expected a number or +-inf, got '" + s + "'");
  }
  return v;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string fmt_region(const Interval& r) { return "[" + fmt(r.lo) + ", " + fmt(r.hi) + "]"; }

std::string fmt_support(const Design& d) {
  std::string s;
  for (const auto& p : d.points()) {
    s += "  c = " + fmt(p.c) + "  weight = " + fmt(p.w) + "\n";
  }
  return s;
}

struct Options {
  bool pretty = false;

  std::string file;
  std::string file_b;
  std::string model;
  std::vector<std::string> region;
  int grid = kDefaultGrid;
  bool breakpoints = false;
  bool diagnostics = false;
  std::string criterion;
  double new_mass = 0.5;
  int verify_grid = 2001;
};

Json classification_json(const Model& model, const Classification& cls, const Options& opt) {
  Json j;
  j["command"] = "classify";
  j["model"] = model.id();
  j["interval"] = region_json(cls.interval);
  j["tested"] = region_json(cls.tested);
  j["verdict"] = to_string(cls.verdict);
  j["condition_41"] = cls.condition_41;
  j["first_violation"] = cls.first_violation ? Json(*cls.first_violation) : Json(nullptr);
  j["reason"] = cls.reason;
  if (opt.breakpoints) {
    Json bps = Json::array();
    for (const auto& b : find_breakpoints(model, cls.interval)) {
      bps.push_back({{"c", b.c}, {"kind", to_string(b.kind)}});
    }
    j["breakpoints"] = std::move(bps);
  }
  if (opt.diagnostics) {
    Json diag = Json::array();
    for (const auto& s : cls.diagnostics) {
      diag.push_back({{"c", s.c},
                      {"psi1_slope", s.psi1_slope},
                      {"ratio12_slope", s.ratio12_slope},
                      {"ratio_ratio_slope", s.ratio_ratio_slope}});
    }
    j["diagnostics"] = std::move(diag);
  }
  return j;
}

int cmd_classify(const Options& opt, std::ostream& out) {
  std::optional<Model> model;
  Interval interval;
  if (!opt.file.empty()) {
    if (!opt.model.empty() || !opt.region.empty()) {
      throw ParseError("model", 0, "give either a design file or --model/--region, not both");
    }
    const DesignDocument doc = load_document(opt.file);
    model = doc.model;
    interval = doc.requested;
  } else {
    if (opt.model.empty() || opt.region.size() != 2) {
      throw ParseError("region", 0, "classify needs a design file or both --model and --region");
    }
    try {
      model = Model::parse(opt.model);
    } catch (const DomainError& e) {
      throw ParseError("model", 0, e.what());
    }
    interval = {parse_end(opt.region[0], "region[0]"), parse_end(opt.region[1], "region[1]")};
    if (!(interval.lo < interval.hi)) throw ParseError("region", 0, "expected lo < hi");
  }
  const Classification cls = check_type(*model, interval, opt.grid);
  const Json j = classification_json(*model, cls, opt);
  if (!opt.pretty) {
    out << dump(j);
    return kExitOk;
  }
  out << "model:     " << model->id() << "\n"
      << "interval:  " << fmt_region(cls.interval) << "\n"
      << "tested:    " << fmt_region(cls.tested) << "\n"
      << "verdict:   " << to_string(cls.verdict) << "\n";
  if (!cls.reason.empty()) out << "reason:    " << cls.reason << "\n";
  if (j.contains("breakpoints")) {
    for (const auto& b : j["breakpoints"]) {
      out << "breakpoint " << fmt(b["c"].get<double>()) << " (" << b["kind"].get<std::string>()
          << ")\n";
    }
  }
  return kExitOk;
}

Design nonempty_design(const DesignDocument& doc, const char* command) {
  const Design d = doc.design();
  if (d.empty()) {
    throw ParseError("support", 0, std::string(command) + " needs at least one support point");
  }
  return d;
}

Json certificate_json(const Certificate& c) {
  return {{"matched", c.matched},
          {"slack_index", c.slack_index},
          {"moment_residuals", c.moment_residuals},
          {"third_moment_slack", c.third_moment_slack},
          {"psd_margin", c.psd_margin},
          {"input_trace", c.input_trace},
          {"valid", c.valid()}};
}

int cmd_reduce(const Options& opt, std::ostream& out) {
  const DesignDocument doc = load_document(opt.file);
  const Design input = nonempty_design(doc, "reduce");
  std::size_t merges = 0;
  const ReductionOutcome res = reduce(doc.model, input, [&](const MergeRecord&) { ++merges; });
  const Json report = {{"command", "reduce"},
                       {"structure", to_string(res.structure)},
                       {"input_points", input.size()},
                       {"merges", merges},
                       {"certificate", certificate_json(res.certificate)}};
  if (!opt.pretty) {
    out << dump(to_json(doc, res.reduced, report));
    return kExitOk;
  }
  out << "model:      " << doc.model.id() << "\n"
      << "region:     " << fmt_region(doc.region) << "\n"
      << "structure:  " << to_string(res.structure) << "\n"
      << "support (" << res.reduced.size() << " points, from " << input.size() << "):\n"
      << fmt_support(res.reduced)
      << "psd margin: " << fmt(res.certificate.psd_margin) << "\n"
      << "certified:  " << (res.certificate.valid() ? "yes" : "no") << "\n";
  return kExitOk;
}

Criterion criterion_for(const DesignDocument& doc, const Options& opt) {
  Criterion c = doc.effective_criterion();
  if (!opt.criterion.empty()) {
    try {
      c = Criterion::parse(opt.criterion);
    } catch (const DomainError& e) {
      throw ParseError("criterion", 0, e.what());
    }
    c.transform = doc.transform;
  }
  return c;
}

int emit_design(const DesignDocument& doc, const Criterion& crit, const OptimizeResult& res,
                Json report, const Options& opt, std::ostream& out) {
  DesignDocument shown = doc;
  shown.criterion = crit;
  shown.criterion->transform.reset();
  report["criterion"] = crit.name();
  report["criterion_value"] = number_or_null(res.value);
  report["structure"] = res.structure.name();
  report["requested_region"] = region_json(doc.requested);
  report["capped_region"] = region_json(res.region);
  if (!opt.pretty) {
    out << dump(to_json(shown, res.design, report));
    return kExitOk;
  }
  out << "model:      " << doc.model.id() << "\n"
      << "region:     " << fmt_region(res.region) << "\n"
      << "criterion:  " << crit.name() << " = " << fmt(res.value) << "\n"
      << "structure:  " << res.structure.name() << "\n"
      << "support:\n"
      << fmt_support(res.design);
  return kExitOk;
}

int cmd_optimize(const Options& opt, std::ostream& out) {
  const DesignDocument doc = load_document(opt.file);
  const Criterion crit = criterion_for(doc, opt);
  const OptimizeResult res = optimize(doc.model, doc.region, doc.alpha, doc.beta, crit);
  return emit_design(doc, crit, res, {{"command", "optimize"}}, opt, out);
}

int cmd_augment(const Options& opt, std::ostream& out) {
  const DesignDocument doc = load_document(opt.file);
  const Criterion crit = criterion_for(doc, opt);
  const OptimizeResult res = augment_multistage(doc.design(), doc.model, doc.region, doc.alpha,
                                                doc.beta, crit, opt.new_mass);
  return emit_design(doc, crit, res, {{"command", "augment"}, {"new_mass", opt.new_mass}}, opt,
                     out);
}

int cmd_verify(const Options& opt, std::ostream& out) {
  const DesignDocument doc = load_document(opt.file);
  const Design d = nonempty_design(doc, "verify");
  const EquivalenceReport rep = verify_equivalence_D(d, doc.model, doc.region, opt.verify_grid);
  const double value = criterion_value(
      info_matrix(d, doc.model, doc.alpha, doc.beta, doc.transform), doc.effective_criterion());
  if (opt.pretty) {
    out << "model:         " << doc.model.id() << "\n"
        << "max variance:  " << fmt(rep.max_variance) << " at c = " << fmt(rep.argmax) << "\n"
        << "D-optimal:     " << (rep.certified ? "yes" : "no") << "\n"
        << doc.effective_criterion().name() << " value: " << fmt(value) << "\n";
    return kExitOk;
  }
  Json j;
  j["command"] = "verify";
  j["model"] = doc.model.id();
  j["region"] = region_json(doc.region);
  j["max_variance"] = rep.max_variance;
  j["argmax"] = rep.argmax;
  j["support_variances"] = rep.support_variances;
  j["bound"] = 2.0;
  j["tolerance"] = kEquivalenceTol;
  j["certified"] = rep.certified;
  j["criterion"] = doc.effective_criterion().name();
  j["criterion_value"] = number_or_null(value);
  out << dump(j);
  return kExitOk;
}

int cmd_dominate(const Options& opt, std::ostream& out) {
  const DesignDocument a = load_document(opt.file);
  const DesignDocument b = load_document(opt.file_b);
  if (!(a.model == b.model) || a.alpha != b.alpha || a.beta != b.beta) {
    throw DomainError("both designs must share the model and its parameters");
  }
  const InfoMatrix ma = c_matrix(nonempty_design(a, "dominate"), a.model);
  const InfoMatrix mb = c_matrix(nonempty_design(b, "dominate"), b.model);
  const Loewner verdict = loewner_compare(ma, mb);
  const auto [lo, hi] = (ma - mb).eigenvalues();
  if (opt.pretty) {
    out << opt.file << " vs " << opt.file_b << ": " << to_string(verdict) << "\n"
        << "eigenvalues of the difference: " << fmt(lo) << ", " << fmt(hi) << "\n";
    return kExitOk;
  }
  Json j;
  j["command"] = "dominate";
  j["model"] = a.model.id();
  j["verdict"] = to_string(verdict);
  j["difference_eigenvalues"] = {lo, hi};
  j["tolerance"] = kLoewnerTol * (ma.trace() + mb.trace());
  out << dump(j);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Locally optimal two-parameter designs: classification, reduction, optimization",
               "ldopt"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--pretty", opt.pretty, "Print a human-readable summary instead of JSON");

  auto* classify = app.add_subcommand("classify", "Classify a model on an interval");
  classify->add_option("file", opt.file, "Design document supplying model and region");
  classify->add_option("--model", opt.model, "Model id");
  classify->add_option("--region", opt.region, "Interval ends (inf allowed)")->expected(2);
  classify->add_option("--grid", opt.grid, "Grid size")->check(CLI::Range(16, 1 << 20));
  classify->add_flag("--breakpoints", opt.breakpoints, "Also locate sign-change points");
  classify->add_flag("--diagnostics", opt.diagnostics, "Include the per-point sign trace");

  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a design to its dominating class");
  reduce_cmd->add_option("file", opt.file, "Design document")->required();

  auto* optimize_cmd = app.add_subcommand("optimize", "Optimal design over the reduced class");
  optimize_cmd->add_option("file", opt.file, "Design document (support may be empty)")->required();
  optimize_cmd->add_option("--criterion", opt.criterion, "D, A, E, phi_p(p) or c(v1,v2)");

  auto* dominate = app.add_subcommand("dominate", "Loewner comparison of two designs");
  dominate->add_option("first", opt.file, "Design document")->required();
  dominate->add_option("second", opt.file_b, "Design document")->required();

  auto* verify = app.add_subcommand("verify", "D-optimality equivalence check");
  verify->add_option("file", opt.file, "Design document")->required();
  verify->add_option("--grid", opt.verify_grid, "Grid size")->check(CLI::Range(16, 1 << 22));

  auto* augment = app.add_subcommand("augment", "Second-stage design given a first stage");
  augment->add_option("file", opt.file, "First-stage design document")->required();
  augment->add_option("--new-mass", opt.new_mass, "Share of the second stage, in (0, 1]");
  augment->add_option("--criterion", opt.criterion, "D, A, E, phi_p(p) or c(v1,v2)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  }

  try {
    if (classify->parsed()) return cmd_classify(opt, out);
    if (reduce_cmd->parsed()) return cmd_reduce(opt, out);
    if (optimize_cmd->parsed()) return cmd_optimize(opt, out);
    if (dominate->parsed()) return cmd_dominate(opt, out);
    if (verify->parsed()) return cmd_verify(opt, out);
    if (augment->parsed()) return cmd_augment(opt, out);
  } catch (const NumericalError& e) {
    err << "ldopt: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ParseError& e) {
    err << "ldopt: invalid input: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "ldopt: domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const PreconditionError& e) {
    err << "ldopt: precondition failed: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "ldopt: internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitDomain;
}

}  // namespace ldopt::cli

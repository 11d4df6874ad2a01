#include "dbarcone_app/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace dbarcone::app {

ConfigError::ConfigError(ConfigErrorKind kind, int line, const std::string& message)
    : std::runtime_error((kind == ConfigErrorKind::Parse ? "parse error" : "validation error") +
                         (line > 0 ? " at line " + std::to_string(line) : std::string()) + ": " + message),
      kind_(kind),
      line_(line) {}

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

[[noreturn]] void invalid(const YAML::Node& node, const std::string& message) {
  throw ConfigError(ConfigErrorKind::Validation, line_of(node), message);
}

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) invalid(node, path + " must be a mapping");
}

void reject_unknown(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
  require_map(node, path);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) invalid(kv.first, "unknown key '" + (path.empty() ? key : path + "." + key) + "'");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) invalid(node, path + " must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    invalid(node, path + " has the wrong type ('" + node.Scalar() + "')");
  }
}

template <class T>
void optional_scalar(const YAML::Node& parent, const char* key, const std::string& path, T& out) {
  if (const YAML::Node n = parent[key]) out = scalar<T>(n, path + "." + key);
}

template <class T>
std::vector<T> sequence(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) invalid(node, path + " must be a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(scalar<T>(node[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Complex complex_value(const YAML::Node& node, const std::string& path) {
  if (node.IsScalar()) return Complex(scalar<double>(node, path), 0.0);
  if (node.IsSequence() && node.size() == 2) {
    return Complex(scalar<double>(node[0], path + "[0]"), scalar<double>(node[1], path + "[1]"));
  }
  invalid(node, path + " must be a number or a [re, im] pair");
}

std::vector<Term> terms(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() == 0) invalid(node, path + " must be a nonempty list of terms");
  std::vector<Term> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const YAML::Node t = node[i];
    reject_unknown(t, p, {"exponents", "re", "im"});
    if (!t["exponents"]) invalid(t, p + ".exponents is required");
    Term term{sequence<int>(t["exponents"], p + ".exponents"), Complex(0.0, 0.0)};
    double re = 0.0;
    double im = 0.0;
    optional_scalar(t, "re", p, re);
    optional_scalar(t, "im", p, im);
    term.coefficient = Complex(re, im);
    out.push_back(std::move(term));
  }
  return out;
}

VarietySpec parse_variety(const YAML::Node& node) {
  reject_unknown(node, "variety", {"fixture", "weights", "polynomials", "pure_dim"});
  VarietySpec spec;
  if (const YAML::Node f = node["fixture"]) {
    spec.fixture = scalar<std::string>(f, "variety.fixture");
    if (node["weights"] || node["polynomials"] || node["pure_dim"]) {
      invalid(node, "variety: 'fixture' cannot be combined with weights, polynomials or pure_dim");
    }
    const auto& list = fixtures();
    if (std::none_of(list.begin(), list.end(), [&](const FixtureInfo& i) { return i.name == *spec.fixture; })) {
      invalid(f, "variety.fixture: unknown fixture '" + *spec.fixture + "'");
    }
    return spec;
  }
  if (!node["weights"]) invalid(node, "variety.weights is required unless a fixture is named");
  if (!node["polynomials"]) invalid(node, "variety.polynomials is required unless a fixture is named");
  spec.weights = sequence<int>(node["weights"], "variety.weights");
  const YAML::Node polys = node["polynomials"];
  if (!polys.IsSequence() || polys.size() == 0) invalid(polys, "variety.polynomials must be a nonempty list");
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const std::string p = "variety.polynomials[" + std::to_string(k) + "]";
    reject_unknown(polys[k], p, {"terms"});
    if (!polys[k]["terms"]) invalid(polys[k], p + ".terms is required");
    spec.polynomials.push_back(terms(polys[k]["terms"], p + ".terms"));
  }
  if (const YAML::Node d = node["pure_dim"]) spec.pure_dim = scalar<int>(d, "variety.pure_dim");

  // Cross-field checks with precise locations.
  const std::size_t n = spec.weights.size();
  for (std::size_t k = 0; k < spec.polynomials.size(); ++k) {
    for (std::size_t i = 0; i < spec.polynomials[k].size(); ++i) {
      const auto& e = spec.polynomials[k][i].exponents;
      if (e.size() != n) {
        invalid(polys[k]["terms"][i]["exponents"],
                "variety.weights: length " + std::to_string(n) + " differs from the " + std::to_string(e.size()) +
                    " exponents of variety.polynomials[" + std::to_string(k) + "].terms[" + std::to_string(i) + "]");
      }
    }
  }
  if (n >= 2 && std::all_of(spec.weights.begin(), spec.weights.end(), [](int b) { return b >= 1; })) {
    const Weights weights(spec.weights);
    for (std::size_t k = 0; k < spec.polynomials.size(); ++k) {
      try {
        weighted_degree(SparsePolynomial(n, spec.polynomials[k]), weights);
      } catch (const Error& e) {
        invalid(polys[k], "variety.polynomials[" + std::to_string(k) + "]: " + e.what());
      }
    }
  }
  try {
    build_variety(spec);
  } catch (const Error& e) {
    std::string where = "variety";
    if (e.code() == ErrorCode::NonHomogeneous || e.code() == ErrorCode::ZeroPolynomial) where = "variety.polynomials";
    if (e.code() == ErrorCode::InvalidArgument) where = "variety.weights/pure_dim";
    invalid(node, where + ": " + e.what());
  }
  return spec;
}

FormSpec parse_form(const YAML::Node& node) {
  reject_unknown(node, "form", {"builtin", "h", "r0", "R", "scale"});
  FormSpec spec;
  optional_scalar(node, "builtin", "form", spec.builtin);
  if (spec.builtin != "zero" && spec.builtin != "bump-dbar" && spec.builtin != "raw-bump") {
    invalid(node["builtin"], "form.builtin must be one of zero, bump-dbar, raw-bump");
  }
  if (const YAML::Node h = node["h"]) spec.h = terms(h, "form.h");
  optional_scalar(node, "r0", "form", spec.r0);
  optional_scalar(node, "R", "form", spec.R);
  optional_scalar(node, "scale", "form", spec.scale);
  if (!(spec.r0 >= 0.0) || !(spec.R > spec.r0) || !std::isfinite(spec.R)) invalid(node, "form: need 0 <= r0 < R < inf");
  if (!std::isfinite(spec.scale)) invalid(node, "form.scale must be finite");
  return spec;
}

JobSpec parse_job(const YAML::Node& node) {
  reject_unknown(node, "job", {"kind", "solver", "points", "anchors", "samples", "fd_step", "thetas", "pairs",
                               "scales", "path_steps", "radii", "integrand", "count"});
  JobSpec spec;
  if (!node["kind"]) invalid(node, "job.kind is required");
  spec.kind = scalar<std::string>(node["kind"], "job.kind");
  static const std::set<std::string> kinds = {"solve", "residual", "holder", "l2", "scaling", "theta-crosscheck"};
  if (!kinds.count(spec.kind)) {
    invalid(node["kind"], "job.kind must be one of solve, residual, holder, l2, scaling, theta-crosscheck");
  }
  optional_scalar(node, "solver", "job", spec.solver);
  if (spec.solver != "direct" && spec.solver != "l2") invalid(node["solver"], "job.solver must be direct or l2");
  if (const YAML::Node pts = node["points"]) {
    if (!pts.IsSequence()) invalid(pts, "job.points must be a list of points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string p = "job.points[" + std::to_string(i) + "]";
      if (!pts[i].IsSequence()) invalid(pts[i], p + " must be a list of coordinates");
      std::vector<Complex> z;
      for (std::size_t k = 0; k < pts[i].size(); ++k) z.push_back(complex_value(pts[i][k], p + "[" + std::to_string(k) + "]"));
      spec.points.push_back(std::move(z));
    }
  }
  optional_scalar(node, "anchors", "job", spec.anchors);
  optional_scalar(node, "samples", "job", spec.samples);
  optional_scalar(node, "fd_step", "job", spec.fd_step);
  if (const YAML::Node t = node["thetas"]) spec.thetas = sequence<double>(t, "job.thetas");
  optional_scalar(node, "pairs", "job", spec.pairs);
  if (const YAML::Node s = node["scales"]) spec.scales = sequence<double>(s, "job.scales");
  optional_scalar(node, "path_steps", "job", spec.path_steps);
  if (const YAML::Node r = node["radii"]) spec.radii = sequence<double>(r, "job.radii");
  optional_scalar(node, "integrand", "job", spec.integrand);
  optional_scalar(node, "count", "job", spec.count);

  if (spec.kind == "solve" && spec.points.empty()) invalid(node, "job.points must list at least one point for solve");
  if (!(spec.fd_step > 0.0)) invalid(node, "job.fd_step must be > 0");
  if (spec.thetas.empty()) invalid(node, "job.thetas must be nonempty");
  for (double t : spec.thetas) {
    if (!(t > 0.0 && t < 1.0)) invalid(node["thetas"], "job.thetas entries must lie in (0, 1)");
  }
  if (spec.scales.empty()) invalid(node, "job.scales must be nonempty");
  for (double s : spec.scales) {
    if (!(s > 0.0)) invalid(node["scales"], "job.scales entries must be > 0");
  }
  if (spec.radii.size() < 2) invalid(node, "job.radii needs at least two radii");
  for (double r : spec.radii) {
    if (!(r > 0.0)) invalid(node["radii"], "job.radii entries must be > 0");
  }
  if (spec.integrand != "norm2" && spec.integrand != "one") invalid(node["integrand"], "job.integrand must be norm2 or one");
  if (spec.path_steps < 1) invalid(node, "job.path_steps must be >= 1");
  if (spec.anchors < 1 || spec.samples < 1 || spec.pairs < 1 || spec.count < 1) {
    invalid(node, "job.anchors, samples, pairs and count must be >= 1");
  }
  return spec;
}

QuadratureParams parse_quadrature(const YAML::Node& node) {
  reject_unknown(node, "quadrature", {"rel_tol", "abs_tol", "max_refinement_depth", "singular_exclusion",
                                      "exclusion_fraction", "base_rule", "max_panels"});
  QuadratureParams q;
  optional_scalar(node, "rel_tol", "quadrature", q.rel_tol);
  optional_scalar(node, "abs_tol", "quadrature", q.abs_tol);
  optional_scalar(node, "max_refinement_depth", "quadrature", q.max_refinement_depth);
  if (const YAML::Node e = node["singular_exclusion"]) q.singular_exclusion = scalar<double>(e, "quadrature.singular_exclusion");
  optional_scalar(node, "exclusion_fraction", "quadrature", q.exclusion_fraction);
  if (const YAML::Node r = node["base_rule"]) {
    try {
      q.base_rule = panel_rule_from_string(scalar<std::string>(r, "quadrature.base_rule"));
    } catch (const Error& e) {
      invalid(r, std::string("quadrature.base_rule: ") + e.what());
    }
  }
  optional_scalar(node, "max_panels", "quadrature", q.max_panels);
  try {
    q.validate();
  } catch (const Error& e) {
    invalid(node, std::string("quadrature: ") + e.what());
  }
  return q;
}

}  // namespace

Variety build_variety(const VarietySpec& spec) {
  if (spec.fixture) return fixture_variety(*spec.fixture);
  std::vector<SparsePolynomial> polys;
  for (const auto& t : spec.polynomials) polys.emplace_back(spec.weights.size(), t);
  return Variety(Weights(spec.weights), std::move(polys), spec.pure_dim);
}

BumpSpec build_bump(const FormSpec& spec, std::size_t dim) {
  BumpSpec bump = default_bump(dim);
  if (spec.h) bump.h = SparsePolynomial(dim, *spec.h);
  bump.r0 = spec.r0;
  bump.R = spec.R;
  return bump;
}

ZeroOneForm build_form(const FormSpec& spec, std::size_t dim) {
  if (spec.builtin == "zero") return zero_form(dim, spec.R);
  const BumpSpec bump = build_bump(spec, dim);
  ZeroOneForm form = spec.builtin == "bump-dbar" ? bump_dbar_form(bump) : raw_bump_form(bump);
  return spec.scale == 1.0 ? form : scaled(form, Complex(spec.scale, 0.0));
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(ConfigErrorKind::Parse, e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError(ConfigErrorKind::Parse, 0, "empty config");
  if (!root.IsMap()) throw ConfigError(ConfigErrorKind::Parse, line_of(root), "config must be a mapping");
  reject_unknown(root, "", {"variety", "form", "job", "quadrature", "monte_carlo", "seed", "threads", "output"});

  RunConfig config;
  if (!root["variety"]) invalid(root, "variety is required");
  if (!root["job"]) invalid(root, "job is required");
  config.variety = parse_variety(root["variety"]);
  if (const YAML::Node f = root["form"]) config.form = parse_form(f);
  config.job = parse_job(root["job"]);
  if (const YAML::Node q = root["quadrature"]) config.quadrature = parse_quadrature(q);
  if (const YAML::Node mc = root["monte_carlo"]) {
    reject_unknown(mc, "monte_carlo", {"samples", "lines"});
    optional_scalar(mc, "samples", "monte_carlo", config.monte_carlo.samples);
    optional_scalar(mc, "lines", "monte_carlo", config.monte_carlo.lines);
    if (config.monte_carlo.samples < 2) invalid(mc, "monte_carlo.samples must be >= 2");
  }
  optional_scalar(root, "seed", "", config.seed);
  optional_scalar(root, "threads", "", config.threads);
  if (config.threads < 1) invalid(root["threads"], "threads must be >= 1");
  if (const YAML::Node out = root["output"]) {
    reject_unknown(out, "output", {"path", "format"});
    optional_scalar(out, "path", "output", config.output.path);
    optional_scalar(out, "format", "output", config.output.format);
    if (config.output.format != "json" && config.output.format != "csv") {
      invalid(out["format"], "output.format must be json or csv");
    }
  }

  // Point dimensions against the variety.
  const std::size_t n = build_variety(config.variety).ambient_dim();
  for (std::size_t i = 0; i < config.job.points.size(); ++i) {
    if (config.job.points[i].size() != n) {
      invalid(root["job"]["points"][i], "job.points[" + std::to_string(i) + "] has " +
                                            std::to_string(config.job.points[i].size()) +
                                            " coordinates, ambient dimension is " + std::to_string(n));
    }
  }
  if (config.form.h) {
    for (std::size_t i = 0; i < config.form.h->size(); ++i) {
      if ((*config.form.h)[i].exponents.size() != n) {
        invalid(root["form"]["h"][i], "form.h[" + std::to_string(i) + "] exponents do not match ambient dimension " +
                                          std::to_string(n));
      }
    }
  }
  return config;
}

namespace {

void emit_terms(YAML::Emitter& out, const std::vector<Term>& ts) {
  out << YAML::BeginSeq;
  for (const auto& t : ts) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "exponents" << YAML::Value << YAML::Flow << t.exponents;
    out << YAML::Key << "re" << YAML::Value << t.coefficient.real();
    out << YAML::Key << "im" << YAML::Value << t.coefficient.imag();
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "variety" << YAML::Value << YAML::BeginMap;
  if (c.variety.fixture) {
    out << YAML::Key << "fixture" << YAML::Value << *c.variety.fixture;
  } else {
    out << YAML::Key << "weights" << YAML::Value << YAML::Flow << c.variety.weights;
    out << YAML::Key << "polynomials" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : c.variety.polynomials) {
      out << YAML::BeginMap << YAML::Key << "terms" << YAML::Value;
      emit_terms(out, p);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    if (c.variety.pure_dim) out << YAML::Key << "pure_dim" << YAML::Value << *c.variety.pure_dim;
  }
  out << YAML::EndMap;

  out << YAML::Key << "form" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "builtin" << YAML::Value << c.form.builtin;
  if (c.form.h) {
    out << YAML::Key << "h" << YAML::Value;
    emit_terms(out, *c.form.h);
  }
  out << YAML::Key << "r0" << YAML::Value << c.form.r0;
  out << YAML::Key << "R" << YAML::Value << c.form.R;
  out << YAML::Key << "scale" << YAML::Value << c.form.scale;
  out << YAML::EndMap;

  const JobSpec& j = c.job;
  out << YAML::Key << "job" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << j.kind;
  out << YAML::Key << "solver" << YAML::Value << j.solver;
  if (!j.points.empty()) {
    out << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
    for (const auto& z : j.points) {
      out << YAML::Flow << YAML::BeginSeq;
      for (const Complex& v : z) out << YAML::Flow << YAML::BeginSeq << v.real() << v.imag() << YAML::EndSeq;
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::Key << "anchors" << YAML::Value << j.anchors;
  out << YAML::Key << "samples" << YAML::Value << j.samples;
  out << YAML::Key << "fd_step" << YAML::Value << j.fd_step;
  out << YAML::Key << "thetas" << YAML::Value << YAML::Flow << j.thetas;
  out << YAML::Key << "pairs" << YAML::Value << j.pairs;
  out << YAML::Key << "scales" << YAML::Value << YAML::Flow << j.scales;
  out << YAML::Key << "path_steps" << YAML::Value << j.path_steps;
  out << YAML::Key << "radii" << YAML::Value << YAML::Flow << j.radii;
  out << YAML::Key << "integrand" << YAML::Value << j.integrand;
  out << YAML::Key << "count" << YAML::Value << j.count;
  out << YAML::EndMap;

  const QuadratureParams& q = c.quadrature;
  out << YAML::Key << "quadrature" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rel_tol" << YAML::Value << q.rel_tol;
  out << YAML::Key << "abs_tol" << YAML::Value << q.abs_tol;
  out << YAML::Key << "max_refinement_depth" << YAML::Value << q.max_refinement_depth;
  if (q.singular_exclusion) out << YAML::Key << "singular_exclusion" << YAML::Value << *q.singular_exclusion;
  out << YAML::Key << "exclusion_fraction" << YAML::Value << q.exclusion_fraction;
  out << YAML::Key << "base_rule" << YAML::Value << to_string(q.base_rule);
  out << YAML::Key << "max_panels" << YAML::Value << q.max_panels;
  out << YAML::EndMap;

  out << YAML::Key << "monte_carlo" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "samples" << YAML::Value << c.monte_carlo.samples;
  out << YAML::Key << "lines" << YAML::Value << c.monte_carlo.lines;
  out << YAML::EndMap;

  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "threads" << YAML::Value << c.threads;
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "path" << YAML::Value << c.output.path;
  out << YAML::Key << "format" << YAML::Value << c.output.format;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace dbarcone::app

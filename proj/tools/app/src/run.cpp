#include "dbarcone_app/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <random>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace dbarcone::app {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

json point(const CVector& z) {
  json out = json::array();
  for (Eigen::Index k = 0; k < z.size(); ++k) out.push_back({number(z[k].real()), number(z[k].imag())});
  return out;
}

void put_complex(json& row, const std::string& name, Complex v) {
  row[name + "_re"] = number(v.real());
  row[name + "_im"] = number(v.imag());
}

json yaml_to_json(const YAML::Node& node) {
  if (node.IsMap()) {
    json out = json::object();
    for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_to_json(kv.second);
    return out;
  }
  if (node.IsSequence()) {
    json out = json::array();
    for (const auto& item : node) out.push_back(yaml_to_json(item));
    return out;
  }
  if (node.IsScalar()) {
    const std::string s = node.Scalar();
    long long i = 0;
    double d = 0.0;
    if (YAML::convert<long long>::decode(node, i)) return i;
    if (YAML::convert<double>::decode(node, d)) return d;
    return s;
  }
  return nullptr;
}

QuadratureParams quadrature_of(const RunConfig& c) { return c.quadrature; }

SamplingOptions sampling_of(const RunConfig& c) {
  SamplingOptions o;
  o.n_samples = c.monte_carlo.samples;
  o.n_lines = c.monte_carlo.lines;
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

json estimate(const MonteCarloEstimate& e) {
  return {{"value", number(e.value)}, {"std_error", number(e.std_error)}, {"samples", e.samples}};
}

json job_solve(const RunConfig& c, const Variety& variety, const ZeroOneForm& form) {
  const bool potential_known = c.form.builtin == "bump-dbar";
  const BumpSpec bump = build_bump(c.form, variety.ambient_dim());
  const PointSolver solver =
      make_solver(variety, form, c.job.solver == "l2" ? SolverKind::L2 : SolverKind::Direct, quadrature_of(c));
  json rows = json::array();
  for (std::size_t i = 0; i < c.job.points.size(); ++i) {
    const auto& p = c.job.points[i];
    const CVector z = Eigen::Map<const CVector>(p.data(), static_cast<Eigen::Index>(p.size()));
    const SolveResult r = solver(z);
    json row;
    row["index"] = i;
    row["z"] = point(z);
    put_complex(row, "value", r.value);
    row["quadrature_error"] = number(r.quadrature_error);
    row["truncation_radius"] = number(r.truncation_radius_used);
    if (potential_known && z.norm() > 0.0) {
      // g = c·h·χ for the exact form c·∂̄(hχ), away from the origin.
      const Complex psi = c.form.scale * bump_potential(bump, std::span<const Complex>(z.data(), p.size()));
      put_complex(row, "potential", psi);
      row["potential_diff"] = number(std::abs(r.value - psi));
    }
    rows.push_back(row);
  }
  return {{"summary", {{"points", c.job.points.size()}, {"solver", c.job.solver}}}, {"rows", rows}};
}

json job_residual(const RunConfig& c, const Variety& variety, const ZeroOneForm& form) {
  const LinkSample link = sample_link(variety, c.job.anchors, c.seed);
  const PointSolver solver =
      make_solver(variety, form, c.job.solver == "l2" ? SolverKind::L2 : SolverKind::Direct, quadrature_of(c));
  json rows = json::array();
  std::vector<double> all;
  double worst = 0.0;
  double halving = 0.0;
  for (std::size_t a = 0; a < link.points.size(); ++a) {
    ResidualOptions o;
    o.n_samples = c.job.samples;
    o.fd_step = c.job.fd_step;
    o.seed = c.seed + a;
    o.threads = c.threads;
    const ResidualReport rep = dbar_residual(variety, form, solver, link.points[a], o);
    halving = std::max(halving, rep.step_halving_change);
    for (const auto& s : rep.samples) {
      json row;
      row["anchor"] = a;
      put_complex(row, "s", s.s);
      row["x"] = point(s.x);
      row["residual_s"] = number(s.residual_s);
      row["residual_x"] = s.residual_x;
      row["residual"] = number(s.residual);
      rows.push_back(row);
      all.push_back(s.residual);
      worst = std::max(worst, s.residual);
    }
  }
  std::sort(all.begin(), all.end());
  const double med = all.empty() ? 0.0
                     : all.size() % 2 ? all[all.size() / 2]
                                      : 0.5 * (all[all.size() / 2 - 1] + all[all.size() / 2]);
  json anchors = json::array();
  for (const auto& p : link.points) anchors.push_back(point(p));
  return {{"summary",
           {{"solver", c.job.solver},
            {"fd_step", c.job.fd_step},
            {"median", number(med)},
            {"max", number(worst)},
            {"step_halving_change", number(halving)},
            {"anchors", anchors}}},
          {"rows", rows}};
}

json job_holder(const RunConfig& c, const Variety& variety, const ZeroOneForm& form) {
  HolderOptions o;
  o.theta = c.job.thetas.front();
  o.n_pairs = c.job.pairs;
  o.scales = c.job.scales;
  o.path_steps = c.job.path_steps;
  o.seed = c.seed;
  o.threads = c.threads;
  const PointSolver solver = make_solver(variety, form, SolverKind::Direct, quadrature_of(c));
  const HolderReport base = holder_report(variety, form, solver, o);
  json sweep = json::array();
  for (double theta : c.job.thetas) {
    const HolderReport r = rescore(base, theta, form.sup_bound());
    const IsotropicReport iso = isotropic_report(r);
    json by_scale = json::object();
    for (const auto& [s, v] : r.constant_by_scale) {
      std::ostringstream key;
      key << s;
      by_scale[key.str()] = number(v);
    }
    json by_kind = json::object();
    for (const auto& [k, v] : r.constant_by_kind) by_kind[k] = number(v);
    sweep.push_back({{"theta", theta},
                     {"empirical_constant", number(r.empirical_constant)},
                     {"constant_by_scale", by_scale},
                     {"constant_by_kind", by_kind},
                     {"same_line_constant", number(iso.same_line_constant)},
                     {"same_slice_constant", number(iso.same_slice_constant)}});
  }
  json rows = json::array();
  for (const auto& p : base.pairs) {
    rows.push_back({{"kind", p.kind},
                    {"scale", p.scale},
                    {"z", point(p.z)},
                    {"w", point(p.w)},
                    {"dist_upper", number(p.dist_upper)},
                    {"dist_chord", number(p.dist_chord)},
                    {"diff", number(p.diff)},
                    {"ratio_upper", number(p.ratio_upper)},
                    {"ratio_chord", number(p.ratio_chord)},
                    {"near_singular", p.near_singular}});
  }
  return {{"summary",
           {{"theta", base.theta},
            {"R", base.R},
            {"n_pairs", base.pairs.size()},
            {"excluded", base.excluded},
            {"empirical_constant", number(base.empirical_constant)},
            {"sweep", sweep}}},
          {"rows", rows}};
}

json job_l2(const RunConfig& c, const Variety& variety, const ZeroOneForm& form) {
  const L2Report r = l2_report(variety, form, quadrature_of(c), sampling_of(c));
  json summary = {{"R", r.R},
                  {"g_norm", estimate(r.g_norm)},
                  {"form_norm", estimate(r.form_norm)},
                  {"ratio", number(r.ratio)},
                  {"ratio_std_error", number(r.ratio_std_error)},
                  {"degenerate", r.degenerate}};
  json rows = json::array({{{"ratio", number(r.ratio)},
                            {"ratio_std_error", number(r.ratio_std_error)},
                            {"g_norm", number(r.g_norm.value)},
                            {"form_norm", number(r.form_norm.value)}}});
  return {{"summary", summary}, {"rows", rows}};
}

json job_scaling(const RunConfig& c, const Variety& variety) {
  const ScalingReport r = measure_scaling_check(
      variety, c.job.radii, sampling_of(c),
      c.job.integrand == "one" ? ScalingIntegrand::One : ScalingIntegrand::NormSquared);
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"rho", row.rho}, {"value", number(row.estimate.value)}, {"std_error", number(row.estimate.std_error)}});
  }
  return {{"summary", {{"exponent", number(r.exponent)}, {"expected", r.expected}, {"integrand", c.job.integrand}}},
          {"rows", rows}};
}

json job_theta(const RunConfig& c, const Variety& variety, const ZeroOneForm& form) {
  const Variety cone = theta_cone(variety);
  const LinkSample link = sample_link(cone, c.job.count, c.seed);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uniform;
  json rows = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < link.points.size(); ++i) {
    // Points on the cone inside the pulled-back support.
    const CVector& p = link.points[i];
    const ZeroOneForm pulled = theta_pullback_form(form, variety.weights());
    const double smax = orbit_radius(pulled, cone.weights(), p, pulled.support_radius());
    const CVector z = std::polar(smax * (0.1 + 0.8 * uniform(rng)), 2.0 * kPi * uniform(rng)) * p;
    const ThetaCrossCheck r = solve_weighted_via_cone_at(variety, form, z, quadrature_of(c));
    const double diff = std::abs(r.direct.value - r.via_cone.value);
    const double rel = diff / (1.0 + std::abs(r.via_cone.value));
    worst = std::max(worst, rel);
    json row;
    row["index"] = i;
    row["z"] = point(z);
    row["x"] = point(theta_map(variety.weights(), z));
    put_complex(row, "h", r.direct.value);
    put_complex(row, "g", r.via_cone.value);
    row["scaled_diff"] = number(rel);
    rows.push_back(row);
  }
  return {{"summary", {{"points", rows.size()}, {"max_scaled_diff", number(worst)}}}, {"rows", rows}};
}

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return s;
}

}  // namespace

json config_to_json(const RunConfig& config) { return yaml_to_json(YAML::Load(serialize_config(config))); }

RunOutcome run(const RunConfig& config, bool reproducible) {
  RunOutcome outcome;
  json& report = outcome.report;
  report["tool"] = "dbar-cone";
  report["version"] = "0.1.0";
  if (!reproducible) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    report["timestamp"] = buf;
  }
  report["config"] = config_to_json(config);
  report["seed"] = config.seed;
  report["job"] = config.job.kind;

  const auto start = std::chrono::steady_clock::now();
  try {
    const Variety variety = build_variety(config.variety);
    const ZeroOneForm form = build_form(config.form, variety.ambient_dim());
    json result;
    const std::string& kind = config.job.kind;
    if (kind == "solve") {
      result = job_solve(config, variety, form);
    } else if (kind == "residual") {
      result = job_residual(config, variety, form);
    } else if (kind == "holder") {
      result = job_holder(config, variety, form);
    } else if (kind == "l2") {
      result = job_l2(config, variety, form);
    } else if (kind == "scaling") {
      result = job_scaling(config, variety);
    } else {
      result = job_theta(config, variety, form);
    }
    report["status"] = "ok";
    report["form"] = {{"sup_bound", number(form.sup_bound())},
                      {"support_radius", form.support_radius()},
                      {"dbar_closed", form.dbar_closed()}};
    report["summary"] = result["summary"];
    report["rows"] = result["rows"];
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    outcome.exit_code = kExitRuntime;
  }
  if (!reproducible) {
    report["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return outcome;
}

std::string render(const json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  std::ostringstream out;
  if (report.contains("error")) {
    out << "error_code,message\n"
        << csv_cell(report["error"]["code"]) << ',' << csv_cell(report["error"]["message"]) << '\n';
    return out.str();
  }
  const json& rows = report.contains("rows") ? report["rows"] : json::array();
  std::vector<std::string> header;
  for (const auto& row : rows) {
    for (const auto& [key, _] : row.items()) {
      if (std::find(header.begin(), header.end(), key) == header.end()) header.push_back(key);
    }
  }
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_cell(header[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out << ',';
      if (row.contains(header[i])) out << csv_cell(row[header[i]]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dbarcone::app

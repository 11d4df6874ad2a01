#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbarcone/dbarcone.hpp"

namespace dbarcone::app {

enum class ConfigErrorKind { Parse, Validation };

/// First problem found in a config; `line` is 1-based (0 when unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorKind kind, int line, const std::string& message);

  ConfigErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }

 private:
  ConfigErrorKind kind_;
  int line_;
};

struct VarietySpec {
  std::optional<std::string> fixture;
  std::vector<int> weights;
  std::vector<std::vector<Term>> polynomials;
  std::optional<int> pure_dim;

  friend bool operator==(const VarietySpec&, const VarietySpec&) = default;
};

struct FormSpec {
  std::string builtin = "zero";  // zero | bump-dbar | raw-bump
  /// Terms of h; unset means 1 + z1.
  std::optional<std::vector<Term>> h;
  double r0 = 0.3;
  double R = 1.0;
  double scale = 1.0;

  friend bool operator==(const FormSpec&, const FormSpec&) = default;
};

struct JobSpec {
  std::string kind = "solve";  // solve | residual | holder | l2 | scaling | theta-crosscheck
  std::string solver = "direct";
  std::vector<std::vector<Complex>> points;
  std::size_t anchors = 5;
  std::size_t samples = 20;
  double fd_step = 1e-4;
  std::vector<double> thetas = {0.5};
  std::size_t pairs = 60;
  std::vector<double> scales = {1.0, 0.1, 0.01};
  int path_steps = 16;
  std::vector<double> radii = {0.5, 1.0, 2.0};
  std::string integrand = "norm2";
  std::size_t count = 10;

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

struct MonteCarloSpec {
  std::size_t samples = 20000;
  std::size_t lines = 0;

  friend bool operator==(const MonteCarloSpec&, const MonteCarloSpec&) = default;
};

struct OutputSpec {
  std::string path;
  std::string format = "json";

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig {
  VarietySpec variety;
  FormSpec form;
  JobSpec job;
  QuadratureParams quadrature;
  MonteCarloSpec monte_carlo;
  std::uint64_t seed = 1;
  int threads = 1;
  OutputSpec output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates. Throws ConfigError on the first problem.
RunConfig parse_config(const std::string& text);

/// YAML text that parses back to an equal config.
std::string serialize_config(const RunConfig& config);

Variety build_variety(const VarietySpec& spec);
BumpSpec build_bump(const FormSpec& spec, std::size_t dim);
ZeroOneForm build_form(const FormSpec& spec, std::size_t dim);

}  // namespace dbarcone::app

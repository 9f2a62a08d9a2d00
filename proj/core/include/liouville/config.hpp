#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "liouville/greens.hpp"
#include "liouville/potential.hpp"

namespace liouville {

using nlohmann::json;

struct Tolerances {
  double grad = 1e-8;
  double multiplier = 1e-6;
  double quad_rel = 1e-10;
  double fixed_point = 1e-10;
};

struct SolverConfig {
  double R0 = 10.0;
  int max_iterations = 50;
  std::string residual_mode = "discrete";  // or "exact"
  double h_solve = 0.0;                    // 0: pick from eps
  int truncation_degree = 32;              // Navier ball modes
};

// Everything a run needs; doubles as the CLI RunConfig. Strictly validated:
// unknown keys are rejected.
struct ProblemConfig {
  int m = 1;
  int k = 1;
  greens::BoundaryCondition bc = greens::BoundaryCondition::Dirichlet;

  enum class DomainKind { Ball2m, Planar };
  DomainKind domain_kind = DomainKind::Planar;
  std::optional<Domain2D> planar;  // set when DomainKind::Planar
  double h = 1.0 / 128;

  json potential_spec = json{{"type", "constant"}, {"value", 1.0}};
  Potential V;

  double eps = 0.05;
  std::vector<double> eps_sweep;
  double delta0 = 0.25;
  std::uint64_t seed = 12345;
  std::vector<std::vector<double>> seed_xi;

  std::string green_method = "auto";  // disc_images | grid2d | boggio | navier
  std::string out_dir = "out";
  Tolerances tol;
  SolverConfig solver;

  Domain2D planar_domain() const;
};

ProblemConfig parse_config(const json& j);
ProblemConfig load_config_file(const std::string& path);
json config_to_json(const ProblemConfig& cfg);

Potential parse_potential(const json& j);
greens::GreenModel make_green_model(const ProblemConfig& cfg);

// Named built-in configurations (disc-k1, disc-k2, square-k1, ball4-k1);
// preset_dir falls back to the LIOUVILLE_PRESET_DIR environment variable and
// the compiled-in source tree location.
json load_preset(const std::string& name, const std::string& preset_dir = "");

}  // namespace liouville

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "liouville/domain.hpp"

namespace liouville::search {

using Config = Eigen::VectorXd;  // k concentration points, bubble-major (2k entries)
using Evaluator = std::function<double(const Config&)>;
using Gradient = std::function<Config(const Config&)>;

// Admissible configurations: every point at distance >= 2 delta0 from the
// boundary and pairwise separations >= 2 delta0.
struct SearchRegion {
  Domain2D domain;
  int k = 1;
  double delta0 = 0.25;
  double barrier_stiffness = 1e-4;

  int dim() const { return 2 * k; }
  double min_slack(const Config& xi) const;  // negative outside D
  bool contains(const Config& xi) const { return min_slack(xi) > 0.0; }
  double barrier(const Config& xi) const;
  Config barrier_gradient(const Config& xi) const;
  std::vector<Config> random_seeds(int n, std::uint64_t seed) const;
  // Push a random admissible configuration onto a face of D.
  std::vector<Config> boundary_samples(int n, std::uint64_t seed) const;
};

enum class CritType { Minimum, Maximum, Saddle, Degenerate, BoundaryRejected };

struct CriticalPoint {
  Config xi;
  double value = 0.0;
  double grad_norm = 0.0;
  CritType type = CritType::Minimum;
  int saddle_index = 0;
  Eigen::VectorXd hessian_eigs;
  bool constraint_active = false;
  bool degenerate = false;
};

struct MinimizeOptions {
  int max_iterations = 600;
  double grad_tol = 1e-8;
  double fd_step_rel = 1e-6;       // of the domain diameter, for FD gradients
  int random_seeds = 32;
  std::uint64_t seed = 12345;
  bool newton_polish = true;
};

// Multi-start barrier descent with Newton polish; constraint-active minima
// are polished tangentially so the result does not depend on the stiffness.
CriticalPoint find_minimum(const SearchRegion& region, const Evaluator& f,
                           const std::vector<Config>& seeds,
                           const MinimizeOptions& opts = {},
                           const Gradient& grad = nullptr);

// FD Hessian classification at a (near-)critical point.
CriticalPoint classify(const SearchRegion& region, const Evaluator& f,
                       const Config& xi, double fd_step_rel = 1e-4);

enum class LinkingVerdict { Holds, Fails, BoundaryHit, Inconclusive };

struct LinkingOptions {
  int max_iterations = 800;
  double relax_tol = 1e-6;       // perpendicular gradient at the string nodes
  double level_tol = 1e-4;       // |phi - C| window for the boundary check
  int boundary_samples = 256;
  std::uint64_t seed = 777;
};

struct LinkingResult {
  LinkingVerdict verdict = LinkingVerdict::Inconclusive;
  double level = 0.0;    // estimated critical level C
  double sup_B0 = 0.0;
  double gap = 0.0;      // remaining relaxation gradient (Inconclusive only)
  bool degenerate = false;
  std::vector<Config> path;  // relaxed string (path mode)
};

// B is a sampled connected set (a path); B0 the subset held fixed, given as
// node indices into B. When B0 covers all of B the min-case sufficient
// condition inf_D phi < inf_boundary phi is checked instead, with C the
// interior minimum.
LinkingResult check_linking_level(const SearchRegion& region, const Evaluator& f,
                                  const std::vector<Config>& B,
                                  const std::vector<int>& B0,
                                  const LinkingOptions& opts = {},
                                  const Gradient& grad = nullptr);

}  // namespace liouville::search

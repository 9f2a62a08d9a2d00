#pragma once

#include "liouville/config.hpp"
#include "liouville/linearized.hpp"
#include "liouville/reduced.hpp"
#include "liouville/search.hpp"

namespace liouville::reduction {

using bubbles::Ansatz;
using greens::GreenModel;
using greens::VecN;
using linearized::KernelBasis;
using linearized::LinearizedOperator;

struct FixedPointOptions {
  int max_iterations = 50;
  double rel_tol = 1e-10;
  bubbles::ResidualMode residual_mode = bubbles::ResidualMode::Stencil;
  double ball_constant = 50.0;  // admissibility bound C eps|log eps| on phi_1
};

struct ReductionResult {
  GridField phi;  // expanded frame correction
  Eigen::MatrixXd c;
  int iterations = 0;
  bool converged = false;
  double phi_sup = 0.0;
  double phi_starstar = 0.0;
  double lin_residual_star = 0.0;
  double orthogonality = 0.0;

  GridField u_final;  // physical frame, same nodes as phi
  double mass = 0.0;  // rho^{2m} int V e^u
  double pde_residual_star = 0.0;
  double J_U = 0.0;
  double F_eps = 0.0;
  double theta_eps = 0.0;
};

// Contraction fixed point phi <- Q(N(phi) - R) for the intermediate problem.
// The discrete residual R is formed with the same cut-cell rows as the
// operator so the final discrete PDE residual telescopes to solver accuracy.
ReductionResult solve_intermediate(const Ansatz& ansatz, const LinearizedOperator& op,
                                   const KernelBasis& basis,
                                   const FixedPointOptions& opts = {});

struct EnergyOptions {
  double h_solve = 1.0 / 128;
  double R0 = 10.0;
  FixedPointOptions fp;
};

// F_eps(xi) = J_rho[U(xi) + phi_xi], with theta_eps = F_eps - J_rho[U].
ReductionResult reduced_energy_F(const GreenModel& green, const Potential& V,
                                 const std::vector<VecN>& xi, double eps, double delta0,
                                 const EnergyOptions& opts = {});

struct PipelineResult {
  search::CriticalPoint phi_critical;
  Eigen::VectorXd xi_star;
  ReductionResult reduction;
  double mass_ratio = 0.0;      // mass / (k Lambda_{2m})
  double max_multiplier = 0.0;
  double multiplier_tol = 0.0;
  bool multipliers_ok = false;
  double sup_near = 0.0;        // sup of u on the bubble balls
  double sup_far = 0.0;         // sup of u on the complement
};

// End-to-end: optimize phi_k, polish on F_eps, solve, verify multipliers and
// report blow-up diagnostics. Throws ConfigError when no admissible critical
// point is found.
PipelineResult construct_solution(const ProblemConfig& cfg,
                                  const std::vector<VecN>& seed_xi = {});

}  // namespace liouville::reduction

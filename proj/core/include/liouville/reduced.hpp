#pragma once

#include <vector>

#include "liouville/bubbles.hpp"

namespace liouville::reduced {

using bubbles::Ansatz;
using greens::GreenModel;
using greens::VecN;

// Saturation level standing in for -infinity on the diagonal / boundary.
inline constexpr double kPhiFloor = -1e6;

struct PhiValue {
  double value = 0.0;
  bool saturated = false;  // hit the -infinity sentinel
};

// phi_k(xi) = -sum_i [2 log V(xi_i) + H(xi_i,xi_i)] - sum_{i!=j} G(xi_i,xi_j)
PhiValue phi_k_checked(const GreenModel& green, const Potential& V,
                       const std::vector<VecN>& xi);
double phi_k(const GreenModel& green, const Potential& V, const std::vector<VecN>& xi);

// Gradient with respect to all 2mk coordinates, bubble-major layout.
Eigen::VectorXd grad_phi_k(const GreenModel& green, const Potential& V,
                           const std::vector<VecN>& xi);

struct EnergyResult {
  double value = 0.0;
  double quad_error = 0.0;
  double quadratic_part = 0.0;  // 1/2 int |(-Delta)^{m/2} U|^2
  double potential_part = 0.0;  // rho^{2m} int V e^U
};

// J_rho(U) for the ansatz. Uses the boundary-zero structure of U to trade
// the gradient integral for bubble-weighted integrals of U itself.
EnergyResult energy(const Ansatz& ansatz);

struct ReducedReport {
  double eps = 0.0;
  double J = 0.0;
  double phi = 0.0;
  double expansion_residual = 0.0;  // J - (b phi + 4 m b k |log eps| - 4 b k)
  double quad_error = 0.0;
};

struct ExpansionSweep {
  std::vector<ReducedReport> reports;
  double fitted_slope = 0.0;
};

ExpansionSweep expansion_check(const GreenModel& green, const Potential& V,
                               const std::vector<VecN>& xi,
                               const std::vector<double>& eps_sweep, double delta0);

// Least-squares slope of log|y| against log x.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace liouville::reduced

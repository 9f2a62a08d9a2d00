#pragma once

#include <memory>
#include <vector>

#include "liouville/greens.hpp"
#include "liouville/potential.hpp"

namespace liouville::bubbles {

using greens::GreenModel;
using greens::VecN;

// Entire radial solution of the limit problem:
//   U_{delta,xi}(x) = log( alpha_{2m} Q delta^{2m} / (delta^2+|x-xi|^2)^{2m} ).
// Throws for Q <= 0 (no standard solutions).
double standard_bubble(int m, double Q, double delta, const VecN& xi, const VecN& x);

// Heights from the concentration points:
//   2m log mu_i = H(xi_i,xi_i) + log V(xi_i) + sum_{j!=i} G(xi_j,xi_i).
std::vector<double> select_mu(const GreenModel& green, const Potential& V,
                              const std::vector<VecN>& xi);

struct BubbleConfig {
  int m = 1;
  std::vector<VecN> xi;
  std::vector<double> mu;
  double eps = 0.0;
  double rho = 0.0;     // derived from eps
  double delta0 = 0.0;  // separation radius of the admissible set
  int k() const { return static_cast<int>(xi.size()); }
};

// rho^{2m} = alpha_{2m} (2m-1)! eps^{2m} / (1+eps^2)^{2m}
double rho_from_eps(int m, double eps);

// Validates membership in the admissible set (boundary distance and pairwise
// separation >= 2 delta0, V > 0 at the points) and fills mu and rho.
BubbleConfig make_config(const GreenModel& green, const Potential& V,
                         const std::vector<VecN>& xi, double eps, double delta0);

enum class ResidualMode { Exact, Stencil };

// First approximation U = sum_i (u_i + H_i) with its expanded-frame form
// W(y) = U(eps y) + 2m log(rho eps), plus the operators T, R, N built on it.
class Ansatz {
 public:
  const BubbleConfig& config() const { return cfg_; }
  int m() const { return cfg_.m; }
  int k() const { return cfg_.k(); }
  double eps() const { return cfg_.eps; }
  double rho() const { return cfg_.rho; }
  const Potential& potential() const { return V_; }
  const GreenModel& green() const { return *green_; }

  double scaled_bubble(int i, const VecN& x) const;  // u_i
  double correction(int i, const VecN& x) const;     // H_i
  double U(const VecN& x) const;
  double W(const VecN& y) const;        // y in the expanded frame
  double T(const VecN& y) const;        // V(eps y) e^{W(y)}
  double residual_exact(const VecN& y) const;

  // Expanded concentration points xi' = xi/eps (planar case).
  std::vector<Vec2> xi_prime() const;

  // Grid realizations (m = 1).
  GridField U_field(std::shared_ptr<const GridGeometry> g) const;
  GridField W_field(std::shared_ptr<const GridGeometry> g) const;
  GridField T_field(std::shared_ptr<const GridGeometry> g) const;
  GridField residual_field(std::shared_ptr<const GridGeometry> g,
                           ResidualMode mode = ResidualMode::Stencil) const;

  // Largest |B_0 U| over boundary samples (construction should null it).
  double boundary_defect(int n_samples = 256) const;

  // Fraction of interior nodes where the nested stencil was computable.
  double last_stencil_coverage() const { return stencil_coverage_; }

  struct Correction;  // per-bubble boundary-matching polyharmonic part

 private:
  friend Ansatz build_ansatz(const BubbleConfig&, const GreenModel&, const Potential&);
  Ansatz() = default;

  BubbleConfig cfg_;
  Potential V_;
  std::shared_ptr<const GreenModel> green_;
  std::vector<std::shared_ptr<const Correction>> corrections_;
  std::vector<double> v_at_xi_;
  mutable double stencil_coverage_ = 1.0;
};

Ansatz build_ansatz(const BubbleConfig& cfg, const GreenModel& green, const Potential& V);

// Nonlinear remainder N(phi) = T (e^phi - phi - 1) evaluated nodewise.
GridField apply_nonlinearity(const GridField& T, const GridField& phi);

}  // namespace liouville::bubbles

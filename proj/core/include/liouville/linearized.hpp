#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <vector>

#include "liouville/bubbles.hpp"
#include "liouville/norms.hpp"

namespace liouville::linearized {

using bubbles::Ansatz;
using greens::VecN;

// Bounded kernel elements of the bubble-linearized operator and the radial
// cutoffs localizing them.
struct KernelBasis {
  int m = 1;
  int k = 0;
  std::vector<double> mu;
  std::vector<Vec2> xi_prime;  // expanded centers (planar case)
  double R0 = 10.0;            // cutoff plateau radius

  double chi(double r) const;  // 1 on r<=R0, 0 on r>=R0+1, quintic in between

  // j = 0 dilation mode, j = 1..2m translation modes; z is bubble-centered.
  double Y(int i, int j, const VecN& z) const;
  // Z_ij on the expanded domain (planar), y absolute.
  double Z(int i, int j, const Vec2& y) const;
  double chiZ(int i, int j, const Vec2& y) const;
};

// Basis for an ansatz; R0 is clamped so every cutoff support stays strictly
// inside the expanded domain.
KernelBasis make_basis(const Ansatz& ansatz, double R0 = 10.0);

double kernel_eval(const KernelBasis& basis, int i, int j, const VecN& z);

// Sparse realization of L = (-Delta_h) - T on the expanded grid with zero
// boundary data, plus the bordered factorization for the projected problem.
class LinearizedOperator {
 public:
  LinearizedOperator(const Ansatz& ansatz, std::shared_ptr<const GridGeometry> geom);

  const GridGeometry& geom() const { return *geom_; }
  std::shared_ptr<const GridGeometry> geom_ptr() const { return geom_; }
  double eps() const { return eps_; }
  double h_expanded() const { return h_eff_; }
  const GridField& T_field() const { return T_field_; }

  // L phi at interior unknowns (cut-cell rows; zero Dirichlet data).
  Eigen::VectorXd apply(const Eigen::VectorXd& phi) const;

  // (-Delta_h) u at interior unknowns for a field with a constant boundary
  // trace (the expanded problem carries 2m log(rho eps) there).
  Eigen::VectorXd neg_laplacian(const Eigen::VectorXd& u, double boundary_value) const;

  struct Bordered;
  const Bordered& bordered(const KernelBasis& basis) const;

 private:
  std::shared_ptr<const GridGeometry> geom_;
  double eps_ = 0.0;
  double h_eff_ = 0.0;
  GridField T_field_;
  LaplacianRows rows_;
  mutable std::shared_ptr<Bordered> bordered_;
  mutable std::vector<double> bordered_key_;
};

struct ProjectedSolveResult {
  GridField phi;                // expanded frame, zero outside
  Eigen::MatrixXd c;            // k x 2m multipliers
  double phi_starstar = 0.0;
  double phi_sup = 0.0;
  double residual_star = 0.0;   // ||L phi - sum c chiZ - h||_* over the grid
  double orthogonality = 0.0;   // worst constraint violation relative to |phi|
};

LinearizedOperator assemble_linearized(const Ansatz& ansatz,
                                       std::shared_ptr<const GridGeometry> geom);

ProjectedSolveResult projected_solve(const LinearizedOperator& op, const GridField& h,
                                     const KernelBasis& basis);

// lambda_k = k(k+2m-1) and the GJMS eigenvalue product; match is exact
// integer equality with t_m.
struct SpectralCheck {
  int m = 0;
  int k_index = 0;
  std::int64_t lambda = 0;
  std::int64_t product = 0;
  std::int64_t t_m = 0;
  bool match = false;
};
SpectralCheck sphere_spectral_check(int m, int k_index);

// Smallest-magnitude eigenvalues of -Delta - alpha_2 mu^2/(mu^2+r^2)^2 on a
// Dirichlet disc of the given radius (symmetric 5-point stencil), for the
// kernel-dimension evidence. Returns `count` values sorted by magnitude.
std::vector<double> near_zero_spectrum(double mu, double ball_radius, double h,
                                       int count, std::uint64_t seed = 12345);

}  // namespace liouville::linearized

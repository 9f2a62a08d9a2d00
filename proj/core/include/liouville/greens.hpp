#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "liouville/grid.hpp"

namespace liouville::greens {

using VecN = Eigen::VectorXd;

enum class Method { DiscImages, BoggioBall, NavierBallIterated, Grid2D };
enum class BoundaryCondition { Dirichlet, Navier };

// Evaluator for the polyharmonic Green function G(x,xi) normalized so that
// (-Delta)^m G = Lambda_{2m} delta_xi, its regular part H = G - 4m log(1/r),
// the Robin function H(xi,xi) and their gradients.
class GreenModel {
 public:
  // m = 1, unit disc, Dirichlet (= Navier). Fully closed-form.
  static GreenModel disc_images();
  // Dirichlet unit ball in R^{2m}, m <= 3; profile integral with the leading
  // constant calibrated against the near-diagonal log coefficient.
  static GreenModel boggio_ball(int m);
  // Navier unit ball in R^4 (m = 2), zonal-harmonic expansion of the regular
  // part truncated at degree L.
  static GreenModel navier_ball4(int truncation_degree = 32);
  // m = 1, planar domain, one sparse solve per source with boundary data -K.
  static GreenModel grid2d(const Domain2D& domain, double h);

  GreenModel(const GreenModel&) = default;
  GreenModel& operator=(const GreenModel&) = default;

  int m() const { return m_; }
  int dim() const { return 2 * m_; }
  Method method() const { return method_; }
  BoundaryCondition bc() const { return bc_; }
  bool analytic() const { return method_ != Method::Grid2D; }
  const Domain2D& planar_domain() const;
  std::shared_ptr<const GridGeometry> grid_geometry() const;
  double domain_diameter() const;

  double green(const VecN& x, const VecN& xi) const;
  double regular_part(const VecN& x, const VecN& xi) const;
  double robin(const VecN& xi) const;
  VecN robin_gradient(const VecN& xi) const;
  VecN grad_x_green(const VecN& x, const VecN& xi) const;
  VecN grad_x_regular(const VecN& x, const VecN& xi) const;

  // 2-D conveniences for the planar methods.
  double green(const Vec2& x, const Vec2& xi) const;
  double regular_part(const Vec2& x, const Vec2& xi) const;
  double robin(const Vec2& xi) const;
  Vec2 robin_gradient2(const Vec2& xi) const;
  Vec2 grad_x_green2(const Vec2& x, const Vec2& xi) const;
  Vec2 grad_x_regular2(const Vec2& x, const Vec2& xi) const;

  bool inside(const VecN& p) const;

  // CSV rows (x, xi, G, H) for plotting.
  void export_table(const std::string& path,
                    const std::vector<std::pair<VecN, VecN>>& pairs) const;

 private:
  GreenModel() = default;
  struct GridBackend;
  struct NavierBackend;
  struct BoggioBackend;

  Method method_ = Method::DiscImages;
  BoundaryCondition bc_ = BoundaryCondition::Dirichlet;
  int m_ = 1;
  std::shared_ptr<GridBackend> grid_;
  std::shared_ptr<NavierBackend> navier_;
  std::shared_ptr<BoggioBackend> boggio_;

  void check_point(const VecN& p, const char* role) const;
};

// Navier iterated-kernel Green function on the unit 4-ball (m = 2); thin
// functional wrapper over GreenModel::navier_ball4.
double navier_ball_green(const VecN& x, const VecN& xi, int truncation_degree = 32);

}  // namespace liouville::greens

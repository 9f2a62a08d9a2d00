#include "liouville/greens.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>

#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"

namespace liouville::greens {

namespace {

double fundamental(int m, double r) { return 4.0 * m * std::log(1.0 / r); }

// |1 - x conj(xi)|^2 under the complex identification of R^2.
double disc_q(const Vec2& x, const Vec2& xi) {
  const double d = x.dot(xi);
  const double c = x.x() * xi.y() - x.y() * xi.x();
  return (1.0 - d) * (1.0 - d) + c * c;
}

Vec2 disc_q_grad_x(const Vec2& x, const Vec2& xi) {
  const double d = x.dot(xi);
  const double c = x.x() * xi.y() - x.y() * xi.x();
  return {2.0 * (1.0 - d) * (-xi.x()) + 2.0 * c * xi.y(),
          2.0 * (1.0 - d) * (-xi.y()) + 2.0 * c * (-xi.x())};
}

Vec2 to2(const VecN& v) { return {v[0], v[1]}; }
VecN from2(const Vec2& v) {
  VecN o(2);
  o << v.x(), v.y();
  return o;
}

}  // namespace

// ---------------------------------------------------------------------------
// Boggio ball backend

struct GreenModel::BoggioBackend {
  int m = 1;
  double c = 0.0;       // leading constant, calibrated to 4m
  double a_const = 0.0; // limit of (log A - profile(A)) as A -> infinity

  // profile(A) = int_1^A (v^2-1)^{m-1} v^{1-2m} dv, via v = e^t.
  double profile(double A) const {
    if (A <= 1.0) return 0.0;
    const double T = std::log(A);
    auto f = [this](double t) { return std::pow(1.0 - std::exp(-2.0 * t), m - 1); };
    QuadOptions opts;
    opts.rel_tol = 1e-13;
    return integrate(f, 0.0, T, opts).value;
  }

  void calibrate() {
    // Slope of the profile against log(1/r) pins the constant; the additive
    // tail constant follows from the same evaluations.
    const double A1 = 1e6, A2 = 1e8;
    const double p1 = profile(A1), p2 = profile(A2);
    const double slope = (p2 - p1) / (std::log(A2) - std::log(A1));
    c = 4.0 * m / slope;
    a_const = std::log(A2) - p2;
  }

  static double bracket(const VecN& x, const VecN& xi) {
    return std::sqrt(x.squaredNorm() * xi.squaredNorm() - 2.0 * x.dot(xi) + 1.0);
  }

  double green(const VecN& x, const VecN& xi) const {
    const double r = (x - xi).norm();
    return c * profile(bracket(x, xi) / r);
  }

  double regular(const VecN& x, const VecN& xi) const {
    const double r = (x - xi).norm();
    if (r < 1e-9) return c * (std::log(bracket(xi, xi)) - a_const);
    return green(x, xi) - fundamental(m, r);
  }
};

// ---------------------------------------------------------------------------
// Navier 4-ball backend (zonal expansion of the regular part)

struct GreenModel::NavierBackend {
  int L = 32;

  // Regular-part zonal modes at radii (r, t) with r=|x|, t=|xi|:
  //   f_l = 4/(l+2) (t^l r^{l+2} + t^{l+2} r^l) - 4/(l+2) t^l r^l
  //         - (4/l) t^l r^l        (l >= 1; the last term is absent at l=0)
  // summed against U_l(cos gamma). Symmetric in (r,t) by construction.
  double regular(const VecN& x, const VecN& xi, double* tail_bound = nullptr) const {
    const double r = x.norm(), t = xi.norm();
    const double rt = r * t;
    double cosg = 1.0;
    if (r > 1e-14 && t > 1e-14) cosg = std::min(1.0, std::max(-1.0, x.dot(xi) / (r * t)));
    // Chebyshev-U recurrence.
    double Um1 = 0.0, U0 = 1.0;
    double sum = 0.0;
    double pow_rt = 1.0;  // (r t)^l
    for (int l = 0; l <= L; ++l) {
      const double f = 4.0 / (l + 2) * pow_rt * (r * r + t * t) -
                       4.0 / (l + 2) * pow_rt - (l >= 1 ? 4.0 / l * pow_rt : 0.0);
      sum += f * U0;
      const double U1 = 2.0 * cosg * U0 - Um1;
      Um1 = U0;
      U0 = U1;
      pow_rt *= rt;
    }
    if (tail_bound) {
      // |U_l| <= l+1 and the mode amplitude is <= 12 (rt)^l / l.
      const double q = rt;
      *tail_bound = q < 1.0 ? 24.0 * std::pow(q, L + 1) / (1.0 - q) : 1e300;
    }
    return sum;
  }

  double green(const VecN& x, const VecN& xi) const {
    double tail = 0.0;
    const double h = regular(x, xi, &tail);
    if (tail > 1e-8)
      throw ToleranceError("zonal truncation not converged; raise the degree", tail);
    return h + fundamental(2, (x - xi).norm());
  }
};

// ---------------------------------------------------------------------------
// Grid backend (m = 1, planar)

struct GreenModel::GridBackend {
  std::shared_ptr<const GridGeometry> geom;
  std::unique_ptr<DirichletSolver> solver;
  mutable std::map<std::pair<long long, long long>, std::shared_ptr<const GridField>> cache;
  mutable std::mutex mtx;

  static std::pair<long long, long long> key_of(const Vec2& xi) {
    return {llround(xi.x() * 1e12), llround(xi.y() * 1e12)};
  }

  // Nodal regular part H(., xi): harmonic with boundary data -K(., xi).
  std::shared_ptr<const GridField> regular_field(const Vec2& xi) const {
    const auto key = key_of(xi);
    {
      std::lock_guard<std::mutex> lk(mtx);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }
    auto g = [xi](const Vec2& p) { return 4.0 * std::log((p - xi).norm()); };
    auto field = std::make_shared<GridField>(solver->solve(g));
    std::lock_guard<std::mutex> lk(mtx);
    cache.emplace(key, field);
    return field;
  }
};

// ---------------------------------------------------------------------------

GreenModel GreenModel::disc_images() {
  GreenModel gm;
  gm.method_ = Method::DiscImages;
  gm.m_ = 1;
  return gm;
}

GreenModel GreenModel::boggio_ball(int m) {
  if (m < 1 || m > 3) throw ConfigError("Boggio ball method supports 1 <= m <= 3");
  GreenModel gm;
  gm.method_ = Method::BoggioBall;
  gm.m_ = m;
  gm.boggio_ = std::make_shared<BoggioBackend>();
  gm.boggio_->m = m;
  gm.boggio_->calibrate();
  return gm;
}

GreenModel GreenModel::navier_ball4(int truncation_degree) {
  if (truncation_degree < 4) throw ConfigError("truncation degree too small");
  GreenModel gm;
  gm.method_ = Method::NavierBallIterated;
  gm.bc_ = BoundaryCondition::Navier;
  gm.m_ = 2;
  gm.navier_ = std::make_shared<NavierBackend>();
  gm.navier_->L = truncation_degree;
  return gm;
}

GreenModel GreenModel::grid2d(const Domain2D& domain, double h) {
  GreenModel gm;
  gm.method_ = Method::Grid2D;
  gm.m_ = 1;
  gm.grid_ = std::make_shared<GridBackend>();
  gm.grid_->geom = GridGeometry::build(domain, h);
  gm.grid_->solver = std::make_unique<DirichletSolver>(gm.grid_->geom, h);
  return gm;
}

const Domain2D& GreenModel::planar_domain() const {
  static const Domain2D unit_disc = Domain2D::disc(Vec2(0, 0), 1.0);
  if (method_ == Method::Grid2D) return grid_->geom->domain;
  if (method_ == Method::DiscImages) return unit_disc;
  throw ConfigError("ball methods have no planar domain");
}

std::shared_ptr<const GridGeometry> GreenModel::grid_geometry() const {
  if (method_ != Method::Grid2D) throw ConfigError("not a grid-backed model");
  return grid_->geom;
}

double GreenModel::domain_diameter() const {
  if (method_ == Method::Grid2D) return grid_->geom->domain.diameter();
  return 2.0;  // unit disc / ball
}

bool GreenModel::inside(const VecN& p) const {
  if (method_ == Method::DiscImages || method_ == Method::Grid2D)
    return planar_domain().inside(to2(p));
  return p.norm() < 1.0;
}

void GreenModel::check_point(const VecN& p, const char* role) const {
  if (p.size() != dim()) throw DomainError(std::string(role) + ": wrong dimension");
  if (!inside(p)) throw DomainError(std::string(role) + ": point outside the domain");
}

double GreenModel::green(const VecN& x, const VecN& xi) const {
  check_point(x, "x");
  check_point(xi, "xi");
  if ((x - xi).norm() == 0.0)
    throw SingularEvaluationError("Green function evaluated on the diagonal");
  switch (method_) {
    case Method::DiscImages: {
      const Vec2 x2 = to2(x), xi2 = to2(xi);
      return 2.0 * std::log(disc_q(x2, xi2) / (x2 - xi2).squaredNorm());
    }
    case Method::BoggioBall:
      return boggio_->green(x, xi);
    case Method::NavierBallIterated:
      return navier_->green(x, xi);
    case Method::Grid2D: {
      const Vec2 x2 = to2(x), xi2 = to2(xi);
      return fundamental(1, (x2 - xi2).norm()) +
             grid_->regular_field(xi2)->interpolate_cubic(x2);
    }
  }
  return 0.0;
}

double GreenModel::regular_part(const VecN& x, const VecN& xi) const {
  check_point(x, "x");
  check_point(xi, "xi");
  switch (method_) {
    case Method::DiscImages:
      return 2.0 * std::log(disc_q(to2(x), to2(xi)));
    case Method::BoggioBall:
      return boggio_->regular(x, xi);
    case Method::NavierBallIterated:
      return navier_->regular(x, xi);
    case Method::Grid2D:
      return grid_->regular_field(to2(xi))->interpolate_cubic(to2(x));
  }
  return 0.0;
}

double GreenModel::robin(const VecN& xi) const { return regular_part(xi, xi); }

VecN GreenModel::robin_gradient(const VecN& xi) const {
  check_point(xi, "xi");
  if (method_ == Method::DiscImages) {
    const double s = 1.0 - xi.squaredNorm();
    return VecN(-8.0 / s * xi);
  }
  if (method_ == Method::BoggioBall) {
    const double s = 1.0 - xi.squaredNorm();
    return VecN(-2.0 * boggio_->c / s * xi);
  }
  // Central differences of the Robin map.
  const double step = 1e-5 * domain_diameter();
  const double min_dist = method_ == Method::Grid2D ? 2.0 * grid_->geom->h : 2.0 * step;
  double bd;
  if (method_ == Method::Grid2D)
    bd = grid_->geom->domain.boundary_distance(to2(xi));
  else
    bd = 1.0 - xi.norm();
  if (bd < min_dist)
    throw BoundaryProximityError("Robin gradient requested too close to the boundary");
  VecN g(dim());
  for (int d = 0; d < dim(); ++d) {
    VecN xp = xi, xm = xi;
    xp[d] += step;
    xm[d] -= step;
    g[d] = (robin(xp) - robin(xm)) / (2.0 * step);
  }
  return g;
}

VecN GreenModel::grad_x_regular(const VecN& x, const VecN& xi) const {
  check_point(x, "x");
  check_point(xi, "xi");
  if (method_ == Method::DiscImages) {
    const Vec2 x2 = to2(x), xi2 = to2(xi);
    const Vec2 g = Vec2(2.0 / disc_q(x2, xi2) * disc_q_grad_x(x2, xi2));
    return from2(g);
  }
  const double step = 1e-6 * domain_diameter();
  VecN g(dim());
  for (int d = 0; d < dim(); ++d) {
    VecN xp = x, xm = x;
    xp[d] += step;
    xm[d] -= step;
    g[d] = (regular_part(xp, xi) - regular_part(xm, xi)) / (2.0 * step);
  }
  return g;
}

VecN GreenModel::grad_x_green(const VecN& x, const VecN& xi) const {
  const VecN d = x - xi;
  const double s = d.squaredNorm();
  if (s == 0.0) throw SingularEvaluationError("Green gradient on the diagonal");
  return VecN(grad_x_regular(x, xi) - 4.0 * m_ / s * d);
}

double GreenModel::green(const Vec2& x, const Vec2& xi) const {
  return green(from2(x), from2(xi));
}
double GreenModel::regular_part(const Vec2& x, const Vec2& xi) const {
  return regular_part(from2(x), from2(xi));
}
double GreenModel::robin(const Vec2& xi) const { return robin(from2(xi)); }
Vec2 GreenModel::robin_gradient2(const Vec2& xi) const {
  return to2(robin_gradient(from2(xi)));
}
Vec2 GreenModel::grad_x_green2(const Vec2& x, const Vec2& xi) const {
  return to2(grad_x_green(from2(x), from2(xi)));
}
Vec2 GreenModel::grad_x_regular2(const Vec2& x, const Vec2& xi) const {
  return to2(grad_x_regular(from2(x), from2(xi)));
}

void GreenModel::export_table(const std::string& path,
                              const std::vector<std::pair<VecN, VecN>>& pairs) const {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << "x1,x2";
  for (int d = 2; d < dim(); ++d) f << ",x" << d + 1;
  f << ",xi1,xi2";
  for (int d = 2; d < dim(); ++d) f << ",xi" << d + 1;
  f << ",G,H\r\n";
  for (const auto& [x, xi] : pairs) {
    for (int d = 0; d < dim(); ++d) f << x[d] << ",";
    for (int d = 0; d < dim(); ++d) f << xi[d] << ",";
    f << green(x, xi) << "," << regular_part(x, xi) << "\r\n";
  }
}

double navier_ball_green(const VecN& x, const VecN& xi, int truncation_degree) {
  return GreenModel::navier_ball4(truncation_degree).green(x, xi);
}

}  // namespace liouville::greens

#include "liouville/reduced.hpp"

#include <cmath>

#include "liouville/constants.hpp"
#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"

namespace liouville::reduced {

PhiValue phi_k_checked(const GreenModel& green, const Potential& V,
                       const std::vector<VecN>& xi) {
  const int m = green.m();
  const int k = static_cast<int>(xi.size());
  double value = 0.0;
  for (int i = 0; i < k; ++i) {
    const Vec2 p = m == 1 ? Vec2(xi[i][0], xi[i][1]) : Vec2(0, 0);
    value -= 2.0 * V.log_value(p) + green.robin(xi[i]);
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      if ((xi[i] - xi[j]).norm() < 1e-14) return {kPhiFloor, true};
      value -= green.green(xi[i], xi[j]);
    }
  if (!(value > kPhiFloor)) return {kPhiFloor, true};
  return {value, false};
}

double phi_k(const GreenModel& green, const Potential& V, const std::vector<VecN>& xi) {
  return phi_k_checked(green, V, xi).value;
}

Eigen::VectorXd grad_phi_k(const GreenModel& green, const Potential& V,
                           const std::vector<VecN>& xi) {
  const int m = green.m();
  const int d = 2 * m;
  const int k = static_cast<int>(xi.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<long>(d) * k);
  for (int n = 0; n < k; ++n) {
    VecN gn = -green.robin_gradient(xi[n]);
    if (m == 1) {
      const Vec2 gl = V.grad_log(Vec2(xi[n][0], xi[n][1]));
      gn[0] -= 2.0 * gl.x();
      gn[1] -= 2.0 * gl.y();
    }
    // G is symmetric, so each pair contributes twice through its x-slot.
    for (int j = 0; j < k; ++j)
      if (j != n) gn -= 2.0 * green.grad_x_green(xi[n], xi[j]);
    g.segment(static_cast<long>(n) * d, d) = gn;
  }
  return g;
}

namespace {

// J contributions for the radial centered-ball case (m = 2).
EnergyResult energy_radial_ball4(const Ansatz& a) {
  const auto& cfg = a.config();
  const double rho2m = std::pow(a.rho(), 4);
  const double v0 = a.potential()(Vec2(0, 0));
  auto at_r = [&](double r) {
    VecN x = VecN::Zero(4);
    x[0] = r;
    return x;
  };
  QuadOptions opts;
  opts.rel_tol = 1e-11;
  const double area = constants_for(2).omega2m();
  auto I1 = integrate(
      [&](double r) {
        const VecN x = at_r(r);
        return std::pow(r, 3) * std::exp(a.scaled_bubble(0, x)) * a.U(x);
      },
      0.0, 1.0, opts);
  auto I2 = integrate(
      [&](double r) {
        const VecN x = at_r(r);
        return std::pow(r, 3) * std::exp(a.U(x));
      },
      0.0, 1.0, opts);
  EnergyResult e;
  e.quadratic_part = 0.5 * rho2m * v0 * area * I1.value;
  e.potential_part = rho2m * v0 * area * I2.value;
  e.value = e.quadratic_part - e.potential_part;
  e.quad_error = rho2m * v0 * area * (0.5 * I1.abs_error + I2.abs_error);
  (void)cfg;
  return e;
}

}  // namespace

EnergyResult energy(const Ansatz& a) {
  const int m = a.m();
  if (m == 2) {
    if (a.k() != 1 || a.config().xi[0].norm() > 1e-12)
      throw ConfigError("m = 2 energy is limited to the centered radial configuration");
    return energy_radial_ball4(a);
  }
  if (m != 1) throw ConfigError("energy supports m = 1 and the radial m = 2 case");

  const auto& dom = a.green().planar_domain();
  const auto& cfg = a.config();
  const double rho2 = a.rho() * a.rho();
  const int k = a.k();

  std::vector<Vec2> centers;
  std::vector<double> radii;
  for (int i = 0; i < k; ++i) {
    const Vec2 c(cfg.xi[i][0], cfg.xi[i][1]);
    double r = dom.boundary_distance(c);
    for (int j = 0; j < k; ++j)
      if (j != i) r = std::min(r, 0.5 * (cfg.xi[i] - cfg.xi[j]).norm());
    centers.push_back(c);
    radii.push_back(0.9 * r);
  }

  auto as_vec = [](const Vec2& p) {
    VecN x(2);
    x << p.x(), p.y();
    return x;
  };

  EnergyResult e;
  double err = 0.0;
  // 1/2 rho^2 sum_i V(xi_i) int e^{u_i} U
  for (int i = 0; i < k; ++i) {
    const double vi = a.potential()(centers[i]);
    auto f = [&](const Vec2& p) {
      const VecN x = as_vec(p);
      return std::exp(a.scaled_bubble(i, x)) * a.U(x);
    };
    QuadResult q = integrate_domain2d(dom, f, centers, radii);
    e.quadratic_part += 0.5 * rho2 * vi * q.value;
    err += 0.5 * rho2 * vi * q.abs_error;
  }
  // rho^2 int V e^U
  {
    auto f = [&](const Vec2& p) { return a.potential()(p) * std::exp(a.U(as_vec(p))); };
    QuadResult q = integrate_domain2d(dom, f, centers, radii);
    e.potential_part = rho2 * q.value;
    err += rho2 * q.abs_error;
  }
  e.value = e.quadratic_part - e.potential_part;
  e.quad_error = err;
  return e;
}

ExpansionSweep expansion_check(const GreenModel& green, const Potential& V,
                               const std::vector<VecN>& xi,
                               const std::vector<double>& eps_sweep, double delta0) {
  const int m = green.m();
  const int k = static_cast<int>(xi.size());
  const Constants cst = constants_for(m);
  const double b = cst.bm();
  const double phi = phi_k(green, V, xi);
  // Constant term: -(2m (psi(2m)-psi(m)) + 2) b k, which is -4bk at m = 1.
  double harm = 0.0;
  for (int j = m; j <= 2 * m - 1; ++j) harm += 1.0 / j;
  const double const_term = (2.0 * m * harm + 2.0) * b * k;

  ExpansionSweep sweep;
  std::vector<double> xs, ys;
  for (double eps : eps_sweep) {
    const auto cfg = bubbles::make_config(green, V, xi, eps, delta0);
    const Ansatz a = bubbles::build_ansatz(cfg, green, V);
    const EnergyResult e = energy(a);
    ReducedReport rep;
    rep.eps = eps;
    rep.J = e.value;
    rep.phi = phi;
    const double predicted =
        b * phi + 4.0 * m * b * k * std::abs(std::log(eps)) - const_term;
    rep.expansion_residual = e.value - predicted;
    rep.quad_error = e.quad_error;
    sweep.reports.push_back(rep);
    xs.push_back(eps);
    ys.push_back(std::abs(rep.expansion_residual));
  }
  sweep.fitted_slope = fit_loglog_slope(xs, ys);
  return sweep;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(std::abs(y[i]), 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace liouville::reduced

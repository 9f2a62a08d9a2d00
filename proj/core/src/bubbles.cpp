#include "liouville/bubbles.hpp"

#include <cmath>
#include <numbers>

#include "liouville/constants.hpp"
#include "liouville/errors.hpp"

namespace liouville::bubbles {

double standard_bubble(int m, double Q, double delta, const VecN& xi, const VecN& x) {
  if (Q <= 0.0)
    throw ConfigError("no standard solutions for Q <= 0");
  if (delta <= 0.0) throw ConfigError("bubble scale delta must be positive");
  if (x.size() != 2 * m || xi.size() != 2 * m)
    throw DomainError("bubble arguments must live in R^{2m}");
  const double alpha = constants_for(m).alpha2m();
  const double s = delta * delta + (x - xi).squaredNorm();
  return std::log(alpha * Q) + 2.0 * m * std::log(delta) - 2.0 * m * std::log(s);
}

std::vector<double> select_mu(const GreenModel& green, const Potential& V,
                              const std::vector<VecN>& xi) {
  const int m = green.m();
  const int k = static_cast<int>(xi.size());
  std::vector<double> mu(k);
  for (int i = 0; i < k; ++i) {
    double rhs = green.robin(xi[i]);
    if (m == 1) {
      rhs += V.log_value(Vec2(xi[i][0], xi[i][1]));
    } else {
      rhs += V.log_value(Vec2(0.0, 0.0));  // higher m restricted to constant V
    }
    for (int j = 0; j < k; ++j)
      if (j != i) rhs += green.green(xi[j], xi[i]);
    mu[i] = std::exp(rhs / (2.0 * m));
  }
  return mu;
}

double rho_from_eps(int m, double eps) {
  if (eps <= 0.0) throw ConfigError("eps must be positive");
  const double alpha = constants_for(m).alpha2m();
  const double f2m1 = static_cast<double>(factorial(2 * m - 1));
  return std::pow(alpha * f2m1, 1.0 / (2.0 * m)) * eps / std::sqrt(1.0 + eps * eps);
}

namespace {

double boundary_dist(const GreenModel& green, const VecN& p) {
  if (green.method() == greens::Method::DiscImages ||
      green.method() == greens::Method::Grid2D)
    return green.planar_domain().boundary_distance(Vec2(p[0], p[1]));
  return 1.0 - p.norm();
}

}  // namespace

BubbleConfig make_config(const GreenModel& green, const Potential& V,
                         const std::vector<VecN>& xi, double eps, double delta0) {
  if (xi.empty()) throw ConfigError("need at least one concentration point");
  if (delta0 <= 0.0) throw ConfigError("delta0 must be positive");
  const int m = green.m();
  for (size_t i = 0; i < xi.size(); ++i) {
    if (!green.inside(xi[i]))
      throw ConfigError("concentration point outside the domain");
    if (boundary_dist(green, xi[i]) < 2.0 * delta0)
      throw ConfigError("concentration point violates the boundary separation 2*delta0");
    for (size_t j = i + 1; j < xi.size(); ++j)
      if ((xi[i] - xi[j]).norm() < 2.0 * delta0)
        throw ConfigError("concentration points closer than 2*delta0");
  }
  BubbleConfig cfg;
  cfg.m = m;
  cfg.xi = xi;
  cfg.eps = eps;
  cfg.rho = rho_from_eps(m, eps);
  cfg.delta0 = delta0;
  cfg.mu = select_mu(green, V, xi);
  return cfg;
}

// ---------------------------------------------------------------------------
// Corrections

struct Ansatz::Correction {
  virtual ~Correction() = default;
  virtual double eval(const VecN& x) const = 0;
};

namespace {

using Correction = Ansatz::Correction;

// Harmonic extension on the unit disc from Fourier coefficients of the
// boundary trace.
struct DiscHarmonic final : Correction {
  double c0 = 0.0;
  std::vector<double> a, b;  // cos/sin coefficients, 1-based mode n = idx+1

  double eval(const VecN& x) const override {
    double v = c0;
    // z^n accumulation; |z| <= 1 keeps this stable.
    double cre = 1.0, cim = 0.0;
    const double px = x[0], py = x[1];
    for (size_t n = 0; n < a.size(); ++n) {
      const double nre = cre * px - cim * py;
      const double nim = cre * py + cim * px;
      cre = nre;
      cim = nim;
      v += a[n] * cre + b[n] * cim;
    }
    return v;
  }
};

// Radial polyharmonic correction a + b r^2 on the unit 4-ball.
struct BallRadial final : Correction {
  double a = 0.0, b = 0.0;
  double eval(const VecN& x) const override { return a + b * x.squaredNorm(); }
};

// Grid-solved harmonic correction for general planar domains.
struct GridCorrection final : Correction {
  GridField field;
  double eval(const VecN& x) const override {
    return field.interpolate_cubic(Vec2(x[0], x[1]));
  }
};

double scaled_bubble_value(int m, double mu, double eps, double v_at_xi,
                           const VecN& xi, const VecN& x) {
  const double s = mu * mu * eps * eps + (x - xi).squaredNorm();
  return 2.0 * m * (std::log(mu) + std::log1p(eps * eps) - std::log(s)) -
         std::log(v_at_xi);
}

}  // namespace

double Ansatz::scaled_bubble(int i, const VecN& x) const {
  return scaled_bubble_value(m(), cfg_.mu[i], cfg_.eps, v_at_xi_[i], cfg_.xi[i], x);
}

double Ansatz::correction(int i, const VecN& x) const { return corrections_[i]->eval(x); }

double Ansatz::U(const VecN& x) const {
  double v = 0.0;
  for (int i = 0; i < k(); ++i) v += scaled_bubble(i, x) + correction(i, x);
  return v;
}

double Ansatz::W(const VecN& y) const {
  return U(VecN(cfg_.eps * y)) + 2.0 * m() * std::log(cfg_.rho * cfg_.eps);
}

double Ansatz::T(const VecN& y) const {
  const VecN x = cfg_.eps * y;
  const double v = m() == 1 ? V_(Vec2(x[0], x[1])) : V_(Vec2(0, 0));
  return v * std::exp(W(y));
}

double Ansatz::residual_exact(const VecN& y) const {
  const VecN x = cfg_.eps * y;
  const double scale = std::pow(cfg_.eps * cfg_.rho, 2.0 * m());
  double lead = 0.0;
  for (int i = 0; i < k(); ++i)
    lead += v_at_xi_[i] * std::exp(scaled_bubble(i, x));
  return scale * lead - T(y);
}

std::vector<Vec2> Ansatz::xi_prime() const {
  if (m() != 1) throw ConfigError("expanded planar points only exist for m = 1");
  std::vector<Vec2> out;
  out.reserve(k());
  for (const auto& p : cfg_.xi) out.emplace_back(p[0] / cfg_.eps, p[1] / cfg_.eps);
  return out;
}

GridField Ansatz::U_field(std::shared_ptr<const GridGeometry> g) const {
  GridField f(std::move(g), Frame::Physical);
  f.fill([this](const Vec2& p) {
    VecN x(2);
    x << p.x(), p.y();
    return U(x);
  });
  return f;
}

GridField Ansatz::W_field(std::shared_ptr<const GridGeometry> g) const {
  GridField f(std::move(g), Frame::Expanded, cfg_.eps);
  f.fill([this](const Vec2& p) {
    VecN y(2);
    y << p.x(), p.y();
    return W(y);
  });
  return f;
}

GridField Ansatz::T_field(std::shared_ptr<const GridGeometry> g) const {
  GridField f(std::move(g), Frame::Expanded, cfg_.eps);
  f.fill([this](const Vec2& p) {
    VecN y(2);
    y << p.x(), p.y();
    return T(y);
  });
  return f;
}

GridField Ansatz::residual_field(std::shared_ptr<const GridGeometry> g,
                                 ResidualMode mode) const {
  if (m() != 1) throw ConfigError("grid residuals are restricted to m = 1");
  if (mode == ResidualMode::Exact) {
    GridField f(std::move(g), Frame::Expanded, cfg_.eps);
    f.fill([this](const Vec2& p) {
      VecN y(2);
      y << p.x(), p.y();
      return residual_exact(y);
    });
    return f;
  }
  GridField w = W_field(g);
  std::vector<std::uint8_t> ok;
  GridField r = w.polyharmonic_stencil(m(), &ok);
  const auto& geom = r.geom();
  int covered = 0, interior = 0;
  for (int j = 0; j < geom.ny; ++j)
    for (int i = 0; i < geom.nx; ++i) {
      const int id = geom.idx(i, j);
      if (!geom.is_interior[id]) continue;
      ++interior;
      if (ok[id]) {
        VecN y(2);
        const Vec2 p = r.coord(i, j);
        y << p.x(), p.y();
        r.at(i, j) -= T(y);
        ++covered;
      }
    }
  stencil_coverage_ = interior > 0 ? static_cast<double>(covered) / interior : 0.0;
  return r;
}

double Ansatz::boundary_defect(int n_samples) const {
  if (m() != 1) {
    // Radial ball case: U and U' at r = 1.
    VecN p(4);
    p << 1.0, 0.0, 0.0, 0.0;
    return std::abs(U(p));
  }
  const Domain2D& dom = green_->planar_domain();
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const double th = 2.0 * std::numbers::pi * s / n_samples;
    Vec2 p;
    if (dom.kind() == Domain2D::Kind::Disc)
      p = dom.center() + dom.radius() * Vec2(std::cos(th), std::sin(th));
    else {
      // Walk the bounding box for non-disc domains; project by crossing.
      const Vec2 c = dom.center();
      const Vec2 dir(std::cos(th), std::sin(th));
      double lo = 0.0, hi = dom.diameter();
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dom.inside(c + mid * dir))
          lo = mid;
        else
          hi = mid;
      }
      p = c + lo * dir;
    }
    VecN x(2);
    x << p.x(), p.y();
    worst = std::max(worst, std::abs(U(x)));
  }
  return worst;
}

Ansatz build_ansatz(const BubbleConfig& cfg, const GreenModel& green, const Potential& V) {
  Ansatz a;
  a.cfg_ = cfg;
  a.V_ = V;
  a.green_ = std::make_shared<GreenModel>(green);
  const int m = cfg.m;
  a.v_at_xi_.resize(cfg.k());
  for (int i = 0; i < cfg.k(); ++i) {
    const Vec2 p = m == 1 ? Vec2(cfg.xi[i][0], cfg.xi[i][1]) : Vec2(0, 0);
    const double v = V(p);
    if (v <= 0) throw ConfigError("potential must be positive at the bubbles");
    a.v_at_xi_[i] = v;
  }

  std::unique_ptr<DirichletSolver> planar_solver;
  if (m == 1 && green.method() == greens::Method::Grid2D) {
    auto geom = green.grid_geometry();
    planar_solver = std::make_unique<DirichletSolver>(geom, geom->h);
  }

  for (int i = 0; i < cfg.k(); ++i) {
    auto bubble_trace = [&](const VecN& x) {
      return scaled_bubble_value(m, cfg.mu[i], cfg.eps, a.v_at_xi_[i], cfg.xi[i], x);
    };
    if (m == 1 && green.method() == greens::Method::DiscImages) {
      auto c = std::make_shared<DiscHarmonic>();
      const int modes = 320, samples = 1024;
      std::vector<double> g(samples);
      for (int s = 0; s < samples; ++s) {
        const double th = 2.0 * std::numbers::pi * s / samples;
        VecN x(2);
        x << std::cos(th), std::sin(th);
        g[s] = bubble_trace(x);
      }
      c->a.assign(modes, 0.0);
      c->b.assign(modes, 0.0);
      for (int s = 0; s < samples; ++s) c->c0 += g[s];
      c->c0 /= samples;
      for (int n = 1; n <= modes; ++n) {
        double ca = 0.0, cb = 0.0;
        for (int s = 0; s < samples; ++s) {
          const double th = 2.0 * std::numbers::pi * s * n / samples;
          ca += g[s] * std::cos(th);
          cb += g[s] * std::sin(th);
        }
        c->a[n - 1] = 2.0 * ca / samples;
        c->b[n - 1] = 2.0 * cb / samples;
      }
      const double tail = std::abs(c->a.back()) + std::abs(c->b.back());
      if (tail > 1e-9)
        throw ToleranceError("harmonic extension of the bubble trace not converged", tail);
      a.corrections_.push_back(std::move(c));
    } else if (m == 1) {
      // General planar domain: one harmonic solve with the bubble trace.
      auto gb = [&](const Vec2& p) {
        VecN x(2);
        x << p.x(), p.y();
        return bubble_trace(x);
      };
      auto c = std::make_shared<GridCorrection>();
      c->field = planar_solver->solve(gb);
      a.corrections_.push_back(std::move(c));
    } else if (m == 2 && cfg.k() == 1 && cfg.xi[0].norm() < 1e-12) {
      const double delta2 = cfg.mu[0] * cfg.mu[0] * cfg.eps * cfg.eps;
      VecN e1 = VecN::Zero(4);
      e1[0] = 1.0;
      const double u1 = bubble_trace(e1);
      auto c = std::make_shared<BallRadial>();
      if (green.bc() == greens::BoundaryCondition::Dirichlet) {
        const double du1 = -8.0 / (delta2 + 1.0);  // d/dr of the radial bubble at r=1
        c->b = du1 / 2.0;
        c->a = u1 - c->b;
      } else {
        const double lap_u1 = (-32.0 * delta2 - 16.0) / ((delta2 + 1.0) * (delta2 + 1.0));
        c->b = lap_u1 / 8.0;
        c->a = u1 - c->b;
      }
      a.corrections_.push_back(std::move(c));
    } else {
      throw ConfigError(
          "corrections for m >= 2 are limited to a single centered bubble on the ball");
    }
  }
  return a;
}

GridField apply_nonlinearity(const GridField& T, const GridField& phi) {
  GridField out = T;
  const auto& g = T.geom();
  for (int id = 0; id < g.nx * g.ny; ++id) {
    if (!g.is_interior[id]) {
      out.values()[id] = 0.0;
      continue;
    }
    const double p = phi.values()[id];
    out.values()[id] = T.values()[id] * (std::expm1(p) - p);
  }
  return out;
}

}  // namespace liouville::bubbles

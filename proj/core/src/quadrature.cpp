#include "liouville/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

// Gauss-Kronrod 7-15 nodes on [-1,1] (positive half; symmetric).
constexpr double kKronrodNodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kKronrodWeights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
// Embedded Gauss-7 weights, matching Kronrod nodes 0,2,4,6 (even indices).
constexpr double kGaussWeights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

struct Panel {
  double a, b;
  double integral;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fk[15];
  fk[7] = f(c);
  for (int i = 1; i < 8; ++i) {
    fk[7 - i] = f(c - h * kKronrodNodes[i]);
    fk[7 + i] = f(c + h * kKronrodNodes[i]);
  }
  double kron = kKronrodWeights[0] * fk[7];
  double gauss = kGaussWeights[0] * fk[7];
  for (int i = 1; i < 8; ++i) {
    kron += kKronrodWeights[i] * (fk[7 - i] + fk[7 + i]);
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * (fk[7 - i] + fk[7 + i]);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.integral = kron * h;
  const double diff = std::abs(kron - gauss) * h;
  // Standard QUADPACK-style error sharpening.
  p.error = diff * std::min(1.0, std::pow(200.0 * diff / std::max(1e-300, std::abs(kron * h)), 1.5) + 1e-16);
  p.error = std::max(p.error, std::abs(diff) * 1e-6);
  p.error = std::max(p.error, 1e-16 * std::abs(p.integral));
  if (!std::isfinite(p.integral)) p.error = std::numeric_limits<double>::infinity();
  return p;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts) {
  if (a == b) return {0.0, 0.0};
  std::priority_queue<Panel> heap;
  heap.push(evaluate_panel(f, a, b));
  double total = heap.top().integral;
  double err = heap.top().error;
  int n = 1;
  while (n < opts.max_intervals) {
    if (err <= opts.abs_tol || err <= opts.rel_tol * std::abs(total)) break;
    Panel worst = heap.top();
    heap.pop();
    if (!std::isfinite(worst.error) && worst.b - worst.a < 1e-300) {
      throw ToleranceError("quadrature hit a non-integrable point", err);
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  return {total, std::max(err, 0.0)};
}

QuadResult integrate_radial(int m, const std::function<double(double)>& f,
                            double r_max, const QuadOptions& opts) {
  const double area = constants_for(m).omega2m();
  const int p = 2 * m - 1;
  auto g = [&](double r) { return f(r) * std::pow(r, p); };
  QuadResult q = integrate(g, 0.0, r_max, opts);
  return {area * q.value, area * q.abs_error};
}

QuadResult integrate_radial_entire(int m, const std::function<double(double)>& f,
                                   const QuadOptions& opts) {
  const double area = constants_for(m).omega2m();
  const int p = 2 * m - 1;
  auto inner = [&](double r) { return f(r) * std::pow(r, p); };
  // Outer piece via r = 1/s, dr = ds/s^2.
  auto outer = [&](double s) {
    const double r = 1.0 / s;
    return f(r) * std::pow(r, p) * r * r;
  };
  QuadResult qi = integrate(inner, 0.0, 1.0, opts);
  QuadResult qo = integrate(outer, 1e-300, 1.0, opts);
  return {area * (qi.value + qo.value), area * (qi.abs_error + qo.abs_error)};
}

double integrate_periodic(const std::function<double(double)>& f, int n) {
  const double step = 2.0 * std::numbers::pi / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(i * step);
  return s * step;
}

namespace {

// Quintic ramp: 1 at s<=0, 0 at s>=1, C^2 in between.
double ramp(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double t = 1.0 - s;
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

}  // namespace

QuadResult integrate_domain2d(const Domain2D& domain,
                              const std::function<double(const Vec2&)>& f,
                              const std::vector<Vec2>& patch_centers,
                              const std::vector<double>& patch_radii,
                              const DomainQuadOptions& opts) {
  if (patch_centers.size() != patch_radii.size())
    throw ConfigError("patch centers/radii mismatch");
  const size_t np = patch_centers.size();

  auto window = [&](const Vec2& p) -> double {
    double w = 1.0;
    for (size_t q = 0; q < np; ++q) {
      const double r = (p - patch_centers[q]).norm();
      w *= 1.0 - ramp(2.0 * r / patch_radii[q] - 1.0);
    }
    return w;  // 0 deep inside any patch, 1 far from all
  };

  double total = 0.0, err = 0.0;

  // Polar patches with the complementary window.
  for (size_t q = 0; q < np; ++q) {
    const Vec2 c = patch_centers[q];
    const double R = patch_radii[q];
    auto radial_fn = [&](double r) -> double {
      if (r == 0.0) return 0.0;
      auto ang = [&](double th) {
        const Vec2 p = c + r * Vec2(std::cos(th), std::sin(th));
        if (!domain.inside(p)) return 0.0;
        return f(p) * (1.0 - window(p));
      };
      return r * integrate_periodic(ang, opts.angular_nodes) ;
    };
    QuadResult qr = integrate(radial_fn, 0.0, R, opts.radial);
    total += qr.value;
    err += qr.abs_error;
  }

  // Smooth remainder on the background grid with boundary-cell subsampling.
  const Vec2 lo = domain.bbox_lo(), hi = domain.bbox_hi();
  const int n = opts.background_n;
  const double hx = (hi.x() - lo.x()) / n;
  const double hy = (hi.y() - lo.y()) / n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 c(lo.x() + (i + 0.5) * hx, lo.y() + (j + 0.5) * hy);
      const bool c_in = domain.inside(c);
      const double bd = domain.boundary_distance(c);
      const double cell_r = 0.71 * std::max(hx, hy);
      if (!c_in && bd > cell_r) continue;
      double coverage = 1.0;
      if (bd <= cell_r) {
        int inside_count = 0;
        for (int b = 0; b < 4; ++b)
          for (int a = 0; a < 4; ++a)
            if (domain.inside(Vec2(lo.x() + (i + (a + 0.5) / 4.0) * hx,
                                   lo.y() + (j + (b + 0.5) / 4.0) * hy)))
              ++inside_count;
        coverage = inside_count / 16.0;
        if (coverage == 0.0) continue;
      }
      if (!c_in) continue;  // integrand only evaluable inside
      const double w = window(c);
      if (w == 0.0) continue;
      total += f(c) * w * coverage * hx * hy;
    }
  // Background-sum error is O(h^2) on the windowed smooth part.
  err += 2.0 * hx * hy * std::abs(total) * 1e-3;
  return {total, err};
}

}  // namespace liouville

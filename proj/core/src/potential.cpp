#include "liouville/potential.hpp"

#include <cmath>
#include <utility>

#include "liouville/errors.hpp"

namespace liouville {

Potential::Potential() : Potential(constant(1.0)) {}

Potential Potential::constant(double value) {
  if (value <= 0) throw ConfigError("constant potential must be positive");
  Potential p;
  p.f_ = [value](const Vec2&) { return value; };
  p.grad_ = [](const Vec2&) { return Vec2(0, 0); };
  p.desc_ = "constant";
  return p;
}

Potential Potential::affine(double c, double gx, double gy) {
  Potential p;
  p.f_ = [=](const Vec2& x) { return c + gx * x.x() + gy * x.y(); };
  p.grad_ = [=](const Vec2&) { return Vec2(gx, gy); };
  p.desc_ = "affine";
  return p;
}

Potential Potential::bumps(std::vector<Vec2> centers, std::vector<double> amps,
                           std::vector<double> widths) {
  if (centers.size() != amps.size() || centers.size() != widths.size())
    throw ConfigError("bump potential needs matching centers/amps/widths");
  Potential p;
  p.f_ = [=](const Vec2& x) {
    double v = 1.0;
    for (size_t i = 0; i < centers.size(); ++i)
      v += amps[i] * std::exp(-(x - centers[i]).squaredNorm() / (2 * widths[i] * widths[i]));
    return v;
  };
  p.grad_ = [=](const Vec2& x) {
    Vec2 g(0, 0);
    for (size_t i = 0; i < centers.size(); ++i) {
      const double s2 = widths[i] * widths[i];
      const double e = amps[i] * std::exp(-(x - centers[i]).squaredNorm() / (2 * s2));
      g += -e / s2 * (x - centers[i]);
    }
    return g;
  };
  p.desc_ = "bumps";
  return p;
}

Potential Potential::ring_compensated(double ring_radius_sq, double strength,
                                      std::function<double(const Vec2&)> base,
                                      std::function<Vec2(const Vec2&)> base_grad) {
  Potential p;
  p.f_ = [=](const Vec2& x) {
    const double s = x.squaredNorm() - ring_radius_sq;
    return std::exp(-0.5 * (strength * s * s + base(x)));
  };
  p.grad_ = [=](const Vec2& x) {
    const double s = x.squaredNorm() - ring_radius_sq;
    const Vec2 inner = strength * 2.0 * s * 2.0 * x + base_grad(x);
    return Vec2(-0.5 * p.f_(x) * inner);
  };
  p.desc_ = "ring-compensated";
  return p;
}

Potential Potential::callable(std::function<double(const Vec2&)> f,
                              std::function<Vec2(const Vec2&)> grad,
                              std::string description) {
  Potential p;
  p.f_ = std::move(f);
  p.grad_ = std::move(grad);
  p.desc_ = std::move(description);
  return p;
}

double Potential::log_value(const Vec2& x) const {
  const double v = f_(x);
  if (v <= 0) throw ConfigError("potential must be positive at concentration points");
  return std::log(v);
}

Vec2 Potential::grad_log(const Vec2& x) const {
  const double v = f_(x);
  if (v <= 0) throw ConfigError("potential must be positive at concentration points");
  return Vec2(grad_(x) / v);
}

}  // namespace liouville

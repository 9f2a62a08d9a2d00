#pragma once

#include <functional>
#include <memory>
#include <string>

#include "liouville/domain.hpp"

namespace liouville {

// Smooth scalar potential on the plane with an analytic gradient where the
// form allows one. Immutable; cheap to copy.
class Potential {
 public:
  Potential();  // constant 1

  static Potential constant(double value);
  // value c + gx*x + gy*y
  static Potential affine(double c, double gx, double gy);
  // 1 + sum of Gaussian bumps a_i exp(-|x-p_i|^2 / (2 s_i^2))
  static Potential bumps(std::vector<Vec2> centers, std::vector<double> amps,
                         std::vector<double> widths);
  // exp(-(g(|x|^2) + base(x))/2): makes phi_1 = g(|x|^2) exactly on a disc
  // with regular part base; used for degenerate-ring landscapes.
  static Potential ring_compensated(double ring_radius_sq, double strength,
                                    std::function<double(const Vec2&)> base,
                                    std::function<Vec2(const Vec2&)> base_grad);
  static Potential callable(std::function<double(const Vec2&)> f,
                            std::function<Vec2(const Vec2&)> grad,
                            std::string description);

  double operator()(const Vec2& x) const { return f_(x); }
  Vec2 gradient(const Vec2& x) const { return grad_(x); }
  double log_value(const Vec2& x) const;        // throws on V <= 0
  Vec2 grad_log(const Vec2& x) const;
  const std::string& description() const { return desc_; }

 private:
  std::function<double(const Vec2&)> f_;
  std::function<Vec2(const Vec2&)> grad_;
  std::string desc_;
};

}  // namespace liouville

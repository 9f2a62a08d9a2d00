#include "liouville/constants.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"

namespace liouville {

double PiRational::value() const {
  return static_cast<double>(num) / static_cast<double>(den) *
         std::pow(std::numbers::pi, pi_pow);
}

std::string PiRational::str() const {
  std::ostringstream os;
  os << num;
  if (den != 1) os << "/" << den;
  if (pi_pow == 1) os << "*pi";
  if (pi_pow > 1) os << "*pi^" << pi_pow;
  return os.str();
}

std::int64_t factorial(int n) {
  if (n < 0) throw ConfigError("factorial of negative argument");
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Constants constants_for(int m) {
  if (m < 1) throw ConfigError("operator order m must be a positive integer");
  if (m > 10) throw ConfigError("operator order m too large for exact integer constants");
  Constants c;
  c.m = m;
  const std::int64_t fm1 = factorial(m - 1);
  const std::int64_t fm = factorial(m);
  const std::int64_t f2m1 = factorial(2 * m - 1);
  const std::int64_t pow2 = std::int64_t(1) << (2 * m + 1);

  c.omega = {2, fm1, m};
  c.lambda = {pow2 * fm, 1, m};
  c.alpha = {pow2 * fm, 1, 0};  // 2^{2m+1} m (m-1)! = 2^{2m+1} m!
  c.b = {(pow2 / 2) * fm * fm1, 1, m};
  c.c0 = {fm1, f2m1, m};
  // c1 = c0 * (psi(2m) - psi(m)) = c0 * sum_{j=m}^{2m-1} 1/j, kept exact.
  std::int64_t hn = 0, hd = 1;
  for (int j = m; j <= 2 * m - 1; ++j) {
    hn = hn * j + hd;
    hd *= j;
  }
  const std::int64_t g1 = std::gcd(hn, hd);
  hn /= g1;
  hd /= g1;
  std::int64_t c1n = fm1 * hn, c1d = f2m1 * hd;
  const std::int64_t g2 = std::gcd(c1n, c1d);
  c.c1 = {c1n / g2, c1d / g2, m};
  c.t = 2 * m * fm1 * f2m1;
  return c;
}

QuadResult appendix_integral_oracle(int m, AppendixIntegral which) {
  if (m < 1 || m > 4) throw ConfigError("appendix integral oracle supports 1 <= m <= 4");
  auto integrand = [m, which](double r) {
    const double w = std::pow(1.0 + r * r, -2.0 * m);
    return which == AppendixIntegral::C0 ? w : w * std::log1p(r * r);
  };
  QuadOptions opts;
  opts.rel_tol = 1e-12;
  QuadResult q = integrate_radial_entire(m, integrand, opts);
  const double tol = 1e-9 * std::abs(q.value);
  if (!(q.abs_error <= tol) || !std::isfinite(q.value))
    throw ToleranceError("appendix integral quadrature did not converge", q.abs_error);
  return q;
}

double limit_rhs_coefficient(int m, double Q) {
  if (m < 1) throw ConfigError("operator order m must be a positive integer");
  if (Q <= 0.0) throw ConfigError("limit equation requires Q > 0");
  return static_cast<double>(factorial(2 * m)) /
         (2.0 * static_cast<double>(factorial(m)) * Q);
}

}  // namespace liouville

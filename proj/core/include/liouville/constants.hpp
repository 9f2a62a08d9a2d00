#pragma once

#include <cstdint>
#include <string>

namespace liouville {

// Exact value of the form (num/den) * pi^pi_pow. All dimensional constants
// of the problem family have this shape, so tests can assert them exactly.
struct PiRational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  int pi_pow = 0;

  double value() const;
  std::string str() const;
};

// Closed-form constants attached to operator order m (dimension n = 2m).
struct Constants {
  int m = 1;
  PiRational omega;    // area of the unit (2m-1)-sphere: 2 pi^m / (m-1)!
  PiRational lambda;   // total bubble mass: 2^{2m} m! (m-1)! omega = 2^{2m+1} pi^m m!
  PiRational alpha;    // bubble amplitude: 2^{2m+1} m (m-1)!
  PiRational b;        // energy constant: alpha/2 * (m-1)! pi^m
  PiRational c0;       // integral of (1+|y|^2)^{-2m} over R^{2m}
  PiRational c1;       // same with log(1+|y|^2) factor; c1 * m = c0 exactly
  std::int64_t t = 0;  // spectral constant: alpha (2m-1)! / 2^{2m} = 2m (m-1)! (2m-1)!

  double omega2m() const { return omega.value(); }
  double Lambda2m() const { return lambda.value(); }
  double alpha2m() const { return alpha.value(); }
  double bm() const { return b.value(); }
};

// Populates every field from the closed forms. Throws ConfigError for m < 1.
Constants constants_for(int m);

std::int64_t factorial(int n);

enum class AppendixIntegral { C0, C1 };

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
};

// Radial quadrature oracle for the c0/c1 integrals, independent of the
// closed forms above. Throws ToleranceError when the quadrature does not
// converge and ConfigError for m outside [1,4].
QuadResult appendix_integral_oracle(int m, AppendixIntegral which);

// Coefficient kappa in the exact identity (-Delta)^m U_{delta,xi} =
// kappa * e^{U_{delta,xi}} for the standard bubble with constant Q.
double limit_rhs_coefficient(int m, double Q);

}  // namespace liouville

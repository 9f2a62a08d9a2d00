#pragma once

#include <functional>
#include <vector>

#include "liouville/constants.hpp"
#include "liouville/domain.hpp"

namespace liouville {

struct QuadOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
  int max_intervals = 4000;
};

// Adaptive Gauss-Kronrod (7-15) on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

// Integral of f(|y|) over R^{2m} reduced to the half-line with the sphere
// area factor; r_max = infinity handled by splitting at 1 and mapping r -> 1/r.
QuadResult integrate_radial(int m, const std::function<double(double)>& f,
                            double r_max, const QuadOptions& opts = {});
QuadResult integrate_radial_entire(int m, const std::function<double(double)>& f,
                                   const QuadOptions& opts = {});

// Trapezoid rule on [0, 2pi) for periodic integrands (spectrally accurate).
double integrate_periodic(const std::function<double(double)>& f, int n);

// Integral of f over a planar domain. Peaked regions are covered by polar
// patches around the given centers (smooth partition of unity); the smooth
// remainder is summed on a background grid with subsampled boundary cells.
struct DomainQuadOptions {
  int background_n = 256;   // background nodes across the bounding box
  int angular_nodes = 128;  // per polar patch
  QuadOptions radial;
};
QuadResult integrate_domain2d(const Domain2D& domain,
                              const std::function<double(const Vec2&)>& f,
                              const std::vector<Vec2>& patch_centers,
                              const std::vector<double>& patch_radii,
                              const DomainQuadOptions& opts = {});

}  // namespace liouville

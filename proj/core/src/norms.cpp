#include "liouville/norms.hpp"

#include <cmath>

#include "liouville/errors.hpp"

namespace liouville {

double star_norm(const GridField& f, const std::vector<Vec2>& xi_prime, int m,
                 double eps) {
  if (xi_prime.empty()) throw ConfigError("star norm needs at least one center");
  const auto& g = f.geom();
  const double floor_w = std::pow(eps, 2 * m);
  const double p = 4.0 * m - 1.0;
  double best = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.is_interior[g.idx(i, j)]) continue;
      const Vec2 y = f.coord(i, j);
      double w = floor_w;
      for (const auto& xp : xi_prime) w += std::pow(1.0 + (y - xp).norm(), -p);
      const double val = std::abs(f.at(i, j)) / w;
      if (val > best) best = val;
    }
  return best;
}

double starstar_norm(const GridField& f, const std::vector<Vec2>& xi_prime, int m) {
  if (xi_prime.empty()) throw ConfigError("norm needs at least one center");
  if (m != 1)
    throw ResolutionError("grid stencils of order 2m are only available for m = 1");
  const auto& g = f.geom();
  const int k = static_cast<int>(xi_prime.size());

  // Derivative orders (dx,dy): all |alpha| <= 2 for the interior part,
  // |alpha| <= 1 for the exterior part.
  static const int orders[6][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};

  std::vector<double> interior_sup(k, 0.0);
  std::vector<double> ext_sup(k, 0.0);

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.is_interior[g.idx(i, j)] || !f.stencil_ok(i, j)) continue;
      const Vec2 y = f.coord(i, j);
      double d[6];
      for (int o = 0; o < 6; ++o) d[o] = std::abs(f.derivative(i, j, orders[o][0], orders[o][1]));
      for (int b = 0; b < k; ++b) {
        const double r = (y - xi_prime[b]).norm();
        if (r < 2.0) {
          for (int o = 0; o < 6; ++o)
            if (d[o] > interior_sup[b]) interior_sup[b] = d[o];
        } else {
          // Exterior portion: derivative orders 1..2m-1 weighted by r^{|alpha|}.
          const double w1 = r * std::max(d[1], d[2]);
          if (w1 > ext_sup[b]) ext_sup[b] = w1;
        }
      }
    }

  double total = 0.0;
  for (int b = 0; b < k; ++b) total += interior_sup[b] + ext_sup[b];
  return total;
}

double sup_norm(const GridField& f) {
  const auto& g = f.geom();
  double best = 0.0;
  for (int id = 0; id < g.nx * g.ny; ++id)
    if (g.is_interior[id]) best = std::max(best, std::abs(f.values()[id]));
  return best;
}

}  // namespace liouville

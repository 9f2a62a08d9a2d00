#pragma once

#include <vector>

#include "liouville/grid.hpp"

namespace liouville {

// Weighted sup norm on the expanded frame: sup |f(y)| / (sum_i
// (1+|y-xi_i'|)^{-(4m-1)} + eps^{2m}), taken over interior grid nodes.
double star_norm(const GridField& f, const std::vector<Vec2>& xi_prime, int m,
                 double eps);

// Interior/exterior split norm: near each xi_i' (r_i < 2) the sup of all
// finite-difference derivatives up to order 2m; away (r_i >= 2) the weighted
// sup of derivatives up to order 2m-1 with weight r_i^{|alpha|}.
double starstar_norm(const GridField& f, const std::vector<Vec2>& xi_prime, int m);

double sup_norm(const GridField& f);

}  // namespace liouville

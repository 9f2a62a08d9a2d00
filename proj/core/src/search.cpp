#include "liouville/search.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "liouville/errors.hpp"

namespace liouville::search {

namespace {

Vec2 point_of(const Config& xi, int i) { return {xi[2 * i], xi[2 * i + 1]}; }

Config fd_gradient(const Evaluator& f, const Config& x, double step) {
  Config g(x.size());
  for (int d = 0; d < x.size(); ++d) {
    Config xp = x, xm = x;
    xp[d] += step;
    xm[d] -= step;
    g[d] = (f(xp) - f(xm)) / (2.0 * step);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const Evaluator& f, const Config& x, double step) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd H(n, n);
  const double f0 = f(x);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Config xpp = x, xpm = x, xmp = x, xmm = x;
      if (a == b) {
        xpp[a] += step;
        xmm[a] -= step;
        H(a, a) = (f(xpp) - 2.0 * f0 + f(xmm)) / (step * step);
      } else {
        xpp[a] += step; xpp[b] += step;
        xpm[a] += step; xpm[b] -= step;
        xmp[a] -= step; xmp[b] += step;
        xmm[a] -= step; xmm[b] -= step;
        H(a, b) = H(b, a) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * step * step);
      }
    }
  }
  return H;
}

// Canonical bubble order (lexicographic) so relabelled configurations
// compare equal.
Config canonical(const Config& xi) {
  const int k = static_cast<int>(xi.size()) / 2;
  std::vector<std::pair<double, double>> pts(k);
  for (int i = 0; i < k; ++i) pts[i] = {xi[2 * i], xi[2 * i + 1]};
  std::sort(pts.begin(), pts.end());
  Config out(xi.size());
  for (int i = 0; i < k; ++i) {
    out[2 * i] = pts[i].first;
    out[2 * i + 1] = pts[i].second;
  }
  return out;
}

}  // namespace

double SearchRegion::min_slack(const Config& xi) const {
  double s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    const Vec2 p = point_of(xi, i);
    if (!domain.inside(p)) return -1.0;
    s = std::min(s, domain.boundary_distance(p) - 2.0 * delta0);
    for (int j = i + 1; j < k; ++j)
      s = std::min(s, (p - point_of(xi, j)).norm() - 2.0 * delta0);
  }
  return s;
}

double SearchRegion::barrier(const Config& xi) const {
  const double scale = domain.diameter();
  double b = 0.0;
  for (int i = 0; i < k; ++i) {
    const Vec2 p = point_of(xi, i);
    if (!domain.inside(p)) return std::numeric_limits<double>::infinity();
    const double sb = domain.boundary_distance(p) - 2.0 * delta0;
    if (sb <= 0) return std::numeric_limits<double>::infinity();
    b -= barrier_stiffness * std::log(sb / scale);
    for (int j = i + 1; j < k; ++j) {
      const double sp = (p - point_of(xi, j)).norm() - 2.0 * delta0;
      if (sp <= 0) return std::numeric_limits<double>::infinity();
      b -= barrier_stiffness * std::log(sp / scale);
    }
  }
  return b;
}

Config SearchRegion::barrier_gradient(const Config& xi) const {
  const double step = 1e-7 * domain.diameter();
  Config g(xi.size());
  for (int d = 0; d < xi.size(); ++d) {
    Config xp = xi, xm = xi;
    xp[d] += step;
    xm[d] -= step;
    const double bp = barrier(xp), bm = barrier(xm);
    g[d] = (std::isfinite(bp) && std::isfinite(bm)) ? (bp - bm) / (2.0 * step) : 0.0;
  }
  return g;
}

std::vector<Config> SearchRegion::random_seeds(int n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  const Vec2 lo = domain.bbox_lo(), hi = domain.bbox_hi();
  std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y());
  std::vector<Config> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < n && guard < 100000) {
    ++guard;
    Config c(2 * k);
    for (int i = 0; i < k; ++i) {
      c[2 * i] = ux(rng);
      c[2 * i + 1] = uy(rng);
    }
    if (min_slack(c) > 0.05 * delta0) out.push_back(c);
  }
  return out;
}

std::vector<Config> SearchRegion::boundary_samples(int n, std::uint64_t seed) const {
  auto interior = random_seeds(n, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<int> pick_kind(0, k > 1 ? 1 : 0);
  std::uniform_int_distribution<int> pick_i(0, k - 1);
  std::vector<Config> out;
  for (auto c : interior) {
    const int kind = pick_kind(rng);
    if (kind == 0) {
      // Push one point onto the boundary collar by bisection along the ray
      // from the domain center.
      const int i = pick_i(rng);
      Vec2 p = point_of(c, i);
      const Vec2 ctr = domain.center();
      Vec2 dir = p - ctr;
      if (dir.norm() < 1e-12) dir = Vec2(1, 0);
      dir.normalize();
      double lo = 0.0, hi_t = domain.diameter();
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi_t);
        const Vec2 q = ctr + mid * dir;
        if (domain.inside(q) && domain.boundary_distance(q) > 2.0 * delta0)
          lo = mid;
        else
          hi_t = mid;
      }
      const Vec2 q = ctr + lo * dir;
      c[2 * i] = q.x();
      c[2 * i + 1] = q.y();
    } else {
      // Shrink one pair onto the separation tube.
      const int i = pick_i(rng);
      int j = pick_i(rng);
      if (j == i) j = (i + 1) % k;
      const Vec2 pi = point_of(c, i), pj = point_of(c, j);
      Vec2 mid = 0.5 * (pi + pj);
      Vec2 dir = pi - pj;
      if (dir.norm() < 1e-12) dir = Vec2(1, 0);
      dir.normalize();
      const Vec2 qi = mid + delta0 * dir, qj = mid - delta0 * dir;
      c[2 * i] = qi.x();
      c[2 * i + 1] = qi.y();
      c[2 * j] = qj.x();
      c[2 * j + 1] = qj.y();
    }
    if (min_slack(c) > -1e-9) out.push_back(c);
  }
  return out;
}

namespace {

struct DescentResult {
  Config x;
  double fval = 0.0;
  bool exited = false;
};

DescentResult barrier_descent(const SearchRegion& region, const Evaluator& f,
                              const Gradient& grad, Config x,
                              const MinimizeOptions& opts) {
  const double diam = region.domain.diameter();
  const double fd_step = opts.fd_step_rel * diam;
  auto total = [&](const Config& c) { return f(c) + region.barrier(c); };
  double cur = total(x);
  double step = 0.05 * diam;
  DescentResult res;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Config g = (grad ? grad(x) : fd_gradient(f, x, fd_step)) + region.barrier_gradient(x);
    const double gn = g.norm();
    if (gn < opts.grad_tol) break;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      Config trial = x - (step / gn) * g;
      if (region.min_slack(trial) > 0) {
        const double tv = total(trial);
        if (tv < cur - 1e-14 * std::abs(cur)) {
          x = trial;
          cur = tv;
          moved = true;
          step = std::min(step * 1.6, 0.1 * diam);
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  res.x = x;
  res.fval = f(x);
  res.exited = !(region.min_slack(x) > 0);
  return res;
}

// Minimize along the active-constraint manifold so the answer does not
// depend on the barrier stiffness.
void active_set_polish(const SearchRegion& region, const Evaluator& f,
                       const Gradient& grad, Config& x, const MinimizeOptions& opts) {
  const double diam = region.domain.diameter();
  const double fd_step = opts.fd_step_rel * diam;
  const double act_tol = 1e-6 * diam;

  for (int it = 0; it < 200; ++it) {
    // Active constraint normals.
    std::vector<Config> normals;
    const int k = region.k;
    for (int i = 0; i < k; ++i) {
      const Vec2 p = point_of(x, i);
      if (region.domain.boundary_distance(p) - 2.0 * region.delta0 < act_tol) {
        Config n = Config::Zero(x.size());
        const double probe = 1e-6 * diam;
        for (int d = 0; d < 2; ++d) {
          Config xp = x, xm = x;
          xp[2 * i + d] += probe;
          xm[2 * i + d] -= probe;
          n[2 * i + d] = (region.domain.boundary_distance(point_of(xp, i)) -
                          region.domain.boundary_distance(point_of(xm, i))) /
                         (2 * probe);
        }
        normals.push_back(n.normalized());
      }
      for (int j = i + 1; j < k; ++j) {
        const Vec2 q = point_of(x, j);
        if ((p - q).norm() - 2.0 * region.delta0 < act_tol) {
          Config n = Config::Zero(x.size());
          Vec2 dir = (p - q).normalized();
          n[2 * i] = dir.x();
          n[2 * i + 1] = dir.y();
          n[2 * j] = -dir.x();
          n[2 * j + 1] = -dir.y();
          normals.push_back(n.normalized());
        }
      }
    }
    Config g = grad ? grad(x) : fd_gradient(f, x, fd_step);
    for (const auto& n : normals) g -= g.dot(n) * n;
    if (g.norm() < opts.grad_tol) return;
    // Backtracking step along the projected direction, staying on/inside D.
    double step = 1e-2 * diam;
    const double f0 = f(x);
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt) {
      Config trial = x - (step / std::max(g.norm(), 1e-300)) * g;
      if (region.min_slack(trial) > -1e-12 && f(trial) < f0) {
        x = trial;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return;
  }
}

}  // namespace

CriticalPoint find_minimum(const SearchRegion& region, const Evaluator& f,
                           const std::vector<Config>& seeds,
                           const MinimizeOptions& opts, const Gradient& grad) {
  std::vector<Config> all = seeds;
  for (auto& s : region.random_seeds(opts.random_seeds, opts.seed)) all.push_back(s);
  if (all.empty()) throw ConfigError("find_minimum needs at least one admissible seed");

  const double diam = region.domain.diameter();
  std::optional<DescentResult> best;
  int exits = 0;
  for (const auto& s : all) {
    if (!(region.min_slack(s) > 0)) continue;
    DescentResult r = barrier_descent(region, f, grad, s, opts);
    if (r.exited) {
      ++exits;
      continue;
    }
    if (!best || r.fval < best->fval - 1e-14 ||
        (std::abs(r.fval - best->fval) <= 1e-12 * std::max(1.0, std::abs(best->fval)) &&
         std::lexicographical_compare(canonical(r.x).data(),
                                      canonical(r.x).data() + r.x.size(),
                                      canonical(best->x).data(),
                                      canonical(best->x).data() + best->x.size())))
      best = r;
  }

  CriticalPoint cp;
  if (!best) {
    cp.type = CritType::BoundaryRejected;
    cp.value = std::numeric_limits<double>::quiet_NaN();
    return cp;
  }

  Config x = best->x;
  const bool active = region.min_slack(x) < 1e-3 * region.delta0;
  if (active) {
    active_set_polish(region, f, grad, x, opts);
  } else if (opts.newton_polish) {
    // Guarded Newton on the pure objective.
    for (int it = 0; it < 30; ++it) {
      const double fd_step = opts.fd_step_rel * diam;
      Config g = grad ? grad(x) : fd_gradient(f, x, fd_step);
      if (g.norm() < opts.grad_tol) break;
      Eigen::MatrixXd H = fd_hessian(f, x, 1e-4 * diam);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
      Config dx = ldlt.solve(g);
      if (!dx.allFinite() || dx.norm() > 0.2 * diam) dx = g * (0.01 * diam / g.norm());
      Config trial = x - dx;
      if (region.min_slack(trial) > 0 && f(trial) <= f(x) + 1e-12)
        x = trial;
      else
        break;
    }
  }

  cp = classify(region, f, canonical(x), 1e-4);
  cp.constraint_active = region.min_slack(x) < 1e-3 * region.delta0;
  const double fd_step = opts.fd_step_rel * diam;
  Config g_final = grad ? grad(x) : fd_gradient(f, x, fd_step);
  cp.grad_norm = g_final.norm();
  return cp;
}

CriticalPoint classify(const SearchRegion& region, const Evaluator& f, const Config& xi,
                       double fd_step_rel) {
  CriticalPoint cp;
  cp.xi = xi;
  cp.value = f(xi);
  const double step = fd_step_rel * region.domain.diameter();
  Eigen::MatrixXd H = fd_hessian(f, xi, step);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  cp.hessian_eigs = es.eigenvalues();
  const double scale = cp.hessian_eigs.cwiseAbs().maxCoeff();
  const double tol = 1e-6 * std::max(scale, 1e-12);
  int neg = 0, zero = 0;
  for (int i = 0; i < cp.hessian_eigs.size(); ++i) {
    if (std::abs(cp.hessian_eigs[i]) < tol)
      ++zero;
    else if (cp.hessian_eigs[i] < 0)
      ++neg;
  }
  cp.degenerate = zero > 0;
  cp.saddle_index = neg;
  if (zero > 0)
    cp.type = CritType::Degenerate;
  else if (neg == 0)
    cp.type = CritType::Minimum;
  else if (neg == cp.hessian_eigs.size())
    cp.type = CritType::Maximum;
  else
    cp.type = CritType::Saddle;
  return cp;
}

LinkingResult check_linking_level(const SearchRegion& region, const Evaluator& f,
                                  const std::vector<Config>& B,
                                  const std::vector<int>& B0,
                                  const LinkingOptions& opts, const Gradient& grad) {
  if (B.empty()) throw ConfigError("linking check needs a non-empty sample set B");
  LinkingResult res;

  const auto boundary = region.boundary_samples(opts.boundary_samples, opts.seed);

  // Min case: B0 covers B, so the homotopy class degenerates and the
  // sufficient condition inf_D phi < inf_{dD} phi applies.
  if (B0.size() >= B.size()) {
    MinimizeOptions mo;
    mo.seed = opts.seed;
    CriticalPoint cp = find_minimum(region, f, B, mo);
    if (cp.type == CritType::BoundaryRejected) {
      res.verdict = LinkingVerdict::BoundaryHit;
      return res;
    }
    res.level = cp.value;
    double boundary_inf = std::numeric_limits<double>::infinity();
    for (const auto& y : boundary) boundary_inf = std::min(boundary_inf, f(y));
    res.sup_B0 = boundary_inf;  // reported for context
    res.degenerate = cp.degenerate;
    res.verdict =
        cp.value < boundary_inf - 1e-12 ? LinkingVerdict::Holds : LinkingVerdict::Fails;
    res.path = {cp.xi};
    return res;
  }

  // Path mode: string relaxation of B with B0 pinned.
  std::vector<Config> path = B;
  std::vector<bool> fixed(path.size(), false);
  for (int idx : B0) fixed.at(static_cast<size_t>(idx)) = true;

  const double diam = region.domain.diameter();
  const double fd_step = 1e-6 * diam;
  double gap = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iterations; ++it) {
    gap = 0.0;
    for (size_t s = 0; s < path.size(); ++s) {
      if (fixed[s]) continue;
      Config g = grad ? grad(path[s]) : fd_gradient(f, path[s], fd_step);
      Config tau;
      if (s == 0)
        tau = path[1] - path[0];
      else if (s + 1 == path.size())
        tau = path[s] - path[s - 1];
      else
        tau = path[s + 1] - path[s - 1];
      if (tau.norm() > 1e-14) {
        tau.normalize();
        g -= g.dot(tau) * tau;
      }
      gap = std::max(gap, g.norm());
      Config trial = path[s] - std::min(2e-3 * diam / std::max(g.norm(), 1e-12),
                                        5e-2 * diam) * g;
      if (region.min_slack(trial) > 0) path[s] = trial;
    }
    // Equal-arclength reparametrization of the free interior.
    if (path.size() > 2) {
      std::vector<double> arc(path.size(), 0.0);
      for (size_t s = 1; s < path.size(); ++s)
        arc[s] = arc[s - 1] + (path[s] - path[s - 1]).norm();
      const double total = arc.back();
      if (total > 1e-12) {
        std::vector<Config> np = path;
        for (size_t s = 1; s + 1 < path.size(); ++s) {
          if (fixed[s]) continue;
          const double target = total * static_cast<double>(s) / (path.size() - 1);
          size_t seg = 1;
          while (seg < path.size() - 1 && arc[seg] < target) ++seg;
          const double t = (target - arc[seg - 1]) /
                           std::max(arc[seg] - arc[seg - 1], 1e-300);
          Config cand = path[seg - 1] + t * (path[seg] - path[seg - 1]);
          if (region.min_slack(cand) > 0) np[s] = cand;
        }
        path = np;
      }
    }
    if (gap < opts.relax_tol) break;
  }

  res.path = path;
  res.gap = gap;
  double C = -std::numeric_limits<double>::infinity();
  size_t argmax = 0;
  for (size_t s = 0; s < path.size(); ++s) {
    const double v = f(path[s]);
    if (v > C) {
      C = v;
      argmax = s;
    }
  }
  res.level = C;
  res.sup_B0 = -std::numeric_limits<double>::infinity();
  for (int idx : B0) res.sup_B0 = std::max(res.sup_B0, f(B[static_cast<size_t>(idx)]));

  if (gap >= opts.relax_tol) {
    res.verdict = LinkingVerdict::Inconclusive;
    return res;
  }

  // Transversality surrogate on dD at level C.
  for (const auto& y : boundary) {
    if (std::abs(f(y) - C) < opts.level_tol) {
      const Config g = grad ? grad(y) : fd_gradient(f, y, fd_step);
      if (g.norm() < 1e-6) {
        res.verdict = LinkingVerdict::BoundaryHit;
        return res;
      }
    }
  }

  res.degenerate = classify(region, f, path[argmax], 1e-4).degenerate;
  res.verdict = res.sup_B0 < C - 1e-12 ? LinkingVerdict::Holds : LinkingVerdict::Fails;
  return res;
}

}  // namespace liouville::search

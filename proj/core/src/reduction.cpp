#include "liouville/reduction.hpp"

#include <cmath>

#include "liouville/constants.hpp"
#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"

namespace liouville::reduction {

namespace {

Eigen::VectorXd interior_vector(const GridField& f) {
  const auto& g = f.geom();
  Eigen::VectorXd v(g.n_interior);
  for (int q = 0; q < g.n_interior; ++q) v[q] = f.values()[g.nodes_of[q]];
  return v;
}

GridField field_from_interior(const std::shared_ptr<const GridGeometry>& g, Frame fr,
                              double eps, const Eigen::VectorXd& v) {
  GridField f(g, fr, eps);
  for (int q = 0; q < g->n_interior; ++q) f.values()[g->nodes_of[q]] = v[q];
  return f;
}

std::vector<Vec2> patch_centers_of(const Ansatz& a) {
  std::vector<Vec2> cs;
  for (const auto& x : a.config().xi) cs.emplace_back(x[0], x[1]);
  return cs;
}

std::vector<double> patch_radii_of(const Ansatz& a, const Domain2D& dom) {
  const auto& xi = a.config().xi;
  std::vector<double> rs;
  for (size_t i = 0; i < xi.size(); ++i) {
    double r = dom.boundary_distance(Vec2(xi[i][0], xi[i][1]));
    for (size_t j = 0; j < xi.size(); ++j)
      if (j != i) r = std::min(r, 0.5 * (xi[i] - xi[j]).norm());
    rs.push_back(0.9 * r);
  }
  return rs;
}

}  // namespace

ReductionResult solve_intermediate(const Ansatz& ansatz, const LinearizedOperator& op,
                                   const KernelBasis& basis,
                                   const FixedPointOptions& opts) {
  if (ansatz.m() != 1)
    throw ConfigError("the intermediate solve is restricted to m = 1");
  const auto geom = op.geom_ptr();
  const int n = geom->n_interior;
  const double eps = ansatz.eps();
  const double log_scale = std::abs(std::log(eps));
  const double boundary_w = 2.0 * ansatz.m() * std::log(ansatz.rho() * eps);

  // Residual on the operator's own rows (discrete) or the closed form.
  Eigen::VectorXd R(n);
  const Eigen::VectorXd W_int = interior_vector(ansatz.W_field(geom));
  const Eigen::VectorXd T_int = interior_vector(op.T_field());
  if (opts.residual_mode == bubbles::ResidualMode::Stencil) {
    R = op.neg_laplacian(W_int, boundary_w) - T_int;
  } else {
    GridField rf = ansatz.residual_field(geom, bubbles::ResidualMode::Exact);
    R = interior_vector(rf);
  }

  ReductionResult out;
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
  linearized::ProjectedSolveResult last;
  double prev_sup = 0.0;
  int grow_streak = 0;
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    // rhs = N(phi) - R
    Eigen::VectorXd rhs(n);
    for (int q = 0; q < n; ++q) {
      const double p = phi[q];
      rhs[q] = T_int[q] * (std::expm1(p) - p) - R[q];
    }
    GridField rhs_field = field_from_interior(geom, Frame::Expanded, eps, rhs);
    last = linearized::projected_solve(op, rhs_field, basis);
    Eigen::VectorXd phi_new = interior_vector(last.phi);
    const double change = (phi_new - phi).cwiseAbs().maxCoeff();
    const double sup = phi_new.cwiseAbs().maxCoeff();
    phi = phi_new;
    if (it == 0 && last.phi_starstar > opts.ball_constant * eps * log_scale)
      throw ContractionFailureError(
          "first iterate left the admissible ball; eps too large for this configuration");
    if (sup > prev_sup * (1.0 + 1e-12) && it > 0) {
      if (++grow_streak >= 3)
        throw ContractionFailureError("iterate norms grew three times in a row");
    } else {
      grow_streak = 0;
    }
    prev_sup = sup;
    if (change <= opts.rel_tol * std::max(sup, 1e-300)) {
      converged = true;
      ++it;
      break;
    }
  }

  out.phi = last.phi;
  out.c = last.c;
  out.iterations = it;
  out.converged = converged;
  out.phi_sup = last.phi_sup;
  out.phi_starstar = last.phi_starstar;
  out.lin_residual_star = last.residual_star;
  out.orthogonality = last.orthogonality;

  // Final solution in both frames and its diagnostics.
  const Eigen::VectorXd w = W_int + phi;
  GridField u_phys(geom, Frame::Physical);
  {
    const Ansatz& a = ansatz;
    GridField U = a.U_field(geom);
    for (int q = 0; q < n; ++q)
      u_phys.values()[geom->nodes_of[q]] = U.values()[geom->nodes_of[q]] + phi[q];
  }
  out.u_final = u_phys;

  // Discrete PDE residual of w on the same rows.
  {
    Eigen::VectorXd pde = op.neg_laplacian(w, boundary_w);
    const auto& xi_p = basis.xi_prime;
    for (int q = 0; q < n; ++q) {
      const Vec2 y = Vec2(geom->node_of_interior(q) / eps);
      const double v = ansatz.potential()(Vec2(eps * y));
      pde[q] -= v * std::exp(w[q]);
    }
    GridField pf = field_from_interior(geom, Frame::Expanded, eps, pde);
    out.pde_residual_star = star_norm(pf, xi_p, 1, eps);
  }

  // Mass and energies.
  const auto& dom = ansatz.green().planar_domain();
  const auto centers = patch_centers_of(ansatz);
  const auto radii = patch_radii_of(ansatz, dom);
  const double rho2 = ansatz.rho() * ansatz.rho();
  auto phi_at = [&](const Vec2& p) { return out.phi.interpolate_cubic(Vec2(p / eps)); };

  const reduced::EnergyResult e0 = reduced::energy(ansatz);
  out.J_U = e0.value;

  double cross = 0.0;
  for (int i = 0; i < ansatz.k(); ++i) {
    const double vi = ansatz.potential()(centers[i]);
    auto f = [&](const Vec2& p) {
      VecN x(2);
      x << p.x(), p.y();
      return std::exp(ansatz.scaled_bubble(i, x)) * phi_at(p);
    };
    cross += rho2 * vi * integrate_domain2d(dom, f, centers, radii).value;
  }

  // Dirichlet energy of phi; the edge factor h^2 cancels the (1/h)^2 of the
  // difference quotient in two dimensions.
  double grad_sq = 0.0;
  {
    const auto& g = *geom;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (i + 1 < g.nx) {
          const bool a = g.interior(i, j), b = g.interior(i + 1, j);
          if (a || b) {
            const double d = (b ? out.phi.at(i + 1, j) : 0.0) - (a ? out.phi.at(i, j) : 0.0);
            grad_sq += d * d;
          }
        }
        if (j + 1 < g.ny) {
          const bool a = g.interior(i, j), b = g.interior(i, j + 1);
          if (a || b) {
            const double d = (b ? out.phi.at(i, j + 1) : 0.0) - (a ? out.phi.at(i, j) : 0.0);
            grad_sq += d * d;
          }
        }
      }
  }

  double mass_and_pot = 0.0;
  {
    auto f = [&](const Vec2& p) {
      VecN x(2);
      x << p.x(), p.y();
      return ansatz.potential()(p) * std::exp(ansatz.U(x) + phi_at(p));
    };
    mass_and_pot = rho2 * integrate_domain2d(dom, f, centers, radii).value;
  }
  out.mass = mass_and_pot;
  out.F_eps = e0.quadratic_part + cross + 0.5 * grad_sq - mass_and_pot;
  out.theta_eps = out.F_eps - out.J_U;
  return out;
}

ReductionResult reduced_energy_F(const GreenModel& green, const Potential& V,
                                 const std::vector<VecN>& xi, double eps, double delta0,
                                 const EnergyOptions& opts) {
  const auto cfg = bubbles::make_config(green, V, xi, eps, delta0);
  const Ansatz a = bubbles::build_ansatz(cfg, green, V);
  auto geom = GridGeometry::build(green.planar_domain(), opts.h_solve);
  LinearizedOperator op(a, geom);
  KernelBasis basis = linearized::make_basis(a, opts.R0);
  return solve_intermediate(a, op, basis, opts.fp);
}

PipelineResult construct_solution(const ProblemConfig& cfg,
                                  const std::vector<VecN>& seed_xi) {
  if (cfg.m != 1)
    throw ConfigError("the end-to-end pipeline is restricted to m = 1");
  const GreenModel green = make_green_model(cfg);
  const Potential& V = cfg.V;
  const Domain2D dom = green.planar_domain();

  search::SearchRegion region;
  region.domain = dom;
  region.k = cfg.k;
  region.delta0 = cfg.delta0;

  auto to_config = [&](const std::vector<VecN>& pts) {
    Eigen::VectorXd c(2 * cfg.k);
    for (int i = 0; i < cfg.k; ++i) {
      c[2 * i] = pts[i][0];
      c[2 * i + 1] = pts[i][1];
    }
    return c;
  };
  auto to_points = [&](const Eigen::VectorXd& c) {
    std::vector<VecN> pts;
    for (int i = 0; i < cfg.k; ++i) {
      VecN p(2);
      p << c[2 * i], c[2 * i + 1];
      pts.push_back(p);
    }
    return pts;
  };

  // Stage 1: critical point of the reduced functional.
  search::Evaluator phi_eval = [&](const Eigen::VectorXd& c) {
    return reduced::phi_k(green, V, to_points(c));
  };
  search::Gradient phi_grad;
  if (green.analytic())
    phi_grad = [&](const Eigen::VectorXd& c) {
      return Eigen::VectorXd(reduced::grad_phi_k(green, V, to_points(c)));
    };
  std::vector<Eigen::VectorXd> seeds;
  if (!seed_xi.empty()) seeds.push_back(to_config(seed_xi));
  for (const auto& s : cfg.seed_xi) {
    if (static_cast<int>(s.size()) != 2 * cfg.k) continue;
    Eigen::VectorXd c(2 * cfg.k);
    for (int d = 0; d < 2 * cfg.k; ++d) c[d] = s[d];
    seeds.push_back(c);
  }
  search::MinimizeOptions mo;
  mo.seed = cfg.seed;
  mo.grad_tol = green.analytic() ? cfg.tol.grad : 1e-5;
  search::CriticalPoint cp = search::find_minimum(region, phi_eval, seeds, mo, phi_grad);
  if (cp.type == search::CritType::BoundaryRejected)
    throw ConfigError("no admissible critical point of the reduced functional found");

  // Stage 2: polish on the corrected energy, then a final tight solve.
  double h_solve = cfg.solver.h_solve;
  if (h_solve <= 0) {
    h_solve = 1.0 / 128;
    if (cfg.eps > 0.09) h_solve = 1.0 / 64;
    if (cfg.eps < 0.03) h_solve = 1.0 / 256;
  }
  EnergyOptions opt_coarse;
  opt_coarse.h_solve = std::max(h_solve, 1.0 / 64);
  opt_coarse.R0 = cfg.solver.R0;
  opt_coarse.fp.residual_mode = cfg.solver.residual_mode == "exact"
                                    ? bubbles::ResidualMode::Exact
                                    : bubbles::ResidualMode::Stencil;
  opt_coarse.fp.max_iterations = cfg.solver.max_iterations;
  opt_coarse.fp.rel_tol = cfg.tol.fixed_point;

  search::Evaluator F_eval = [&](const Eigen::VectorXd& c) {
    return reduced_energy_F(green, V, to_points(c), cfg.eps, cfg.delta0, opt_coarse)
        .F_eps;
  };
  search::MinimizeOptions fo;
  fo.random_seeds = 0;
  fo.seed = cfg.seed;
  fo.grad_tol = 1e-6;
  fo.fd_step_rel = 1e-4;
  fo.max_iterations = 60;
  fo.newton_polish = false;
  search::CriticalPoint fstar = search::find_minimum(region, F_eval, {cp.xi}, fo);
  if (fstar.type == search::CritType::BoundaryRejected) fstar = cp;

  EnergyOptions opt_final = opt_coarse;
  opt_final.h_solve = h_solve;
  ReductionResult red =
      reduced_energy_F(green, V, to_points(fstar.xi), cfg.eps, cfg.delta0, opt_final);

  PipelineResult out;
  out.phi_critical = cp;
  out.xi_star = fstar.xi;
  out.reduction = std::move(red);

  const double lambda = constants_for(cfg.m).Lambda2m();
  out.mass_ratio = out.reduction.mass / (cfg.k * lambda);
  out.max_multiplier = out.reduction.c.cwiseAbs().maxCoeff();
  out.multiplier_tol =
      std::max(cfg.tol.multiplier, 10.0 * out.reduction.lin_residual_star);
  out.multipliers_ok = out.max_multiplier < out.multiplier_tol;

  // Blow-up contrast: sup on the bubble balls against the complement.
  {
    const auto& g = out.reduction.u_final.geom();
    double snear = -1e300, sfar = -1e300;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!g.is_interior[g.idx(i, j)]) continue;
        const Vec2 p = g.node(i, j);
        bool near = false;
        for (int b = 0; b < cfg.k; ++b)
          if ((p - Vec2(fstar.xi[2 * b], fstar.xi[2 * b + 1])).norm() < cfg.delta0)
            near = true;
        const double v = out.reduction.u_final.at(i, j);
        if (near)
          snear = std::max(snear, v);
        else
          sfar = std::max(sfar, v);
      }
    out.sup_near = snear;
    out.sup_far = sfar;
  }
  return out;
}

}  // namespace liouville::reduction

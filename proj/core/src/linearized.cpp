#include "liouville/linearized.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "liouville/constants.hpp"
#include "liouville/errors.hpp"

namespace liouville::linearized {

namespace {

double quintic_ramp_down(double s) {
  // 1 at s<=0, 0 at s>=1.
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double t = 1.0 - s;
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

}  // namespace

double KernelBasis::chi(double r) const { return quintic_ramp_down(r - R0); }

double KernelBasis::Y(int i, int j, const VecN& z) const {
  if (i < 0 || i >= k || j < 0 || j > 2 * m) throw ConfigError("kernel index out of range");
  const double mi = mu[i];
  const double s = mi * mi + z.squaredNorm();
  if (j == 0) return (z.squaredNorm() - mi * mi) / s;
  return 4.0 * m * z[j - 1] / s;
}

double KernelBasis::Z(int i, int j, const Vec2& y) const {
  VecN z(2);
  z << y.x() - xi_prime[i].x(), y.y() - xi_prime[i].y();
  return Y(i, j, z);
}

double KernelBasis::chiZ(int i, int j, const Vec2& y) const {
  const double r = (y - xi_prime[i]).norm();
  const double c = chi(r);
  return c == 0.0 ? 0.0 : c * Z(i, j, y);
}

KernelBasis make_basis(const Ansatz& ansatz, double R0) {
  if (ansatz.m() != 1)
    throw ConfigError("grid kernel basis is restricted to m = 1");
  KernelBasis b;
  b.m = ansatz.m();
  b.k = ansatz.k();
  b.mu = ansatz.config().mu;
  b.xi_prime = ansatz.xi_prime();
  const auto& dom = ansatz.green().planar_domain();
  double min_dist = std::numeric_limits<double>::infinity();
  for (const auto& x : ansatz.config().xi)
    min_dist = std::min(min_dist, dom.boundary_distance(Vec2(x[0], x[1])));
  const double dist_expanded = min_dist / ansatz.eps();
  b.R0 = std::min(R0, 0.8 * dist_expanded - 1.0);
  if (b.R0 < 3.0)
    throw ConfigError("cutoff support does not fit inside the expanded domain");
  return b;
}

double kernel_eval(const KernelBasis& basis, int i, int j, const VecN& z) {
  return basis.Y(i, j, z);
}

// ---------------------------------------------------------------------------

struct LinearizedOperator::Bordered {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  Eigen::MatrixXd chiZ_cols;  // n x K, nodal values
  int K = 0;
  KernelBasis basis;
};

LinearizedOperator::LinearizedOperator(const Ansatz& ansatz,
                                       std::shared_ptr<const GridGeometry> geom)
    : geom_(std::move(geom)), eps_(ansatz.eps()) {
  if (ansatz.m() != 1)
    throw ConfigError("the grid linearized operator is restricted to m = 1");
  h_eff_ = geom_->h / eps_;
  T_field_ = ansatz.T_field(geom_);
  rows_ = laplacian_rows(*geom_, h_eff_);
}

Eigen::VectorXd LinearizedOperator::apply(const Eigen::VectorXd& phi) const {
  const int n = geom_->n_interior;
  Eigen::VectorXd out(n);
  for (int q = 0; q < n; ++q) {
    const auto& row = rows_.rows[q];
    double s = (row.diag - T_field_.values()[geom_->nodes_of[q]]) * phi[q];
    for (int a = 0; a < row.n_nb; ++a) s += row.nb[a].coef * phi[row.nb[a].col];
    out[q] = s;
  }
  return out;
}

Eigen::VectorXd LinearizedOperator::neg_laplacian(const Eigen::VectorXd& u,
                                                  double boundary_value) const {
  const int n = geom_->n_interior;
  Eigen::VectorXd out(n);
  for (int q = 0; q < n; ++q) {
    const auto& row = rows_.rows[q];
    double s = row.diag * u[q];
    for (int a = 0; a < row.n_nb; ++a) s += row.nb[a].coef * u[row.nb[a].col];
    for (int a = 0; a < row.n_bc; ++a) s -= row.bc[a].coef * boundary_value;
    out[q] = s;
  }
  return out;
}

const LinearizedOperator::Bordered& LinearizedOperator::bordered(
    const KernelBasis& basis) const {
  std::vector<double> key{basis.R0, static_cast<double>(basis.k)};
  for (const auto& p : basis.xi_prime) {
    key.push_back(p.x());
    key.push_back(p.y());
  }
  if (bordered_ && key == bordered_key_) return *bordered_;

  const int n = geom_->n_interior;
  const int K = 2 * basis.m * basis.k;
  auto bd = std::make_shared<Bordered>();
  bd->K = K;
  bd->basis = basis;
  bd->chiZ_cols.resize(n, K);
  for (int q = 0; q < n; ++q) {
    const Vec2 y = Vec2(geom_->node_of_interior(q) / eps_);
    for (int i = 0; i < basis.k; ++i)
      for (int j = 1; j <= 2 * basis.m; ++j)
        bd->chiZ_cols(q, i * 2 * basis.m + (j - 1)) = basis.chiZ(i, j, y);
  }

  const double w = h_eff_ * h_eff_;  // quadrature weight of one node
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * 7);
  for (int q = 0; q < n; ++q) {
    const auto& row = rows_.rows[q];
    trip.emplace_back(q, q, row.diag - T_field_.values()[geom_->nodes_of[q]]);
    for (int a = 0; a < row.n_nb; ++a) trip.emplace_back(q, row.nb[a].col, row.nb[a].coef);
    for (int c = 0; c < K; ++c) {
      const double v = bd->chiZ_cols(q, c);
      if (v != 0.0) {
        trip.emplace_back(q, n + c, -v);      // -sum c_ij chi Z on the lhs
        trip.emplace_back(n + c, q, w * v);   // orthogonality rows
      }
    }
  }
  Eigen::SparseMatrix<double> A(n + K, n + K);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  bd->lu.compute(A);
  if (bd->lu.info() != Eigen::Success)
    throw LinearSolveError("bordered factorization failed (rank-deficient projection?)");
  bordered_ = bd;
  bordered_key_ = key;
  return *bordered_;
}

LinearizedOperator assemble_linearized(const Ansatz& ansatz,
                                       std::shared_ptr<const GridGeometry> geom) {
  return LinearizedOperator(ansatz, std::move(geom));
}

ProjectedSolveResult projected_solve(const LinearizedOperator& op, const GridField& h,
                                     const KernelBasis& basis) {
  const auto& geom = op.geom();
  const int n = geom.n_interior;
  const auto& bd = op.bordered(basis);
  const int K = bd.K;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + K);
  for (int q = 0; q < n; ++q) rhs[q] = h.values()[geom.nodes_of[q]];
  Eigen::VectorXd sol = bd.lu.solve(rhs);
  if (bd.lu.info() != Eigen::Success)
    throw LinearSolveError("projected solve failed");

  ProjectedSolveResult out;
  out.phi = GridField(op.geom_ptr(), Frame::Expanded, op.eps());
  for (int q = 0; q < n; ++q) out.phi.values()[geom.nodes_of[q]] = sol[q];
  out.c.resize(basis.k, 2 * basis.m);
  for (int i = 0; i < basis.k; ++i)
    for (int j = 0; j < 2 * basis.m; ++j)
      out.c(i, j) = sol[n + i * 2 * basis.m + j];

  // Diagnostics: algebraic residual of the first block in the star norm,
  // constraint violation relative to |phi|.
  Eigen::VectorXd phi_vec = sol.head(n);
  Eigen::VectorXd res = op.apply(phi_vec) - rhs.head(n);
  for (int q = 0; q < n; ++q)
    for (int c = 0; c < K; ++c) res[q] += -bd.chiZ_cols(q, c) * sol[n + c];
  GridField res_field(op.geom_ptr(), Frame::Expanded, op.eps());
  for (int q = 0; q < n; ++q) res_field.values()[geom.nodes_of[q]] = res[q];
  out.residual_star = star_norm(res_field, basis.xi_prime, basis.m, op.eps());

  const double w = op.h_expanded() * op.h_expanded();
  double orth = 0.0;
  const double phi_sup = phi_vec.cwiseAbs().maxCoeff();
  for (int c = 0; c < K; ++c) {
    const double q = w * bd.chiZ_cols.col(c).dot(phi_vec);
    orth = std::max(orth, std::abs(q) / std::max(phi_sup, 1e-300));
  }
  out.orthogonality = orth;
  out.phi_sup = phi_sup;
  out.phi_starstar = starstar_norm(out.phi, basis.xi_prime, basis.m);
  return out;
}

SpectralCheck sphere_spectral_check(int m, int k_index) {
  if (m < 1 || m > 6 || k_index < 0 || k_index > 10)
    throw ConfigError("spectral check supports 1 <= m <= 6, 0 <= k_index <= 10");
  SpectralCheck s;
  s.m = m;
  s.k_index = k_index;
  s.lambda = static_cast<std::int64_t>(k_index) * (k_index + 2 * m - 1);
  s.product = 1;
  for (int j = 0; j <= m - 1; ++j)
    s.product *= s.lambda + static_cast<std::int64_t>(j) * (2 * m - j - 1);
  s.t_m = constants_for(m).t;
  s.match = (s.product == s.t_m);
  return s;
}

std::vector<double> near_zero_spectrum(double mu, double ball_radius, double h,
                                       int count, std::uint64_t seed) {
  const auto dom = Domain2D::disc(Vec2(0, 0), ball_radius);
  const auto geom = GridGeometry::build(dom, h);
  const int n = geom->n_interior;
  const double alpha = constants_for(1).alpha2m();

  // Symmetric plain 5-point stencil: eigenvalues and singular values agree
  // up to sign, which is what the near-zero count needs.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * 5);
  const double ih2 = 1.0 / (h * h);
  for (int q = 0; q < n; ++q) {
    const int id = geom->nodes_of[q];
    const int i = id % geom->nx, j = id / geom->nx;
    const Vec2 z = geom->node(i, j);
    const double pot = alpha * mu * mu / std::pow(mu * mu + z.squaredNorm(), 2.0);
    trip.emplace_back(q, q, 4.0 * ih2 - pot);
    const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto& o : off)
      if (geom->interior(i + o[0], j + o[1]))
        trip.emplace_back(q, geom->compact[geom->idx(i + o[0], j + o[1])], -ih2);
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw LinearSolveError("factorization for the spectrum probe failed");

  const int B = count + 4;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd X(n, B);
  for (int c = 0; c < B; ++c)
    for (int r = 0; r < n; ++r) X(r, c) = gauss(rng);

  for (int it = 0; it < 40; ++it) {
    for (int c = 0; c < B; ++c) X.col(c) = lu.solve(X.col(c).eval());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    X = qr.householderQ() * Eigen::MatrixXd::Identity(n, B);
  }
  Eigen::MatrixXd AX(n, B);
  for (int c = 0; c < B; ++c) {
    Eigen::VectorXd ax = A * X.col(c);
    AX.col(c) = ax;
  }
  Eigen::MatrixXd Hm = X.transpose() * AX;
  Hm = 0.5 * (Hm + Hm.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hm);
  std::vector<double> vals(es.eigenvalues().data(), es.eigenvalues().data() + B);
  std::sort(vals.begin(), vals.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  vals.resize(count);
  return vals;
}

}  // namespace liouville::linearized

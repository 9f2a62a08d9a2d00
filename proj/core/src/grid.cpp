#include "liouville/grid.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

std::shared_ptr<const GridGeometry> GridGeometry::build(const Domain2D& d, double h) {
  if (h <= 0) throw ConfigError("grid spacing must be positive");
  if (d.shortest_side() / h < 32.0)
    throw ResolutionError("grid too coarse: need at least 32 interior points per shortest side");

  auto g = std::make_shared<GridGeometry>();
  g->domain = d;
  g->h = h;

  // Anchor a node exactly at the domain center so symmetric domains get
  // symmetric masks.
  const Vec2 c = d.center();
  const int kx = static_cast<int>(std::ceil((c.x() - d.bbox_lo().x()) / h)) + 1;
  const int ky = static_cast<int>(std::ceil((c.y() - d.bbox_lo().y()) / h)) + 1;
  g->origin = c - Vec2(kx * h, ky * h);
  g->nx = kx + static_cast<int>(std::ceil((d.bbox_hi().x() - c.x()) / h)) + 2;
  g->ny = ky + static_cast<int>(std::ceil((d.bbox_hi().y() - c.y()) / h)) + 2;

  const int n = g->nx * g->ny;
  g->is_interior.assign(n, 0);
  g->compact.assign(n, -1);
  for (int j = 0; j < g->ny; ++j)
    for (int i = 0; i < g->nx; ++i)
      if (d.inside(g->node(i, j))) g->is_interior[g->idx(i, j)] = 1;

  g->n_interior = 0;
  for (int j = 0; j < g->ny; ++j)
    for (int i = 0; i < g->nx; ++i) {
      const int id = g->idx(i, j);
      if (g->is_interior[id]) {
        g->compact[id] = g->n_interior++;
        g->nodes_of.push_back(id);
      }
    }

  g->arms.assign(g->n_interior, {});
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  const int axis[4] = {0, 0, 1, 1};
  const int dir[4] = {1, -1, 1, -1};
  for (int q = 0; q < g->n_interior; ++q) {
    const int id = g->nodes_of[q];
    const int i = id % g->nx, j = id / g->nx;
    const Vec2 p = g->node(i, j);
    for (int a = 0; a < 4; ++a) {
      if (g->interior(i + di[a], j + dj[a])) continue;
      double f = d.crossing_fraction(p, axis[a], dir[a], h);
      if (!(f > 0)) f = 1e-8;
      g->arms[q].f[a] = static_cast<float>(std::clamp(f, 1e-8, 1.0));
    }
  }
  return g;
}

GridField::GridField(std::shared_ptr<const GridGeometry> g, Frame frame, double eps)
    : geom_(std::move(g)), frame_(frame), eps_(eps) {
  if (frame_ == Frame::Expanded && !(eps_ > 0))
    throw ConfigError("expanded frame needs eps > 0");
  v_.assign(geom_->nx * geom_->ny, 0.0);
}

void GridField::fill(const std::function<double(const Vec2&)>& f) {
  for (int j = 0; j < geom_->ny; ++j)
    for (int i = 0; i < geom_->nx; ++i)
      if (geom_->is_interior[geom_->idx(i, j)]) v_[geom_->idx(i, j)] = f(coord(i, j));
}

bool GridField::stencil_ok(int i, int j, int radius) const {
  for (int dj = -radius; dj <= radius; ++dj)
    for (int di = -radius; di <= radius; ++di)
      if (!geom_->interior(i + di, j + dj)) return false;
  return true;
}

double GridField::derivative(int i, int j, int dx, int dy) const {
  const double h = spacing();
  auto val = [&](int a, int b) { return at(i + a, j + b); };
  if (dx == 0 && dy == 0) return val(0, 0);
  if (dx == 1 && dy == 0) return (val(1, 0) - val(-1, 0)) / (2 * h);
  if (dx == 2 && dy == 0) return (val(1, 0) - 2 * val(0, 0) + val(-1, 0)) / (h * h);
  if (dx == 0 && dy == 1) return (val(0, 1) - val(0, -1)) / (2 * h);
  if (dx == 0 && dy == 2) return (val(0, 1) - 2 * val(0, 0) + val(0, -1)) / (h * h);
  if (dx == 1 && dy == 1)
    return (val(1, 1) - val(1, -1) - val(-1, 1) + val(-1, -1)) / (4 * h * h);
  throw ConfigError("unsupported derivative order");
}

double GridField::laplacian5(int i, int j) const {
  const double h = spacing();
  return (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4 * at(i, j)) /
         (h * h);
}

GridField GridField::polyharmonic_stencil(int m, std::vector<std::uint8_t>* ok) const {
  GridField cur = *this;
  std::vector<std::uint8_t> valid = geom_->is_interior;
  const double h = spacing();
  for (int pass = 0; pass < m; ++pass) {
    GridField next(geom_, frame_, eps_);
    std::vector<std::uint8_t> nvalid(valid.size(), 0);
    for (int j = 1; j < geom_->ny - 1; ++j)
      for (int i = 1; i < geom_->nx - 1; ++i) {
        const int id = geom_->idx(i, j);
        if (!valid[id] || !valid[id - 1] || !valid[id + 1] || !valid[id - geom_->nx] ||
            !valid[id + geom_->nx])
          continue;
        next.at(i, j) = -(cur.at(i + 1, j) + cur.at(i - 1, j) + cur.at(i, j + 1) +
                          cur.at(i, j - 1) - 4 * cur.at(i, j)) /
                        (h * h);
        nvalid[id] = 1;
      }
    cur = std::move(next);
    valid = std::move(nvalid);
  }
  if (ok) *ok = valid;
  return cur;
}

double GridField::interpolate(const Vec2& p) const {
  const double h = spacing();
  const Vec2 o = frame_ == Frame::Expanded ? Vec2(geom_->origin / eps_) : geom_->origin;
  const double fx = (p.x() - o.x()) / h;
  const double fy = (p.y() - o.y()) / h;
  int i = static_cast<int>(std::floor(fx));
  int j = static_cast<int>(std::floor(fy));
  i = std::clamp(i, 0, geom_->nx - 2);
  j = std::clamp(j, 0, geom_->ny - 2);
  const double tx = std::clamp(fx - i, 0.0, 1.0);
  const double ty = std::clamp(fy - j, 0.0, 1.0);
  const bool c00 = geom_->interior(i, j), c10 = geom_->interior(i + 1, j);
  const bool c01 = geom_->interior(i, j + 1), c11 = geom_->interior(i + 1, j + 1);
  if (c00 && c10 && c01 && c11) {
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
           (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
  }
  // Near the boundary fall back to the nearest interior corner.
  double best = 0.0, bd = std::numeric_limits<double>::infinity();
  for (int b = 0; b < 4; ++b) {
    const int ii = i + (b & 1), jj = j + (b >> 1);
    if (!geom_->interior(ii, jj)) continue;
    const double d = (coord(ii, jj) - p).squaredNorm();
    if (d < bd) {
      bd = d;
      best = at(ii, jj);
    }
  }
  if (!std::isfinite(bd)) throw DomainError("interpolation query outside the grid mask");
  return best;
}

namespace {
double catmull_rom(double pm1, double p0, double p1, double p2, double t) {
  return p0 + 0.5 * t * (p1 - pm1 +
                         t * (2 * pm1 - 5 * p0 + 4 * p1 - p2 +
                              t * (3 * (p0 - p1) + p2 - pm1)));
}
}  // namespace

double GridField::interpolate_cubic(const Vec2& p) const {
  const double h = spacing();
  const Vec2 o = frame_ == Frame::Expanded ? Vec2(geom_->origin / eps_) : geom_->origin;
  const double fx = (p.x() - o.x()) / h;
  const double fy = (p.y() - o.y()) / h;
  const int i = static_cast<int>(std::floor(fx));
  const int j = static_cast<int>(std::floor(fy));
  for (int b = -1; b <= 2; ++b)
    for (int a = -1; a <= 2; ++a)
      if (!geom_->interior(i + a, j + b)) return interpolate(p);
  const double tx = fx - i, ty = fy - j;
  double col[4];
  for (int b = -1; b <= 2; ++b)
    col[b + 1] = catmull_rom(at(i - 1, j + b), at(i, j + b), at(i + 1, j + b),
                             at(i + 2, j + b), tx);
  return catmull_rom(col[0], col[1], col[2], col[3], ty);
}

void GridField::save_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << "nx,ny,h,frame,eps,origin_x,origin_y\r\n";
  f << geom_->nx << "," << geom_->ny << "," << geom_->h << ","
    << (frame_ == Frame::Expanded ? "expanded" : "physical") << "," << eps_ << ","
    << geom_->origin.x() << "," << geom_->origin.y() << "\r\n";
  f << "i,j,value\r\n";
  for (int j = 0; j < geom_->ny; ++j)
    for (int i = 0; i < geom_->nx; ++i)
      if (geom_->is_interior[geom_->idx(i, j)])
        f << i << "," << j << "," << at(i, j) << "\r\n";
}

void GridField::save_binary(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  const char magic[8] = {'L', 'V', 'G', 'F', '1', 0, 0, 0};
  f.write(magic, 8);
  const std::int32_t dims[2] = {geom_->nx, geom_->ny};
  f.write(reinterpret_cast<const char*>(dims), sizeof dims);
  const double meta[5] = {geom_->h, eps_, frame_ == Frame::Expanded ? 1.0 : 0.0,
                          geom_->origin.x(), geom_->origin.y()};
  f.write(reinterpret_cast<const char*>(meta), sizeof meta);
  f.write(reinterpret_cast<const char*>(v_.data()),
          static_cast<std::streamsize>(v_.size() * sizeof(double)));
}

GridField GridField::load_csv(const std::string& path, const Domain2D& domain) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  std::string line;
  std::getline(f, line);  // header
  std::getline(f, line);
  std::replace(line.begin(), line.end(), ',', ' ');
  std::istringstream meta(line);
  int nx, ny;
  double h, eps, ox, oy;
  std::string frame_s;
  meta >> nx >> ny >> h >> frame_s >> eps >> ox >> oy;
  auto geom = GridGeometry::build(domain, h);
  if (geom->nx != nx || geom->ny != ny)
    throw ConfigError("grid file does not match the domain discretization");
  GridField out(geom, frame_s == "expanded" ? Frame::Expanded : Frame::Physical, eps);
  std::getline(f, line);  // column header
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    int i, j;
    double val;
    row >> i >> j >> val;
    out.at(i, j) = val;
  }
  return out;
}

LaplacianRows laplacian_rows(const GridGeometry& g, double h_eff) {
  LaplacianRows out;
  out.h_eff = h_eff;
  out.rows.resize(g.n_interior);
  const double h2 = h_eff * h_eff;
  for (int q = 0; q < g.n_interior; ++q) {
    const int id = g.nodes_of[q];
    const int i = id % g.nx, j = id / g.nx;
    auto& row = out.rows[q];
    for (int axis = 0; axis < 2; ++axis) {
      const double tp = g.arms[q].f[2 * axis];
      const double tm = g.arms[q].f[2 * axis + 1];
      row.diag += 2.0 / (tp * tm * h2);
      for (int s = 0; s < 2; ++s) {  // 0:+, 1:-
        const double t = s == 0 ? tp : tm;
        const double coef = -2.0 / (t * (tp + tm) * h2);
        const int ni = i + (axis == 0 ? (s == 0 ? 1 : -1) : 0);
        const int nj = j + (axis == 1 ? (s == 0 ? 1 : -1) : 0);
        if (g.interior(ni, nj)) {
          row.nb[row.n_nb++] = {g.compact[g.idx(ni, nj)], coef};
        } else {
          Vec2 p = g.node(i, j);
          p[axis] += (s == 0 ? 1.0 : -1.0) * t * g.h;  // crossing in physical units
          row.bc[row.n_bc++] = {p, -coef};
        }
      }
    }
  }
  return out;
}

struct DirichletSolver::Impl {
  std::shared_ptr<const GridGeometry> geom;
  LaplacianRows rows;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

DirichletSolver::DirichletSolver(std::shared_ptr<const GridGeometry> g, double h_eff,
                                 const std::vector<double>& q_interior)
    : impl_(std::make_unique<Impl>()) {
  impl_->geom = std::move(g);
  impl_->rows = laplacian_rows(*impl_->geom, h_eff);
  const int n = impl_->geom->n_interior;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * 5);
  for (int q = 0; q < n; ++q) {
    const auto& row = impl_->rows.rows[q];
    double d = row.diag;
    if (!q_interior.empty()) d += q_interior[q];
    trip.emplace_back(q, q, d);
    for (int a = 0; a < row.n_nb; ++a) trip.emplace_back(q, row.nb[a].col, row.nb[a].coef);
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  impl_->lu.compute(A);
  if (impl_->lu.info() != Eigen::Success)
    throw LinearSolveError("sparse factorization of the Dirichlet operator failed");
}

DirichletSolver::~DirichletSolver() = default;
DirichletSolver::DirichletSolver(DirichletSolver&&) noexcept = default;

const LaplacianRows& DirichletSolver::rows() const { return impl_->rows; }

GridField DirichletSolver::solve(const std::function<double(const Vec2&)>& g_boundary,
                                 const std::vector<double>& rhs_interior) const {
  const auto& geom = *impl_->geom;
  const int n = geom.n_interior;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (int q = 0; q < n; ++q) {
    double s = rhs_interior.empty() ? 0.0 : rhs_interior[q];
    const auto& row = impl_->rows.rows[q];
    for (int a = 0; a < row.n_bc; ++a) s += row.bc[a].coef * g_boundary(row.bc[a].point);
    b[q] = s;
  }
  Eigen::VectorXd x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success)
    throw LinearSolveError("Dirichlet backsolve failed");
  GridField out(impl_->geom, Frame::Physical);
  for (int q = 0; q < n; ++q) out.values()[geom.nodes_of[q]] = x[q];
  return out;
}

double laplacian_nd(const std::function<double(const Eigen::VectorXd&)>& f,
                    const Eigen::VectorXd& x, double h) {
  const int n = static_cast<int>(x.size());
  const double fc = f(x);
  double s = 0.0;
  Eigen::VectorXd y = x;
  for (int d = 0; d < n; ++d) {
    y[d] = x[d] + h;
    const double fp = f(y);
    y[d] = x[d] - h;
    const double fm = f(y);
    y[d] = x[d];
    s += fp - 2.0 * fc + fm;
  }
  return s / (h * h);
}

double polyharmonic_nd(const std::function<double(const Eigen::VectorXd&)>& f,
                       const Eigen::VectorXd& x, double h, int m) {
  if (m == 0) return f(x);
  // Nest Delta m times, then apply the sign.
  std::vector<std::function<double(const Eigen::VectorXd&)>> levels;
  levels.push_back(f);
  for (int k = 1; k <= m; ++k) {
    auto prev = levels.back();
    levels.push_back([prev, h](const Eigen::VectorXd& p) { return laplacian_nd(prev, p, h); });
  }
  const double val = levels.back()(x);
  return (m % 2 == 0) ? val : -val;
}

}  // namespace liouville

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "liouville/domain.hpp"

namespace liouville {

enum class Frame { Physical, Expanded };

// Uniform node-centered grid covering the closure of a Domain2D. Nodes are
// classified inside/outside; stencils near the boundary carry the axis
// crossing fractions used by the cut-cell Laplacian.
struct GridGeometry {
  Domain2D domain;
  double h = 0.0;
  Vec2 origin{0, 0};
  int nx = 0, ny = 0;

  std::vector<std::uint8_t> is_interior;  // per node
  std::vector<int> compact;               // node -> interior index, -1 outside
  std::vector<int> nodes_of;              // interior index -> node
  int n_interior = 0;

  // Per interior node: fractions of the four arms (+x,-x,+y,-y); 1 = full.
  struct Arms {
    float f[4] = {1, 1, 1, 1};
  };
  std::vector<Arms> arms;  // indexed by interior index

  int idx(int i, int j) const { return j * nx + i; }
  Vec2 node(int i, int j) const { return origin + Vec2(i * h, j * h); }
  Vec2 node_of_interior(int q) const {
    const int n = nodes_of[q];
    return node(n % nx, n / nx);
  }
  bool interior(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx && j < ny && is_interior[idx(i, j)];
  }

  static std::shared_ptr<const GridGeometry> build(const Domain2D& d, double h);
};

// Samples of a scalar function on a GridGeometry. In the expanded frame the
// node coordinates are the physical ones divided by eps.
class GridField {
 public:
  GridField() = default;
  GridField(std::shared_ptr<const GridGeometry> g, Frame frame, double eps = 1.0);

  const GridGeometry& geom() const { return *geom_; }
  std::shared_ptr<const GridGeometry> geom_ptr() const { return geom_; }
  Frame frame() const { return frame_; }
  double eps() const { return eps_; }
  double spacing() const { return frame_ == Frame::Expanded ? geom_->h / eps_ : geom_->h; }
  Vec2 coord(int i, int j) const {
    const Vec2 x = geom_->node(i, j);
    return frame_ == Frame::Expanded ? Vec2(x / eps_) : x;
  }

  double& at(int i, int j) { return v_[geom_->idx(i, j)]; }
  double at(int i, int j) const { return v_[geom_->idx(i, j)]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  void fill(const std::function<double(const Vec2&)>& f);  // f takes frame coords

  // Centered finite differences at interior nodes whose full stencil is
  // interior; dx,dy are derivative orders per axis (dx+dy <= 4, each <= 2
  // per application; higher orders by nesting).
  bool stencil_ok(int i, int j, int radius = 1) const;
  double derivative(int i, int j, int dx, int dy) const;
  double laplacian5(int i, int j) const;

  // Nested m-fold 5-point Laplacian with sign (-1)^m, masked m cells from
  // any non-interior node; ok flags which nodes were computable.
  GridField polyharmonic_stencil(int m, std::vector<std::uint8_t>* ok = nullptr) const;

  double interpolate(const Vec2& p) const;        // bilinear, frame coords
  double interpolate_cubic(const Vec2& p) const;  // Catmull-Rom, C^1

  void save_csv(const std::string& path) const;
  void save_binary(const std::string& path) const;
  static GridField load_csv(const std::string& path, const Domain2D& domain);

 private:
  std::shared_ptr<const GridGeometry> geom_;
  Frame frame_ = Frame::Physical;
  double eps_ = 1.0;
  std::vector<double> v_;
};

// Rows of the cut-cell (-Delta_h) over interior unknowns at effective
// spacing h_eff. Arms cut by the boundary contribute Dirichlet data through
// `boundary`: value coefficient times g(point), with point in physical frame.
struct LaplacianRows {
  struct Neighbor {
    int col;
    double coef;
  };
  struct BoundaryTerm {
    Vec2 point;  // physical coordinates on the boundary
    double coef;
  };
  struct Row {
    double diag = 0.0;
    Neighbor nb[4];
    int n_nb = 0;
    BoundaryTerm bc[4];
    int n_bc = 0;
  };
  std::vector<Row> rows;
  double h_eff = 0.0;
};

LaplacianRows laplacian_rows(const GridGeometry& g, double h_eff);

// Factorized Dirichlet solver for (-Delta_h + diag(q)) u = rhs, u = g on the
// boundary. Reusable across right-hand sides and boundary data.
class DirichletSolver {
 public:
  DirichletSolver(std::shared_ptr<const GridGeometry> g, double h_eff,
                  const std::vector<double>& q_interior = {});
  ~DirichletSolver();
  DirichletSolver(DirichletSolver&&) noexcept;

  // rhs_interior may be empty (treated as zero). Returns full-node field
  // in the physical frame (outside nodes zero).
  GridField solve(const std::function<double(const Vec2&)>& g_boundary,
                  const std::vector<double>& rhs_interior = {}) const;

  const LaplacianRows& rows() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Local stencil Laplacian of a callable in n dimensions (no grid), used for
// the dimension-general bubble checks: sum of second differences with step h.
double laplacian_nd(const std::function<double(const Eigen::VectorXd&)>& f,
                    const Eigen::VectorXd& x, double h);
// m-fold nested version with sign (-1)^m.
double polyharmonic_nd(const std::function<double(const Eigen::VectorXd&)>& f,
                       const Eigen::VectorXd& x, double h, int m);

}  // namespace liouville

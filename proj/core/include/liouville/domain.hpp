#pragma once

#include <Eigen/Core>
#include <vector>

namespace liouville {

using Vec2 = Eigen::Vector2d;

// Planar domain with an implicit boundary the grid machinery can query for
// axis-aligned crossings (needed by the cut-cell Laplacian stencils).
class Domain2D {
 public:
  enum class Kind { Disc, Rectangle, Polygon, Annulus };

  static Domain2D disc(const Vec2& center, double radius);
  static Domain2D rectangle(const Vec2& lo, const Vec2& hi);
  static Domain2D polygon(std::vector<Vec2> vertices);
  static Domain2D annulus(const Vec2& center, double r_inner, double r_outer);

  Kind kind() const { return kind_; }
  bool inside(const Vec2& p) const;
  double boundary_distance(const Vec2& p) const;

  // First boundary crossing from an inside point along axis/dir, as a
  // fraction of the step h. Returns a value > 1 when the full arm is inside.
  double crossing_fraction(const Vec2& from, int axis, int dir, double h) const;

  Vec2 bbox_lo() const { return lo_; }
  Vec2 bbox_hi() const { return hi_; }
  double diameter() const { return (hi_ - lo_).norm(); }
  double shortest_side() const;

  const Vec2& center() const { return center_; }
  double radius() const { return r_outer_; }
  double inner_radius() const { return r_inner_; }
  const std::vector<Vec2>& vertices() const { return verts_; }

 private:
  Kind kind_ = Kind::Disc;
  Vec2 center_{0.0, 0.0};
  double r_outer_ = 1.0;
  double r_inner_ = 0.0;
  Vec2 lo_{-1.0, -1.0}, hi_{1.0, 1.0};
  std::vector<Vec2> verts_;
};

}  // namespace liouville

#include "liouville/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liouville/errors.hpp"

namespace liouville {

Domain2D Domain2D::disc(const Vec2& center, double radius) {
  if (radius <= 0) throw ConfigError("disc radius must be positive");
  Domain2D d;
  d.kind_ = Kind::Disc;
  d.center_ = center;
  d.r_outer_ = radius;
  d.lo_ = center - Vec2(radius, radius);
  d.hi_ = center + Vec2(radius, radius);
  return d;
}

Domain2D Domain2D::rectangle(const Vec2& lo, const Vec2& hi) {
  if (!(lo.x() < hi.x() && lo.y() < hi.y()))
    throw ConfigError("rectangle corners must satisfy lo < hi componentwise");
  Domain2D d;
  d.kind_ = Kind::Rectangle;
  d.lo_ = lo;
  d.hi_ = hi;
  d.center_ = 0.5 * (lo + hi);
  return d;
}

Domain2D Domain2D::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw ConfigError("polygon needs at least 3 vertices");
  Domain2D d;
  d.kind_ = Kind::Polygon;
  d.verts_ = std::move(vertices);
  Vec2 lo = d.verts_[0], hi = d.verts_[0];
  for (const auto& v : d.verts_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  d.lo_ = lo;
  d.hi_ = hi;
  d.center_ = 0.5 * (lo + hi);
  return d;
}

Domain2D Domain2D::annulus(const Vec2& center, double r_inner, double r_outer) {
  if (!(0 < r_inner && r_inner < r_outer))
    throw ConfigError("annulus needs 0 < r_inner < r_outer");
  Domain2D d;
  d.kind_ = Kind::Annulus;
  d.center_ = center;
  d.r_inner_ = r_inner;
  d.r_outer_ = r_outer;
  d.lo_ = center - Vec2(r_outer, r_outer);
  d.hi_ = center + Vec2(r_outer, r_outer);
  return d;
}

namespace {

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& vs) {
  bool in = false;
  const size_t n = vs.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = vs[i];
    const Vec2& b = vs[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double xint = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < xint) in = !in;
    }
  }
  return in;
}

}  // namespace

bool Domain2D::inside(const Vec2& p) const {
  switch (kind_) {
    case Kind::Disc:
      return (p - center_).norm() < r_outer_;
    case Kind::Rectangle:
      return p.x() > lo_.x() && p.x() < hi_.x() && p.y() > lo_.y() && p.y() < hi_.y();
    case Kind::Annulus: {
      const double r = (p - center_).norm();
      return r > r_inner_ && r < r_outer_;
    }
    case Kind::Polygon:
      return point_in_polygon(p, verts_);
  }
  return false;
}

double Domain2D::boundary_distance(const Vec2& p) const {
  switch (kind_) {
    case Kind::Disc:
      return std::abs(r_outer_ - (p - center_).norm());
    case Kind::Rectangle: {
      const double dx = std::min(p.x() - lo_.x(), hi_.x() - p.x());
      const double dy = std::min(p.y() - lo_.y(), hi_.y() - p.y());
      return std::min(std::abs(dx), std::abs(dy));
    }
    case Kind::Annulus: {
      const double r = (p - center_).norm();
      return std::min(std::abs(r - r_inner_), std::abs(r_outer_ - r));
    }
    case Kind::Polygon: {
      double d = std::numeric_limits<double>::infinity();
      const size_t n = verts_.size();
      for (size_t i = 0, j = n - 1; i < n; j = i++)
        d = std::min(d, segment_distance(p, verts_[j], verts_[i]));
      return d;
    }
  }
  return 0.0;
}

double Domain2D::shortest_side() const {
  switch (kind_) {
    case Kind::Disc:
      return 2.0 * r_outer_;
    case Kind::Rectangle:
      return std::min(hi_.x() - lo_.x(), hi_.y() - lo_.y());
    case Kind::Annulus:
      return r_outer_ - r_inner_;
    case Kind::Polygon: {
      double s = std::numeric_limits<double>::infinity();
      s = std::min({s, hi_.x() - lo_.x(), hi_.y() - lo_.y()});
      return s;
    }
  }
  return 0.0;
}

namespace {

// Smallest positive root of |from + t*step*e - c|^2 = R^2 in t in (0, 1].
double circle_crossing(const Vec2& from, const Vec2& dir_step, const Vec2& c, double R) {
  const Vec2 d = from - c;
  const double a = dir_step.squaredNorm();
  const double b = 2.0 * d.dot(dir_step);
  const double cc = d.squaredNorm() - R * R;
  const double disc = b * b - 4.0 * a * cc;
  if (disc < 0) return std::numeric_limits<double>::infinity();
  const double sq = std::sqrt(disc);
  double best = std::numeric_limits<double>::infinity();
  for (double t : {(-b - sq) / (2 * a), (-b + sq) / (2 * a)})
    if (t > 1e-14 && t < best) best = t;
  return best;
}

}  // namespace

double Domain2D::crossing_fraction(const Vec2& from, int axis, int dir, double h) const {
  Vec2 step(0.0, 0.0);
  step[axis] = dir * h;
  switch (kind_) {
    case Kind::Disc:
      return circle_crossing(from, step, center_, r_outer_);
    case Kind::Annulus: {
      const double t1 = circle_crossing(from, step, center_, r_outer_);
      const double t2 = circle_crossing(from, step, center_, r_inner_);
      return std::min(t1, t2);
    }
    case Kind::Rectangle: {
      const double x = from[axis];
      const double wall = dir > 0 ? (axis == 0 ? hi_.x() : hi_.y())
                                  : (axis == 0 ? lo_.x() : lo_.y());
      return (wall - x) / (dir * h);
    }
    case Kind::Polygon: {
      double best = std::numeric_limits<double>::infinity();
      const size_t n = verts_.size();
      for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = verts_[j];
        const Vec2& b = verts_[i];
        // Solve from + t*step = a + s*(b-a), s in [0,1].
        const Vec2 e = b - a;
        const double det = step.x() * (-e.y()) - step.y() * (-e.x());
        if (std::abs(det) < 1e-30) continue;
        const Vec2 rhs = a - from;
        const double t = (rhs.x() * (-e.y()) - rhs.y() * (-e.x())) / det;
        const double s = (step.x() * rhs.y() - step.y() * rhs.x()) / det;
        if (t > 1e-14 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::min(best, t);
      }
      return best;
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace liouville

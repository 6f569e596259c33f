#pragma once

// Exact convex geometry in dimensions 1 and 2: hulls, volumes, intersections,
// Hausdorff distance, Minkowski sums, and regular subdivisions induced by
// lower hulls of lifted point sets. All values are immutable after
// construction and all operations are pure.
//
// Tolerances assume inputs scaled to unit order; inputs are not rescaled.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epival/error.hpp"

namespace epival {

inline constexpr double kGeomTol = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Point/vector in R^1 or R^2. One-dimensional data keeps y == 0 so that the
// linear algebra below is dimension-agnostic.
struct Vec {
  double x = 0.0;
  double y = 0.0;

  Vec() = default;
  Vec(double x_, double y_ = 0.0) : x(x_), y(y_) {}

  Vec operator+(const Vec& o) const { return {x + o.x, y + o.y}; }
  Vec operator-(const Vec& o) const { return {x - o.x, y - o.y}; }
  Vec operator*(double s) const { return {x * s, y * s}; }
  Vec operator-() const { return {-x, -y}; }
};

inline double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline Vec perp(const Vec& a) { return {-a.y, a.x}; }
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

inline Vec normalized(const Vec& a) {
  double n = norm(a);
  require(n > kGeomTol, errc::degenerate_input, "cannot normalize near-zero vector");
  return a * (1.0 / n);
}

inline bool approx(const Vec& a, const Vec& b, double tol = kGeomTol) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

inline bool lex_less(const Vec& a, const Vec& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

// Closed halfspace { x : <normal, x> <= offset }.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

namespace detail {

// Andrew monotone chain. Returns hull vertices CCW starting at the
// lexicographically smallest point; collinear interior points are dropped.
// Degenerate inputs give a segment (2 points) or a single point.
inline std::vector<Vec> hull2(std::vector<Vec> pts, double tol = kGeomTol) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [tol](const Vec& a, const Vec& b) { return approx(a, b, tol); }),
            pts.end());
  if (pts.size() <= 2) return pts;
  auto turn_ok = [tol](const Vec& o, const Vec& a, const Vec& b) {
    return cross(a - o, b - o) > tol;  // strict left turn
  };
  std::vector<Vec> lower, upper;
  for (const Vec& p : pts) {
    while (lower.size() >= 2 && !turn_ok(lower[lower.size() - 2], lower.back(), p)) lower.pop_back();
    lower.push_back(p);
  }
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (upper.size() >= 2 && !turn_ok(upper[upper.size() - 2], upper.back(), *it)) upper.pop_back();
    upper.push_back(*it);
  }
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  if (lower.size() == 2 && approx(lower[0], lower[1], tol)) lower.pop_back();
  return lower;
}

inline double polygon_area(const std::vector<Vec>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec& p = v[i];
    const Vec& q = v[(i + 1) % v.size()];
    a += cross(p, q);
  }
  return 0.5 * a;
}

// Clips a closed convex loop (CCW; may be a 2-point segment or single point)
// against one halfspace. Output follows the same conventions.
inline std::vector<Vec> clip_loop(const std::vector<Vec>& loop, const Halfspace& h,
                                  double tol = kGeomTol) {
  if (loop.empty()) return {};
  if (loop.size() == 1) {
    return dot(h.normal, loop[0]) <= h.offset + tol ? loop : std::vector<Vec>{};
  }
  std::vector<Vec> out;
  std::size_t m = loop.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec& a = loop[i];
    const Vec& b = loop[(i + 1) % m];
    double da = dot(h.normal, a) - h.offset;
    double db = dot(h.normal, b) - h.offset;
    if (da <= tol) out.push_back(a);
    if ((da < -tol && db > tol) || (da > tol && db < -tol)) {
      double t = da / (da - db);
      out.push_back(a + (b - a) * t);
    }
  }
  // dedupe consecutive
  std::vector<Vec> ded;
  for (const Vec& p : out) {
    if (ded.empty() || !approx(ded.back(), p, tol)) ded.push_back(p);
  }
  if (ded.size() > 1 && approx(ded.front(), ded.back(), tol)) ded.pop_back();
  return ded;
}

}  // namespace detail

// Convex polyhedron in R^n, n in {1,2}. Carries both a V-representation
// (vertices plus recession rays) and an H-representation; the factories keep
// the two consistent. The empty set is a distinguished value.
class Polyhedron {
 public:
  int dim = 2;
  std::vector<Vec> vertices;        // canonical: CCW from lex-min (n=2), sorted (n=1)
  std::vector<Vec> rays;            // unit recession directions, deduped
  std::vector<Halfspace> halfspaces;

  Polyhedron() = default;

  static Polyhedron empty_set(int dim) {
    Polyhedron p;
    p.dim = dim;
    p.halfspaces = {{{0.0, 0.0}, -1.0}};  // infeasible
    return p;
  }

  static Polyhedron point(int dim, const Vec& v) { return from_points(dim, {v}); }

  static Polyhedron segment(int dim, const Vec& a, const Vec& b) {
    return from_points(dim, {a, b});
  }

  static Polyhedron box(int dim, const Vec& lo, const Vec& hi) {
    check_dim(dim);
    if (dim == 1) {
      require(lo.x <= hi.x + kGeomTol, errc::invalid_argument, "box: lo > hi");
      return from_points(1, {{lo.x}, {hi.x}});
    }
    require(lo.x <= hi.x + kGeomTol && lo.y <= hi.y + kGeomTol, errc::invalid_argument,
            "box: lo > hi");
    return from_points(2, {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}});
  }

  // Regular k-gon inscribed in the circle of radius r (polytopal stand-in for
  // a disk; the area defect is r^2 (theta - sin theta) per wedge).
  static Polyhedron regular_polygon(const Vec& center, double r, int k) {
    require(k >= 3, errc::invalid_argument, "regular_polygon: k < 3");
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      double a = 2.0 * M_PI * i / k;
      pts.push_back(center + Vec{r * std::cos(a), r * std::sin(a)});
    }
    return from_points(2, pts);
  }

  // Bounded hull of points.
  static Polyhedron from_points(int dim, std::vector<Vec> pts) {
    check_dim(dim);
    require(!pts.empty(), errc::empty_input, "from_points: no points");
    Polyhedron p;
    p.dim = dim;
    if (dim == 1) {
      for (Vec& v : pts) v.y = 0.0;
      double lo = pts[0].x, hi = pts[0].x;
      for (const Vec& v : pts) {
        lo = std::min(lo, v.x);
        hi = std::max(hi, v.x);
      }
      if (hi - lo <= kGeomTol) {
        p.vertices = {{0.5 * (lo + hi)}};
      } else {
        p.vertices = {{lo}, {hi}};
      }
    } else {
      p.vertices = detail::hull2(std::move(pts));
    }
    p.rebuild_hrep();
    return p;
  }

  // V-representation with recession rays.
  static Polyhedron from_vrep(int dim, std::vector<Vec> pts, std::vector<Vec> ray_dirs) {
    Polyhedron p = from_points(dim, std::move(pts));
    for (const Vec& r : ray_dirs) {
      if (norm(r) <= kGeomTol) continue;
      Vec u = normalized(dim == 1 ? Vec{r.x} : r);
      bool dup = false;
      for (const Vec& q : p.rays) dup = dup || approx(q, u, 1e-9);
      if (!dup) p.rays.push_back(u);
    }
    p.rebuild_hrep();
    return p;
  }

  // H-representation; enumerates generators (n <= 2). The result may be
  // unbounded, in which case generator "vertices" need not be true vertices
  // (a strip keeps anchor points) but conv(vertices) + cone(rays) is exact.
  static Polyhedron from_halfspaces(int dim, std::vector<Halfspace> hs) {
    check_dim(dim);
    Polyhedron p;
    p.dim = dim;
    p.halfspaces = hs;
    if (dim == 1) {
      double lo = -kInf, hi = kInf;
      for (const Halfspace& h : hs) {
        if (std::abs(h.normal.x) <= kGeomTol) {
          if (h.offset < -kGeomTol) return empty_set(1);
          continue;
        }
        double b = h.offset / h.normal.x;
        if (h.normal.x > 0) hi = std::min(hi, b);
        else lo = std::max(lo, b);
      }
      if (lo > hi + kGeomTol) return empty_set(1);
      if (std::isfinite(lo) && std::isfinite(hi)) return from_points(1, {{lo}, {hi}});
      std::vector<Vec> r;
      if (!std::isfinite(lo)) r.push_back({-1.0});
      if (!std::isfinite(hi)) r.push_back({1.0});
      double anchor = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
      Polyhedron q = from_vrep(1, {{anchor}}, r);
      q.halfspaces = hs;
      return q;
    }
    return enumerate_2d(hs);
  }

  bool is_empty() const { return vertices.empty(); }
  bool is_bounded() const { return !is_empty() && rays.empty(); }

  // Dimension of the affine hull: -1 empty, 0 point, 1 segment/ray/line, 2 body.
  int affine_dim() const {
    if (is_empty()) return -1;
    std::vector<Vec> dirs;
    for (std::size_t i = 1; i < vertices.size(); ++i) dirs.push_back(vertices[i] - vertices[0]);
    for (const Vec& r : rays) dirs.push_back(r);
    bool has_dir = false;
    Vec d0;
    for (const Vec& d : dirs) {
      if (norm(d) > kGeomTol) {
        if (!has_dir) {
          d0 = d;
          has_dir = true;
        } else if (std::abs(cross(d0, d)) > kGeomTol * (1.0 + norm(d0) * norm(d))) {
          return 2;
        }
      }
    }
    return has_dir ? 1 : 0;
  }

  // n-dimensional Lebesgue measure; 0 when the affine hull is thin.
  double volume() const {
    require(rays.empty(), errc::unbounded, "volume: unbounded polyhedron");
    if (is_empty()) return 0.0;
    if (dim == 1) {
      return vertices.size() < 2 ? 0.0 : vertices.back().x - vertices.front().x;
    }
    if (vertices.size() < 3) return 0.0;
    return detail::polygon_area(vertices);
  }

  // k-dimensional Hausdorff measure; requires affine_dim <= k is false only
  // when the set genuinely has higher dimension (then the measure is infinite).
  double volume_k(int k) const {
    require(rays.empty(), errc::unbounded, "volume_k: unbounded polyhedron");
    if (is_empty()) return 0.0;
    int ad = affine_dim();
    require(ad <= k, errc::invalid_argument, "volume_k: set has higher dimension than k");
    if (ad < k) return 0.0;
    if (k == 0) return 1.0;
    if (k == 1) {
      double len = 0.0;
      for (std::size_t i = 0; i + 1 < vertices.size(); ++i) len += dist(vertices[i], vertices[i + 1]);
      // collinear canonical loops store endpoints in hull order; for a
      // segment the vertex list is exactly its two endpoints
      if (vertices.size() == 2) len = dist(vertices[0], vertices[1]);
      return len;
    }
    return detail::polygon_area(vertices);
  }

  bool contains(const Vec& p, double tol = kGeomTol) const {
    if (is_empty()) return false;
    for (const Halfspace& h : halfspaces) {
      if (dot(h.normal, p) > h.offset + tol * (1.0 + std::abs(h.offset))) return false;
    }
    return true;
  }

  // Support value sup_{x in P} <d, x>; +inf along unbounded directions.
  double support(const Vec& d) const {
    require(!is_empty(), errc::empty_input, "support of empty set");
    for (const Vec& r : rays) {
      if (dot(d, r) > kGeomTol) return kInf;
    }
    double s = -kInf;
    for (const Vec& v : vertices) s = std::max(s, dot(d, v));
    return s;
  }

  Polyhedron translate(const Vec& t) const {
    if (is_empty()) return *this;
    std::vector<Vec> vs = vertices;
    for (Vec& v : vs) v = v + t;
    return from_vrep(dim, vs, rays);
  }

  Polyhedron scale(double s) const {
    require(s >= 0.0, errc::negative_scale, "scale: negative factor");
    if (is_empty()) return *this;
    if (s == 0.0) return point(dim, {0.0, 0.0});
    std::vector<Vec> vs = vertices;
    for (Vec& v : vs) v = v * s;
    return from_vrep(dim, vs, rays);
  }

  void bounding_box(Vec& lo, Vec& hi) const {
    require(!is_empty(), errc::empty_input, "bounding_box of empty set");
    require(rays.empty(), errc::unbounded, "bounding_box of unbounded set");
    lo = hi = vertices[0];
    for (const Vec& v : vertices) {
      lo.x = std::min(lo.x, v.x);
      lo.y = std::min(lo.y, v.y);
      hi.x = std::max(hi.x, v.x);
      hi.y = std::max(hi.y, v.y);
    }
  }

  bool equals(const Polyhedron& o, double tol = 1e-7) const {
    if (dim != o.dim) return false;
    if (is_empty() || o.is_empty()) return is_empty() == o.is_empty();
    if (vertices.size() != o.vertices.size() || rays.size() != o.rays.size()) return false;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (!approx(vertices[i], o.vertices[i], tol)) return false;
    }
    for (const Vec& r : rays) {
      bool found = false;
      for (const Vec& s : o.rays) found = found || approx(r, s, tol);
      if (!found) return false;
    }
    return true;
  }

  // Recomputes the H-representation from the current generators.
  void rebuild_hrep() {
    halfspaces.clear();
    if (is_empty()) {
      halfspaces = {{{0.0, 0.0}, -1.0}};
      return;
    }
    if (dim == 1) {
      bool ray_lo = false, ray_hi = false;
      for (const Vec& r : rays) (r.x < 0 ? ray_lo : ray_hi) = true;
      if (!ray_lo) halfspaces.push_back({{-1.0, 0.0}, -vertices.front().x});
      if (!ray_hi) halfspaces.push_back({{1.0, 0.0}, vertices.back().x});
      return;
    }
    if (rays.empty()) {
      halfspaces = polygon_hrep(vertices);
      return;
    }
    // conv(V) + cone(R): keep hull facets whose outward normal is in the
    // polar of the recession cone, and add the cone's boundary normals.
    std::vector<Halfspace> cand = polygon_hrep(vertices);
    for (const Vec& r : rays) {
      for (const Vec& n : {perp(r), -perp(r)}) {
        bool valid = true;
        for (const Vec& s : rays) valid = valid && dot(n, s) <= kGeomTol;
        if (valid) cand.push_back({n, 0.0});  // offset fixed below
      }
    }
    for (Halfspace& h : cand) {
      bool valid = true;
      for (const Vec& r : rays) valid = valid && dot(h.normal, r) <= kGeomTol;
      if (!valid) continue;
      double off = -kInf;
      for (const Vec& v : vertices) off = std::max(off, dot(h.normal, v));
      halfspaces.push_back({h.normal, off});
    }
  }

 private:
  static void check_dim(int dim) {
    require(dim == 1 || dim == 2, errc::dimension_unsupported, "dimension must be 1 or 2");
  }

  // Outward halfspaces of a CCW polygon; degenerate cases (segment, point)
  // get box-style constraints so membership tests stay exact.
  static std::vector<Halfspace> polygon_hrep(const std::vector<Vec>& v) {
    std::vector<Halfspace> hs;
    if (v.size() == 1) {
      hs.push_back({{1.0, 0.0}, v[0].x});
      hs.push_back({{-1.0, 0.0}, -v[0].x});
      hs.push_back({{0.0, 1.0}, v[0].y});
      hs.push_back({{0.0, -1.0}, -v[0].y});
      return hs;
    }
    if (v.size() == 2) {
      Vec d = normalized(v[1] - v[0]);
      Vec n = perp(d);
      hs.push_back({n, dot(n, v[0])});
      hs.push_back({-n, -dot(n, v[0])});
      hs.push_back({-d, -dot(d, v[0])});
      hs.push_back({d, dot(d, v[1])});
      return hs;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec& a = v[i];
      const Vec& b = v[(i + 1) % v.size()];
      Vec n = normalized(Vec{(b - a).y, -(b - a).x});  // outward for CCW
      hs.push_back({n, dot(n, a)});
    }
    return hs;
  }

  static Polyhedron enumerate_2d(const std::vector<Halfspace>& hs) {
    // vertices: pairwise intersections feasible for all constraints
    std::vector<Vec> pts;
    double scale = 1.0;
    for (const Halfspace& h : hs) scale = std::max(scale, std::abs(h.offset));
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (hs[i].offset < -kGeomTol && norm(hs[i].normal) <= kGeomTol) return empty_set(2);
      for (std::size_t j = i + 1; j < hs.size(); ++j) {
        double det = cross(hs[i].normal, hs[j].normal);
        if (std::abs(det) <= kGeomTol * (norm(hs[i].normal) * norm(hs[j].normal))) continue;
        Vec p{(hs[i].offset * hs[j].normal.y - hs[j].offset * hs[i].normal.y) / det,
              (hs[i].normal.x * hs[j].offset - hs[j].normal.x * hs[i].offset) / det};
        bool ok = true;
        for (const Halfspace& h : hs) {
          ok = ok && dot(h.normal, p) <= h.offset + 1e-7 * (1.0 + scale);
        }
        if (ok) pts.push_back(p);
      }
    }
    // recession directions
    std::vector<Vec> rdirs;
    for (const Halfspace& h : hs) {
      if (norm(h.normal) <= kGeomTol) continue;
      for (const Vec& d : {perp(h.normal), -perp(h.normal)}) {
        Vec u = normalized(d);
        bool ok = true;
        for (const Halfspace& g : hs) ok = ok && dot(g.normal, u) <= 1e-9;
        if (ok) rdirs.push_back(u);
      }
    }
    if (hs.empty()) fail(errc::invalid_argument, "from_halfspaces: empty H-representation");
    if (pts.empty() && rdirs.empty()) return empty_set(2);
    if (pts.empty()) {
      // vertex-free but feasible (halfplane/strip): anchor on a big clipped box
      double w = 4.0 * (scale + 1.0);
      std::vector<Vec> loop = {{-w, -w}, {w, -w}, {w, w}, {-w, w}};
      for (const Halfspace& h : hs) {
        loop = detail::clip_loop(loop, h);
        if (loop.empty()) return empty_set(2);
      }
      pts = loop;
    }
    Polyhedron p = from_vrep(2, pts, rdirs);
    p.halfspaces = hs;
    return p;
  }
};

// P ∩ Q. Empty intersection is the distinguished empty polyhedron.
inline Polyhedron intersect(const Polyhedron& p, const Polyhedron& q) {
  require(p.dim == q.dim, errc::dimension_mismatch, "intersect: dimension mismatch");
  if (p.is_empty() || q.is_empty()) return Polyhedron::empty_set(p.dim);
  if (p.dim == 1) {
    auto upper = [](const Polyhedron& a) {
      for (const Vec& r : a.rays)
        if (r.x > 0) return kInf;
      return a.vertices.back().x;
    };
    auto lower = [](const Polyhedron& a) {
      for (const Vec& r : a.rays)
        if (r.x < 0) return -kInf;
      return a.vertices.front().x;
    };
    double lo = std::max(lower(p), lower(q));
    double hi = std::min(upper(p), upper(q));
    if (lo > hi + kGeomTol) return Polyhedron::empty_set(1);
    std::vector<Vec> rays;
    if (!std::isfinite(lo)) rays.push_back({-1.0});
    if (!std::isfinite(hi)) rays.push_back({1.0});
    if (rays.empty()) return Polyhedron::from_points(1, {{lo}, {hi}});
    double anchor = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
    return Polyhedron::from_vrep(1, {{anchor}}, rays);
  }
  const Polyhedron* bounded = nullptr;
  const Polyhedron* other = nullptr;
  if (p.is_bounded()) {
    bounded = &p;
    other = &q;
  } else if (q.is_bounded()) {
    bounded = &q;
    other = &p;
  }
  if (bounded) {
    std::vector<Vec> loop = bounded->vertices;
    for (const Halfspace& h : other->halfspaces) {
      loop = detail::clip_loop(loop, h);
      if (loop.empty()) return Polyhedron::empty_set(2);
    }
    return Polyhedron::from_points(2, loop);
  }
  std::vector<Halfspace> hs = p.halfspaces;
  hs.insert(hs.end(), q.halfspaces.begin(), q.halfspaces.end());
  return Polyhedron::from_halfspaces(2, hs);
}

inline Polyhedron minkowski_sum(const Polyhedron& p, const Polyhedron& q) {
  require(p.dim == q.dim, errc::dimension_mismatch, "minkowski_sum: dimension mismatch");
  require(p.is_bounded() && q.is_bounded(), errc::unbounded, "minkowski_sum: unbounded input");
  std::vector<Vec> pts;
  pts.reserve(p.vertices.size() * q.vertices.size());
  for (const Vec& a : p.vertices)
    for (const Vec& b : q.vertices) pts.push_back(a + b);
  return Polyhedron::from_points(p.dim, pts);
}

namespace detail {

inline double point_segment_dist(const Vec& p, const Vec& a, const Vec& b) {
  Vec d = b - a;
  double l2 = norm2(d);
  if (l2 <= kGeomTol * kGeomTol) return dist(p, a);
  double t = std::clamp(dot(p - a, d) / l2, 0.0, 1.0);
  return dist(p, a + d * t);
}

inline double point_to_polyhedron(const Vec& p, const Polyhedron& q) {
  if (q.contains(p)) return 0.0;
  double best = kInf;
  const auto& v = q.vertices;
  if (v.size() == 1) return dist(p, v[0]);
  for (std::size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, point_segment_dist(p, v[i], v[(i + 1) % v.size()]));
  }
  return best;
}

}  // namespace detail

// Hausdorff distance between bounded nonempty polyhedra; exact because the
// directed maxima are attained at vertices.
inline double hausdorff_distance(const Polyhedron& p, const Polyhedron& q) {
  require(p.dim == q.dim, errc::dimension_mismatch, "hausdorff: dimension mismatch");
  require(!p.is_empty() && !q.is_empty(), errc::empty_input, "hausdorff: empty input");
  require(p.is_bounded() && q.is_bounded(), errc::unbounded, "hausdorff: unbounded input");
  double d = 0.0;
  for (const Vec& v : p.vertices) d = std::max(d, detail::point_to_polyhedron(v, q));
  for (const Vec& v : q.vertices) d = std::max(d, detail::point_to_polyhedron(v, p));
  return d;
}

inline Polyhedron convex_hull_of(const Polyhedron& p, const Polyhedron& q) {
  std::vector<Vec> pts = p.vertices;
  pts.insert(pts.end(), q.vertices.begin(), q.vertices.end());
  return Polyhedron::from_points(p.dim, pts);
}

// Lifted points (a_i, h_i); duplicates of a_i are merged keeping the lower height.
struct LiftedPointSet {
  int dim = 1;
  std::vector<Vec> points;
  std::vector<double> heights;

  static LiftedPointSet make(int dim, std::vector<Vec> pts, std::vector<double> hs) {
    require(pts.size() == hs.size(), errc::invalid_argument, "lifted points: size mismatch");
    require(!pts.empty(), errc::empty_input, "lifted points: empty");
    LiftedPointSet out;
    out.dim = dim;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Vec p = dim == 1 ? Vec{pts[i].x} : pts[i];
      bool merged = false;
      for (std::size_t j = 0; j < out.points.size(); ++j) {
        if (approx(out.points[j], p)) {
          out.heights[j] = std::min(out.heights[j], hs[i]);
          merged = true;
          break;
        }
      }
      if (!merged) {
        out.points.push_back(p);
        out.heights.push_back(hs[i]);
      }
    }
    return out;
  }
};

struct SubCell {
  Polyhedron poly;
  std::vector<int> gens;  // indices of lifted points on the supporting plane
  Vec grad;               // supporting plane z = <grad, a> + offset
  double offset = 0.0;
};

struct SubFace {
  Polyhedron poly;
  std::vector<int> cells;  // incident cell indices
};

struct Subdivision {
  int dim = 1;
  std::vector<SubCell> cells;
  std::vector<SubFace> faces;

  std::vector<Vec> all_vertices() const {
    std::vector<Vec> vs;
    for (const SubCell& c : cells) {
      for (const Vec& v : c.poly.vertices) {
        bool dup = false;
        for (const Vec& w : vs) dup = dup || approx(w, v);
        if (!dup) vs.push_back(v);
      }
    }
    return vs;
  }

  Polyhedron domain() const {
    return Polyhedron::from_points(dim, all_vertices());
  }
};

namespace detail {

// 1-d lower hull along parameter t; returns chain vertex indices into (t, h).
inline std::vector<int> lower_chain(const std::vector<double>& t, const std::vector<double>& h) {
  std::vector<int> order(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return t[a] < t[b]; });
  std::vector<int> chain;
  for (int idx : order) {
    while (chain.size() >= 2) {
      int a = chain[chain.size() - 2], b = chain.back();
      // keep b only if it lies strictly below segment a-idx
      double crossz = (t[b] - t[a]) * (h[idx] - h[a]) - (h[b] - h[a]) * (t[idx] - t[a]);
      if (crossz > kGeomTol * (1.0 + std::abs(t[idx] - t[a]))) break;
      chain.pop_back();
    }
    chain.push_back(idx);
  }
  return chain;
}

inline void subdivision_faces_2d(Subdivision& sub) {
  // shared segments between cells plus boundary edges
  struct EdgeRec {
    Vec a, b;
    std::vector<int> cells;
  };
  std::vector<EdgeRec> recs;
  for (std::size_t ci = 0; ci < sub.cells.size(); ++ci) {
    const auto& v = sub.cells[ci].poly.vertices;
    if (v.size() < 2) continue;
    std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
      Vec a = v[i], b = v[(i + 1) % m];
      if (m == 2 && i == 1) break;
      if (lex_less(b, a)) std::swap(a, b);
      bool merged = false;
      for (EdgeRec& r : recs) {
        if (approx(r.a, a) && approx(r.b, b)) {
          r.cells.push_back(static_cast<int>(ci));
          merged = true;
          break;
        }
      }
      if (!merged) recs.push_back({a, b, {static_cast<int>(ci)}});
    }
  }
  for (const EdgeRec& r : recs) {
    sub.faces.push_back({Polyhedron::segment(2, r.a, r.b), r.cells});
  }
}

}  // namespace detail

// Regular subdivision of conv{a_i} induced by the lower convex hull of the
// lifted points (a_i, h_i). Coplanar ties keep the coarse cell. Handles
// degenerate inputs (collinear or coincident a_i) by producing lower
// dimensional cells.
inline Subdivision lower_hull(const LiftedPointSet& pts) {
  require(pts.dim == 1 || pts.dim == 2, errc::dimension_unsupported,
          "lower_hull: dimension must be 1 or 2");
  const std::size_t m = pts.points.size();
  Subdivision sub;
  sub.dim = pts.dim;

  double hscale = 1.0, ascale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    hscale = std::max(hscale, std::abs(pts.heights[i]));
    ascale = std::max({ascale, std::abs(pts.points[i].x), std::abs(pts.points[i].y)});
  }

  // rank of the projected point set
  int rank = 0;
  Vec d0;
  for (std::size_t i = 1; i < m && rank < 2; ++i) {
    Vec d = pts.points[i] - pts.points[0];
    if (norm(d) <= kGeomTol) continue;
    if (rank == 0) {
      d0 = d;
      rank = 1;
    } else if (std::abs(cross(d0, d)) > kGeomTol * (1.0 + norm(d0) * norm(d))) {
      rank = 2;
    }
  }
  if (pts.dim == 1) rank = std::min(rank, 1);

  if (rank == 0) {
    SubCell c;
    c.poly = Polyhedron::point(pts.dim, pts.points[0]);
    c.gens = {0};
    c.grad = {0.0, 0.0};
    c.offset = pts.heights[0];
    sub.cells.push_back(c);
    return sub;
  }

  if (rank == 1) {
    // parametrize along the carrier line and run the 1-d chain
    Vec base = pts.points[0];
    Vec dir = normalized(d0);
    std::vector<double> t(m);
    for (std::size_t i = 0; i < m; ++i) t[i] = dot(pts.points[i] - base, dir);
    std::vector<int> chain = detail::lower_chain(t, pts.heights);
    double tol = kGeomTol * (1.0 + hscale);
    for (std::size_t e = 0; e + 1 < chain.size(); ++e) {
      int i = chain[e], j = chain[e + 1];
      double g = (pts.heights[j] - pts.heights[i]) / (t[j] - t[i]);
      SubCell c;
      c.poly = pts.dim == 1 ? Polyhedron::segment(1, pts.points[i], pts.points[j])
                            : Polyhedron::segment(2, base + dir * t[i], base + dir * t[j]);
      c.grad = dir * g;
      c.offset = pts.heights[i] - dot(c.grad, pts.points[i]);
      for (std::size_t l = 0; l < m; ++l) {
        bool inside = t[l] >= t[i] - kGeomTol && t[l] <= t[j] + kGeomTol;
        if (inside && std::abs(pts.heights[l] - dot(c.grad, pts.points[l]) - c.offset) <= tol) {
          c.gens.push_back(static_cast<int>(l));
        }
      }
      sub.cells.push_back(c);
    }
    // interior chain vertices as faces
    for (std::size_t e = 1; e + 1 < chain.size(); ++e) {
      int i = chain[e];
      sub.faces.push_back({Polyhedron::point(pts.dim, pts.points[i]),
                           {static_cast<int>(e - 1), static_cast<int>(e)}});
    }
    return sub;
  }

  // full-rank n=2: enumerate supporting planes through point triples
  std::set<std::vector<int>> seen;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        Vec e1 = pts.points[j] - pts.points[i];
        Vec e2 = pts.points[k] - pts.points[i];
        double det = cross(e1, e2);
        if (std::abs(det) <= kGeomTol * (1.0 + norm(e1) * norm(e2))) continue;
        double dh1 = pts.heights[j] - pts.heights[i];
        double dh2 = pts.heights[k] - pts.heights[i];
        Vec g{(dh1 * e2.y - dh2 * e1.y) / det, (e1.x * dh2 - e2.x * dh1) / det};
        double c0 = pts.heights[i] - dot(g, pts.points[i]);
        double tol = kGeomTol * (1.0 + hscale + norm(g) * ascale);
        bool lower = true;
        for (std::size_t l = 0; l < m && lower; ++l) {
          lower = pts.heights[l] - dot(g, pts.points[l]) - c0 >= -tol;
        }
        if (!lower) continue;
        std::vector<int> gens;
        for (std::size_t l = 0; l < m; ++l) {
          if (std::abs(pts.heights[l] - dot(g, pts.points[l]) - c0) <= tol) {
            gens.push_back(static_cast<int>(l));
          }
        }
        if (!seen.insert(gens).second) continue;
        SubCell c;
        std::vector<Vec> cp;
        for (int l : gens) cp.push_back(pts.points[l]);
        c.poly = Polyhedron::from_points(2, cp);
        c.gens = gens;
        c.grad = g;
        c.offset = c0;
        if (c.poly.affine_dim() == 2) sub.cells.push_back(c);
      }
    }
  }
  detail::subdivision_faces_2d(sub);
  return sub;
}

}  // namespace epival

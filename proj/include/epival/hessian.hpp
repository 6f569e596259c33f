#pragma once

// Hessian measures Theta_i for PA functions via the face decomposition of the
// subdifferential graph Gamma_u, the displacement-volume polynomial
//   H^n(P_s(u, eta)) = sum_i binom(n,i) s^i Theta_{n-i}(u, eta),
// its Monte-Carlo oracle, the conjugation duality of the measures, mixed
// discriminants, and midpoint quadrature for the smooth integral formulas.

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <vector>

#include "epival/convexfn.hpp"
#include "epival/error.hpp"
#include "epival/parallel.hpp"
#include "epival/rng.hpp"
#include "epival/testfn.hpp"

namespace epival {

// One stratum of Gamma_u: relint(face) x subdiff, with face a k-face of the
// subdivision and subdiff the (n-k)-dimensional subdifferential set there
// (unbounded on the domain boundary). The direction spaces are orthogonal.
struct GraphPiece {
  Polyhedron face;
  Polyhedron subdiff;
  int k = 0;
};

struct Window {
  Polyhedron b;  // x side
  Polyhedron c;  // y side

  Window hat() const { return {c, b}; }
};

struct HessianMeasureTable {
  int dim = 1;
  std::array<double, 3> theta{};  // Theta_0 .. Theta_n

  double operator[](int i) const { return theta[static_cast<std::size_t>(i)]; }
};

namespace detail {

struct SplitEdge {
  Vec a, b;
  std::vector<int> cells;
};

// Cell edges split at every subdivision vertex lying on them, so complexes
// with T-junctions still stratify correctly; keyed by canonical endpoints.
inline std::vector<SplitEdge> collect_edges(const Subdivision& sub, const std::vector<Vec>& verts) {
  std::vector<SplitEdge> out;
  for (std::size_t ci = 0; ci < sub.cells.size(); ++ci) {
    const auto& v = sub.cells[ci].poly.vertices;
    std::size_t m = v.size();
    if (m < 3) continue;
    for (std::size_t i = 0; i < m; ++i) {
      Vec a = v[i], b = v[(i + 1) % m];
      Vec dir = b - a;
      double len = norm(dir);
      // split points along this edge
      std::vector<double> ts = {0.0, 1.0};
      for (const Vec& w : verts) {
        if (point_segment_dist(w, a, b) <= kGeomTol) {
          double t = dot(w - a, dir) / (len * len);
          if (t > 1e-9 && t < 1.0 - 1e-9) ts.push_back(t);
        }
      }
      std::sort(ts.begin(), ts.end());
      for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
        if (ts[s + 1] - ts[s] <= 1e-9) continue;
        Vec pa = a + dir * ts[s], pb = a + dir * ts[s + 1];
        if (lex_less(pb, pa)) std::swap(pa, pb);
        bool merged = false;
        for (SplitEdge& e : out) {
          if (approx(e.a, pa, 1e-8) && approx(e.b, pb, 1e-8)) {
            e.cells.push_back(static_cast<int>(ci));
            merged = true;
            break;
          }
        }
        if (!merged) out.push_back({pa, pb, {static_cast<int>(ci)}});
      }
    }
  }
  return out;
}

}  // namespace detail

// All strata of Gamma_u for a full-dimensional domain: cells (k = n), edges
// (k = 1 in the plane), vertices (k = 0). Subdifferentials on boundary faces
// pick up the normal-cone rays of the domain.
inline std::vector<GraphPiece> face_lattice(const CellPA& u) {
  require(u.dim == 1 || u.dim == 2, errc::dimension_unsupported, "face_lattice: dim 1 or 2");
  require(u.dom.affine_dim() == u.dim, errc::degenerate_input,
          "face_lattice: domain must be full-dimensional");
  std::vector<GraphPiece> pieces;

  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    pieces.push_back({u.sub.cells[i].poly,
                      Polyhedron::point(u.dim, u.pieces[i].slope), u.dim});
  }

  std::vector<Vec> verts = u.sub.all_vertices();
  for (const Vec& x : verts) {
    pieces.push_back({Polyhedron::point(u.dim, x), subdifferential(u, x), 0});
  }

  if (u.dim == 2) {
    for (const detail::SplitEdge& e : detail::collect_edges(u.sub, verts)) {
      Vec mid = (e.a + e.b) * 0.5;
      pieces.push_back({Polyhedron::segment(2, e.a, e.b), subdifferential(u, mid), 1});
    }
  }
  return pieces;
}

// Worst violation of the orthogonality invariant between face directions and
// subdifferential directions (diagnostic; should be ~0).
inline double orthogonality_defect(const std::vector<GraphPiece>& pieces) {
  double worst = 0.0;
  for (const GraphPiece& p : pieces) {
    std::vector<Vec> fdirs, qdirs;
    for (std::size_t i = 1; i < p.face.vertices.size(); ++i) {
      fdirs.push_back(normalized(p.face.vertices[i] - p.face.vertices[0]));
    }
    for (std::size_t i = 1; i < p.subdiff.vertices.size(); ++i) {
      Vec d = p.subdiff.vertices[i] - p.subdiff.vertices[0];
      if (norm(d) > kGeomTol) qdirs.push_back(normalized(d));
    }
    for (const Vec& r : p.subdiff.rays) qdirs.push_back(r);
    for (const Vec& f : fdirs)
      for (const Vec& q : qdirs) worst = std::max(worst, std::abs(dot(f, q)));
  }
  return worst;
}

// Theta_k(u, B x C) = binom(n,k)^-1 sum over k-faces of
// vol_k(F cap B) * vol_{n-k}(Q_F cap C): on each stratum the displacement
// x + s y sweeps orthogonal complements, contributing s^{n-k} times that
// product to H^n(P_s).
inline HessianMeasureTable hessian_measure(const CellPA& u, const Window& w) {
  require(u.dim == 1 || u.dim == 2, errc::dimension_unsupported, "hessian_measure: dim 1 or 2");
  require(w.b.is_bounded() && w.c.is_bounded(), errc::unbounded_window,
          "hessian_measure: window must be bounded");
  static const double binom2[3][3] = {{1, 0, 0}, {1, 1, 0}, {1, 2, 1}};
  HessianMeasureTable table;
  table.dim = u.dim;
  for (const GraphPiece& p : face_lattice(u)) {
    Polyhedron fb = intersect(p.face, w.b);
    if (fb.is_empty()) continue;
    Polyhedron qc = intersect(p.subdiff, w.c);
    if (qc.is_empty()) continue;
    double vf = fb.volume_k(p.k);
    double vq = qc.volume_k(u.dim - p.k);
    table.theta[static_cast<std::size_t>(p.k)] += vf * vq / binom2[u.dim][p.k];
  }
  return table;
}

// H^n(P_s) predicted by the measure table.
inline double ps_poly(const HessianMeasureTable& t, double s) {
  double acc = 0.0;
  double binom[3] = {1, static_cast<double>(t.dim), 1};
  for (int i = 0; i <= t.dim; ++i) {
    acc += binom[i] * std::pow(s, i) * t.theta[static_cast<std::size_t>(t.dim - i)];
  }
  return acc;
}

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

namespace detail {

struct McPiece {
  int k;
  // k = n: subdiff point g, membership x = z - s g in fb
  Vec g;
  Polyhedron fb;
  // k = 0: face point v, membership y = (z - v)/s in qc
  Vec v;
  Polyhedron qc;
  // k = 1 (n = 2): u axis along the edge, w = perp(u)
  Vec axis, nrm;
  double x_perp = 0.0;  // fixed U-perp coordinate of the face
  double y_axis = 0.0;  // fixed U coordinate of the subdiff flat
  double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
  // bounding box of fb + s * qc
  Vec blo, bhi;
};

}  // namespace detail

// Monte-Carlo estimate of H^n(P_s(u, eta)): uniform samples over a bounding
// box of the union of the per-stratum images, membership decided by the
// orthogonal decomposition z = x + s y per stratum. Bitwise reproducible for
// a fixed seed regardless of worker count (the RNG is indexed by sample).
inline McEstimate ps_volume_mc(const CellPA& u, double s, const Window& w, std::uint64_t samples,
                               std::uint64_t seed, int workers = 0) {
  require(s > 0.0, errc::invalid_argument, "ps_volume_mc: s must be positive");
  require(w.b.is_bounded() && w.c.is_bounded(), errc::unbounded_window,
          "ps_volume_mc: window must be bounded");
  if (workers <= 0) workers = default_workers();
  const int n = u.dim;

  std::vector<detail::McPiece> pieces;
  Vec glo{kInf, kInf}, ghi{-kInf, -kInf};
  for (const GraphPiece& p : face_lattice(u)) {
    Polyhedron fb = intersect(p.face, w.b);
    Polyhedron qc = intersect(p.subdiff, w.c);
    if (fb.is_empty() || qc.is_empty()) continue;
    detail::McPiece mp;
    mp.k = p.k;
    mp.fb = fb;
    mp.qc = qc;
    if (p.k == n) {
      mp.g = p.subdiff.vertices[0];
    } else if (p.k == 0) {
      mp.v = p.face.vertices[0];
    } else {
      mp.axis = normalized(p.face.vertices.back() - p.face.vertices.front());
      mp.nrm = perp(mp.axis);
      mp.x_perp = dot(p.face.vertices[0], mp.nrm);
      mp.y_axis = dot(p.subdiff.vertices[0], mp.axis);
      mp.xlo = kInf, mp.xhi = -kInf;
      for (const Vec& vv : fb.vertices) {
        mp.xlo = std::min(mp.xlo, dot(vv, mp.axis));
        mp.xhi = std::max(mp.xhi, dot(vv, mp.axis));
      }
      mp.ylo = kInf, mp.yhi = -kInf;
      for (const Vec& vv : qc.vertices) {
        mp.ylo = std::min(mp.ylo, dot(vv, mp.nrm));
        mp.yhi = std::max(mp.yhi, dot(vv, mp.nrm));
      }
    }
    Vec flo, fhi, qlo, qhi;
    fb.bounding_box(flo, fhi);
    qc.bounding_box(qlo, qhi);
    mp.blo = flo + qlo * s;
    mp.bhi = fhi + qhi * s;
    glo.x = std::min(glo.x, mp.blo.x);
    glo.y = std::min(glo.y, mp.blo.y);
    ghi.x = std::max(ghi.x, mp.bhi.x);
    ghi.y = std::max(ghi.y, mp.bhi.y);
    pieces.push_back(mp);
  }
  if (pieces.empty()) return {0.0, 0.0, samples};

  double box_vol = (ghi.x - glo.x) * (n == 2 ? (ghi.y - glo.y) : 1.0);
  auto member = [&](const Vec& z) {
    for (const detail::McPiece& mp : pieces) {
      if (z.x < mp.blo.x - 1e-12 || z.x > mp.bhi.x + 1e-12) continue;
      if (n == 2 && (z.y < mp.blo.y - 1e-12 || z.y > mp.bhi.y + 1e-12)) continue;
      if (mp.k == n) {
        if (mp.fb.contains(z - mp.g * s)) return true;
      } else if (mp.k == 0) {
        if (mp.qc.contains((z - mp.v) * (1.0 / s))) return true;
      } else {
        double yp = (dot(z, mp.nrm) - mp.x_perp) / s;
        if (yp < mp.ylo - 1e-9 || yp > mp.yhi + 1e-9) continue;
        double xa = dot(z, mp.axis) - s * mp.y_axis;
        if (xa >= mp.xlo - 1e-9 && xa <= mp.xhi + 1e-9) return true;
      }
    }
    return false;
  };

  std::uint64_t shards = static_cast<std::uint64_t>(workers) * 8;
  std::uint64_t per = (samples + shards - 1) / shards;
  std::vector<std::uint64_t> hits(shards, 0);
  parallel_for(shards, workers, [&](std::size_t shard) {
    std::uint64_t lo = shard * per;
    std::uint64_t hi = std::min<std::uint64_t>(samples, lo + per);
    std::uint64_t count = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      Rng rng(seed, i);
      Vec z{glo.x + (ghi.x - glo.x) * rng.next_double(),
            n == 2 ? glo.y + (ghi.y - glo.y) * rng.next_double() : 0.0};
      if (member(z)) ++count;
    }
    hits[shard] = count;
  });
  std::uint64_t total = 0;
  for (std::uint64_t h : hits) total += h;
  double p = static_cast<double>(total) / static_cast<double>(samples);
  double est = box_vol * p;
  double se = box_vol * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
  return {est, se, samples};
}

struct DualityReport {
  std::array<double, 3> theta_fn{};         // Theta_i(v, B x C) via the graph of v
  std::array<double, 3> theta_conjugate{};  // Theta_{n-i}(v*, C x B)
  double max_discrepancy = 0.0;
};

// Theta_i(v, eta) = Theta_{n-i}(v*, eta-hat): the left side assembled from the
// swapped strata of Gamma_{v*} (x and y roles exchanged), the right side by
// hessian_measure on the conjugate directly.
inline DualityReport duality_check(const MaxAffine& v, const Window& w) {
  require(v.dim == 1 || v.dim == 2, errc::dimension_unsupported, "duality_check: dim 1 or 2");
  const int n = v.dim;
  CellPA u = conjugate(v);
  static const double binom2[3][3] = {{1, 0, 0}, {1, 1, 0}, {1, 2, 1}};
  DualityReport rep;
  for (const GraphPiece& p : face_lattice(u)) {
    // stratum of Gamma_v: x in Q_F, y in relint F; x-dimension i = n - k
    int i = n - p.k;
    Polyhedron qb = intersect(p.subdiff, w.b);
    Polyhedron fc = intersect(p.face, w.c);
    if (qb.is_empty() || fc.is_empty()) continue;
    rep.theta_fn[static_cast<std::size_t>(i)] +=
        qb.volume_k(i) * fc.volume_k(n - i) / binom2[n][i];
  }
  HessianMeasureTable conj = hessian_measure(u, w.hat());
  for (int i = 0; i <= n; ++i) {
    rep.theta_conjugate[static_cast<std::size_t>(i)] = conj[n - i];
    rep.max_discrepancy =
        std::max(rep.max_discrepancy,
                 std::abs(rep.theta_fn[static_cast<std::size_t>(i)] -
                          rep.theta_conjugate[static_cast<std::size_t>(i)]));
  }
  return rep;
}

// Symmetric matrix, order 1..3.
struct SymMat {
  int n = 2;
  double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  static SymMat identity(int n) {
    SymMat s;
    s.n = n;
    for (int i = 0; i < n; ++i) s.m[i][i] = 1.0;
    return s;
  }

  static SymMat mat2(double a, double b, double c) {  // [[a,b],[b,c]]
    SymMat s;
    s.n = 2;
    s.m[0][0] = a;
    s.m[0][1] = s.m[1][0] = b;
    s.m[1][1] = c;
    return s;
  }

  SymMat operator+(const SymMat& o) const {
    SymMat s = *this;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s.m[i][j] += o.m[i][j];
    return s;
  }

  SymMat operator*(double t) const {
    SymMat s = *this;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s.m[i][j] *= t;
    return s;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += m[i][i];
    return t;
  }

  double det() const {
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  // k-th elementary symmetric function of the eigenvalues
  double elementary_symmetric(int k) const {
    if (k == 0) return 1.0;
    if (k == 1) return trace();
    if (k == n) return det();
    // n = 3, k = 2
    double t = trace();
    double sq = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sq += m[i][j] * m[j][i];
    return 0.5 * (t * t - sq);
  }

  double min_eigenvalue() const {
    if (n == 1) return m[0][0];
    if (n == 2) {
      double tr = trace();
      double d = std::sqrt(std::max((m[0][0] - m[1][1]) * (m[0][0] - m[1][1]) +
                                        4.0 * m[0][1] * m[0][1],
                                    0.0));
      return 0.5 * (tr - d);
    }
    fail(errc::dimension_unsupported, "min_eigenvalue: order 3 not needed");
  }
};

// D(M_1,...,M_n): the polarization of det; symmetric, multilinear,
// D(M,...,M) = det M.
inline double mixed_discriminant(const std::vector<SymMat>& ms) {
  require(!ms.empty() && ms.size() <= 3, errc::dimension_unsupported,
          "mixed_discriminant: order must be 1..3");
  int n = static_cast<int>(ms.size());
  for (const SymMat& m : ms) {
    require(m.n == n, errc::dimension_mismatch, "mixed_discriminant: order/count mismatch");
  }
  double acc = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    SymMat sum;
    sum.n = n;
    int bits = 0;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        sum = sum + ms[static_cast<std::size_t>(j)];
        ++bits;
      }
    }
    double sign = ((n - bits) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * sum.det();
  }
  double fact[4] = {1, 1, 2, 6};
  return acc / fact[n];
}

// Uniform grid sampling of a smooth convex function; nodes sit at cell
// centers so plain node sums are the midpoint rule. Stencil derivatives are
// central differences on interior nodes.
struct SmoothGridFunction {
  int dim = 2;
  Vec lo, hi;
  double h = 0.0;
  int nx = 0, ny = 1;
  std::vector<double> vals;

  static SmoothGridFunction from_callable(int dim, const Vec& lo, const Vec& hi, double h,
                                          const std::function<double(Vec)>& f) {
    require(h > 0.0, errc::invalid_argument, "grid: step must be positive");
    SmoothGridFunction g;
    g.dim = dim;
    g.lo = lo;
    g.hi = hi;
    g.h = h;
    g.nx = static_cast<int>(std::round((hi.x - lo.x) / h));
    g.ny = dim == 2 ? static_cast<int>(std::round((hi.y - lo.y) / h)) : 1;
    require(g.nx >= 5 && (dim == 1 || g.ny >= 5), errc::invalid_argument, "grid: too coarse");
    g.vals.resize(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny));
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) {
        g.vals[g.idx(i, j)] = f(g.node(i, j));
      }
    }
    return g;
  }

  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(i);
  }

  Vec node(int i, int j) const {
    return {lo.x + (i + 0.5) * h, dim == 2 ? lo.y + (j + 0.5) * h : 0.0};
  }

  double value(int i, int j) const { return vals[idx(i, j)]; }

  bool interior(int i, int j) const {
    return i >= 1 && i <= nx - 2 && (dim == 1 || (j >= 1 && j <= ny - 2));
  }

  Vec gradient(int i, int j) const {
    Vec g;
    g.x = (value(i + 1, j) - value(i - 1, j)) / (2 * h);
    if (dim == 2) g.y = (value(i, j + 1) - value(i, j - 1)) / (2 * h);
    return g;
  }

  SymMat hessian(int i, int j) const {
    SymMat s;
    s.n = dim;
    s.m[0][0] = (value(i + 1, j) - 2 * value(i, j) + value(i - 1, j)) / (h * h);
    if (dim == 2) {
      s.m[1][1] = (value(i, j + 1) - 2 * value(i, j) + value(i, j - 1)) / (h * h);
      s.m[0][1] = s.m[1][0] = (value(i + 1, j + 1) - value(i + 1, j - 1) - value(i - 1, j + 1) +
                               value(i - 1, j - 1)) /
                              (4 * h * h);
    }
    return s;
  }

  // Discrete convexity certificate: the worst (most negative) stencil
  // eigenvalue over the interior; a warning-level diagnostic, not an error.
  double worst_stencil_eigenvalue() const {
    double worst = kInf;
    for (int i = 1; i <= nx - 2; ++i) {
      for (int j = (dim == 2 ? 1 : 0); j <= (dim == 2 ? ny - 2 : 0); ++j) {
        worst = std::min(worst, hessian(i, j).min_eigenvalue());
      }
    }
    return worst;
  }
};

using MatrixField = std::function<SymMat(Vec)>;

namespace detail {

// The x-slot weight must vanish on all non-interior nodes, else the stencil
// quadrature cannot see its full support.
template <typename XWeight>
void check_support(const SmoothGridFunction& v, XWeight&& xw) {
  for (int i = 0; i < v.nx; ++i) {
    for (int j = 0; j < v.ny; ++j) {
      if (!v.interior(i, j) && std::abs(xw(v.node(i, j))) > 0.0) {
        fail(errc::support_exceeds_grid, "weight support exceeds the grid interior");
      }
    }
  }
}

}  // namespace detail

// Midpoint-rule quadrature of zeta3(v, x, grad v) e_{n-i}(stencil Hessian).
inline double smooth_valuation_quad(const TestFunction3& zeta3, int i,
                                    const SmoothGridFunction& v) {
  require(i >= 0 && i <= v.dim, errc::invalid_argument, "smooth_valuation_quad: bad index");
  if (zeta3.x_slot) detail::check_support(v, zeta3.x_slot);
  double hn = v.dim == 2 ? v.h * v.h : v.h;
  double acc = 0.0;
  for (int a = 1; a <= v.nx - 2; ++a) {
    for (int b = (v.dim == 2 ? 1 : 0); b <= (v.dim == 2 ? v.ny - 2 : 0); ++b) {
      Vec x = v.node(a, b);
      double w = zeta3(v.value(a, b), x, v.gradient(a, b));
      if (w == 0.0) continue;
      acc += w * v.hessian(a, b).elementary_symmetric(v.dim - i) * hn;
    }
  }
  return acc;
}

// Quadrature of zeta(x) D(Hess v [i], A_1(x), ..., A_{n-i}(x)).
inline double alesker_valuation_quad(const TestFunction& zeta, int i,
                                     const std::vector<MatrixField>& fields,
                                     const SmoothGridFunction& v) {
  require(i >= 1 && i <= v.dim, errc::invalid_argument, "alesker_valuation_quad: bad index");
  require(static_cast<int>(fields.size()) + i == v.dim, errc::arity_mismatch,
          "alesker_valuation_quad: i + #fields must equal n");
  detail::check_support(v, zeta);
  double hn = v.dim == 2 ? v.h * v.h : v.h;
  double acc = 0.0;
  for (int a = 1; a <= v.nx - 2; ++a) {
    for (int b = (v.dim == 2 ? 1 : 0); b <= (v.dim == 2 ? v.ny - 2 : 0); ++b) {
      Vec x = v.node(a, b);
      double w = zeta(x);
      if (w == 0.0) continue;
      std::vector<SymMat> slots(static_cast<std::size_t>(i), v.hessian(a, b));
      for (const MatrixField& f : fields) slots.push_back(f(x));
      acc += w * mixed_discriminant(slots) * hn;
    }
  }
  return acc;
}

// Literal quadrature of the displayed counterexample integrand
// e^{v - <grad v, x>} eta(x) det(Hess v).
inline double counterexample_eval(const TestFunction& eta, const SmoothGridFunction& v) {
  detail::check_support(v, eta);
  double hn = v.dim == 2 ? v.h * v.h : v.h;
  double acc = 0.0;
  for (int a = 1; a <= v.nx - 2; ++a) {
    for (int b = (v.dim == 2 ? 1 : 0); b <= (v.dim == 2 ? v.ny - 2 : 0); ++b) {
      Vec x = v.node(a, b);
      double w = eta(x);
      if (w == 0.0) continue;
      Vec g = v.gradient(a, b);
      acc += std::exp(v.value(a, b) - dot(g, x)) * w * v.hessian(a, b).det() * hn;
    }
  }
  return acc;
}

// Same valuation with the exponent negated, e^{<grad v, x> - v}: the exponent
// is then the conjugate value v*(grad v(x)). This is the convention under
// which scaling the quadratic argument produces the super-polynomial growth
// displayed for the counterexample.
inline double counterexample_eval_conjugate(const TestFunction& eta,
                                            const SmoothGridFunction& v) {
  detail::check_support(v, eta);
  double hn = v.dim == 2 ? v.h * v.h : v.h;
  double acc = 0.0;
  for (int a = 1; a <= v.nx - 2; ++a) {
    for (int b = (v.dim == 2 ? 1 : 0); b <= (v.dim == 2 ? v.ny - 2 : 0); ++b) {
      Vec x = v.node(a, b);
      double w = eta(x);
      if (w == 0.0) continue;
      Vec g = v.gradient(a, b);
      acc += std::exp(dot(g, x) - v.value(a, b)) * w * v.hessian(a, b).det() * hn;
    }
  }
  return acc;
}

}  // namespace epival

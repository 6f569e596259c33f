#pragma once

// Piecewise-affine convex function calculus on R^1 and R^2.
//
// Two exact representations, exchanged by Legendre conjugation:
//   MaxAffine  v = max_i <a_i, x> + b_i        (finite-valued, pieces essential)
//   CellPA     u = piece_i on cell P_i, +inf outside the bounded domain
//
// The conjugate of a MaxAffine is the CellPA whose cell structure is the
// regular subdivision induced by the lower hull of the lifted points
// (a_i, -b_i); the conjugate of a CellPA is the max over subdivision vertices
// x_v of <x_v, y> - u(x_v). Both directions are exact.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "epival/error.hpp"
#include "epival/geometry.hpp"

namespace epival {

inline constexpr double kPruneTol = 1e-10;

struct Affine {
  Vec slope;
  double intercept = 0.0;

  double operator()(const Vec& x) const { return dot(slope, x) + intercept; }
};

inline bool affine_approx(const Affine& a, const Affine& b, double tol = 1e-9) {
  return approx(a.slope, b.slope, tol) && std::abs(a.intercept - b.intercept) <= tol;
}

// Finite-valued PA convex function; pieces are pruned to the essential set on
// construction and kept in lexicographic order.
struct MaxAffine {
  int dim = 1;
  std::vector<Affine> pieces;

  double operator()(const Vec& x) const {
    double v = -kInf;
    for (const Affine& w : pieces) v = std::max(v, w(x));
    return v;
  }
};

// Super-coercive PA convex function: affine pieces over a polytopal partition
// of a bounded domain, +inf outside.
struct CellPA {
  int dim = 1;
  Subdivision sub;
  std::vector<Affine> pieces;  // one per cell
  Polyhedron dom;

  double operator()(const Vec& x) const {
    for (std::size_t i = 0; i < sub.cells.size(); ++i) {
      if (sub.cells[i].poly.contains(x)) return pieces[i](x);
    }
    return kInf;
  }

  std::size_t cell_count() const { return sub.cells.size(); }
};

// Epigraph translation data: u -> u(. - translation) + shift.
struct VerticalShiftTag {
  double shift = 0.0;
  Vec translation;
};

// Certificate that the cells and pieces assemble to a convex function: every
// piece is a global minorant, i.e. w_j <= w_i on cell i for all j. Returns the
// worst violation (<= 0 means certified up to roundoff).
inline double convexity_defect(const CellPA& u) {
  double worst = -kInf;
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    for (const Vec& v : u.sub.cells[i].poly.vertices) {
      double wi = u.pieces[i](v);
      for (std::size_t j = 0; j < u.pieces.size(); ++j) {
        worst = std::max(worst, u.pieces[j](v) - wi);
      }
    }
  }
  return worst;
}

namespace detail {

inline double value_scale(const CellPA& u) {
  double s = 1.0;
  for (const Affine& w : u.pieces) s = std::max({s, std::abs(w.intercept), norm(w.slope)});
  for (const SubCell& c : u.sub.cells)
    for (const Vec& v : c.poly.vertices) s = std::max({s, std::abs(v.x), std::abs(v.y)});
  return s;
}

}  // namespace detail

// Assembles a CellPA and certifies global convexity; cells of lower dimension
// than the domain carrier are dropped unless the domain itself is degenerate.
inline CellPA make_cell_pa(int dim, std::vector<std::pair<Polyhedron, Affine>> parts,
                           bool validate = true) {
  require(!parts.empty(), errc::empty_input, "make_cell_pa: no cells");
  CellPA u;
  u.dim = dim;
  int top = -1;
  for (const auto& [poly, piece] : parts) top = std::max(top, poly.affine_dim());
  for (auto& [poly, piece] : parts) {
    if (poly.is_empty() || poly.affine_dim() < top) continue;
    SubCell c;
    c.poly = poly;
    c.grad = piece.slope;
    c.offset = piece.intercept;
    u.sub.cells.push_back(c);
    u.pieces.push_back(piece);
  }
  require(!u.sub.cells.empty(), errc::empty_input, "make_cell_pa: all cells degenerate");
  u.sub.dim = dim;
  u.dom = u.sub.domain();
  if (validate) {
    double defect = convexity_defect(u);
    require(defect <= 1e-7 * detail::value_scale(u), errc::invalid_argument,
            "make_cell_pa: cells do not assemble to a convex function");
  }
  return u;
}

inline CellPA affine_plus_indicator(const Affine& w, const Polyhedron& k) {
  require(!k.is_empty(), errc::empty_input, "affine_plus_indicator: empty body");
  require(k.is_bounded(), errc::unbounded, "affine_plus_indicator: unbounded body");
  return make_cell_pa(k.dim, {{k, w}}, false);
}

inline CellPA indicator(const Polyhedron& k) { return affine_plus_indicator({{0, 0}, 0.0}, k); }

// I_{{0}}, the unit of epi-multiplication at lambda = 0.
inline CellPA zero_indicator(int dim) {
  return make_cell_pa(dim, {{Polyhedron::point(dim, {0, 0}), Affine{{0, 0}, 0.0}}}, false);
}

// Drops inessential pieces: a piece survives iff its lifted point (a_i, -b_i)
// is a vertex of some cell of the lower hull, i.e. the piece strictly wins
// somewhere. Result is sorted lexicographically.
inline MaxAffine prune(const MaxAffine& v) {
  require(!v.pieces.empty(), errc::empty_input, "prune: no pieces");
  std::vector<Vec> pts;
  std::vector<double> hts;
  for (const Affine& w : v.pieces) {
    pts.push_back(w.slope);
    hts.push_back(-w.intercept);
  }
  LiftedPointSet lifted = LiftedPointSet::make(v.dim, pts, hts);
  Subdivision sub = lower_hull(lifted);
  std::vector<bool> essential(lifted.points.size(), false);
  for (const SubCell& c : sub.cells) {
    for (int g : c.gens) {
      for (const Vec& vert : c.poly.vertices) {
        if (approx(lifted.points[g], vert, kPruneTol * 10)) essential[g] = true;
      }
    }
  }
  MaxAffine out;
  out.dim = v.dim;
  for (std::size_t i = 0; i < lifted.points.size(); ++i) {
    if (essential[i]) out.pieces.push_back({lifted.points[i], -lifted.heights[i]});
  }
  std::sort(out.pieces.begin(), out.pieces.end(), [](const Affine& a, const Affine& b) {
    if (a.slope.x != b.slope.x) return a.slope.x < b.slope.x;
    if (a.slope.y != b.slope.y) return a.slope.y < b.slope.y;
    return a.intercept < b.intercept;
  });
  return out;
}

inline MaxAffine max_affine(int dim, std::vector<Affine> pieces) {
  MaxAffine v;
  v.dim = dim;
  v.pieces = std::move(pieces);
  return prune(v);
}

// v* for a max-affine v: the CellPA over conv{a_i} induced by the lower hull
// of (a_i, -b_i); on the cell generated by S the value interpolates -b_i.
inline CellPA conjugate(const MaxAffine& v) {
  require(v.dim == 1 || v.dim == 2, errc::dimension_unsupported, "conjugate: dim must be 1 or 2");
  std::vector<Vec> pts;
  std::vector<double> hts;
  for (const Affine& w : v.pieces) {
    pts.push_back(w.slope);
    hts.push_back(-w.intercept);
  }
  LiftedPointSet lifted = LiftedPointSet::make(v.dim, pts, hts);
  CellPA u;
  u.dim = v.dim;
  u.sub = lower_hull(lifted);
  for (const SubCell& c : u.sub.cells) u.pieces.push_back({c.grad, c.offset});
  u.dom = u.sub.domain();
  return u;
}

// u* for a cell PA u: the sup over the (compact) domain is attained at
// subdivision vertices, so u* = max_v <x_v, y> - u(x_v), pruned.
inline MaxAffine conjugate(const CellPA& u) {
  require(u.dim == 1 || u.dim == 2, errc::dimension_unsupported, "conjugate: dim must be 1 or 2");
  std::vector<Affine> pieces;
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    for (const Vec& v : u.sub.cells[i].poly.vertices) {
      pieces.push_back({v, -u.pieces[i](v)});
    }
  }
  return max_affine(u.dim, std::move(pieces));
}

// lambda epi-multiplication: epigraph scaled by lambda; slopes unchanged,
// intercepts and cells scale. lambda = 0 gives the indicator of {0}.
inline CellPA epi_scale(const CellPA& u, double lambda) {
  require(lambda >= 0.0, errc::negative_scale, "epi_scale: negative factor");
  if (lambda == 0.0) return zero_indicator(u.dim);
  std::vector<std::pair<Polyhedron, Affine>> parts;
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    parts.push_back({u.sub.cells[i].poly.scale(lambda),
                     Affine{u.pieces[i].slope, lambda * u.pieces[i].intercept}});
  }
  return make_cell_pa(u.dim, std::move(parts), false);
}

// Pointwise scalar multiple lambda * v (the conjugate image of epi_scale).
inline MaxAffine scale_values(const MaxAffine& v, double lambda) {
  require(lambda >= 0.0, errc::negative_scale, "scale_values: negative factor");
  if (lambda == 0.0) return max_affine(v.dim, {Affine{{0, 0}, 0.0}});
  std::vector<Affine> pieces;
  for (const Affine& w : v.pieces) pieces.push_back({w.slope * lambda, w.intercept * lambda});
  return max_affine(v.dim, std::move(pieces));
}

// Pointwise sum of finite PA convex functions: pairwise piece sums, pruned.
inline MaxAffine sum(const MaxAffine& f, const MaxAffine& g) {
  require(f.dim == g.dim, errc::dimension_mismatch, "sum: dimension mismatch");
  std::vector<Affine> pieces;
  pieces.reserve(f.pieces.size() * g.pieces.size());
  for (const Affine& a : f.pieces)
    for (const Affine& b : g.pieces) pieces.push_back({a.slope + b.slope, a.intercept + b.intercept});
  return max_affine(f.dim, std::move(pieces));
}

inline MaxAffine add_affine(const MaxAffine& f, const Affine& ell) {
  std::vector<Affine> pieces;
  for (const Affine& w : f.pieces)
    pieces.push_back({w.slope + ell.slope, w.intercept + ell.intercept});
  return max_affine(f.dim, std::move(pieces));
}

// Weighted inf-convolution of cell PA functions, computed through conjugates:
// (l1 [] u1 [] ... [] lk [] uk)* = l1 u1* + ... + lk uk*. The resulting domain
// is the Minkowski sum of the scaled domains.
inline CellPA inf_convolve(const std::vector<double>& weights, const std::vector<CellPA>& inputs) {
  require(!inputs.empty(), errc::empty_input, "inf_convolve: no inputs");
  require(weights.size() == inputs.size(), errc::arity_mismatch,
          "inf_convolve: weights/inputs mismatch");
  int dim = inputs[0].dim;
  MaxAffine acc;
  bool first = true;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    require(inputs[i].dim == dim, errc::dimension_mismatch, "inf_convolve: dimension mismatch");
    require(weights[i] > 0.0, errc::invalid_argument, "inf_convolve: weights must be positive");
    MaxAffine vi = scale_values(conjugate(inputs[i]), weights[i]);
    acc = first ? vi : sum(acc, vi);
    first = false;
  }
  return conjugate(acc);
}

inline MaxAffine pointwise_max(const MaxAffine& f, const MaxAffine& g) {
  require(f.dim == g.dim, errc::dimension_mismatch, "pointwise_max: dimension mismatch");
  std::vector<Affine> pieces = f.pieces;
  pieces.insert(pieces.end(), g.pieces.begin(), g.pieces.end());
  return max_affine(f.dim, std::move(pieces));
}

namespace detail {

// Splits R (full-dimensional) between two pieces; appends the sides where
// each piece wins.
inline void split_by_winner(const Polyhedron& r, const Affine& wf, const Affine& wg,
                            std::vector<std::pair<Polyhedron, Affine>>& out, bool want_max) {
  double lo = kInf, hi = -kInf;
  for (const Vec& v : r.vertices) {
    double d = wf(v) - wg(v);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  double tol = 1e-12;
  const Affine& big = want_max ? wf : wg;    // piece kept where wf >= wg
  const Affine& small = want_max ? wg : wf;  // piece kept where wf <= wg
  if (lo >= -tol) {
    out.push_back({r, big});
    return;
  }
  if (hi <= tol) {
    out.push_back({r, small});
    return;
  }
  Vec nrm = wg.slope - wf.slope;  // wf - wg decreases along nrm
  double nn = norm(nrm);
  Halfspace fg_side{nrm * (1.0 / nn), (wf.intercept - wg.intercept) / nn};  // { wf >= wg }
  std::vector<Vec> side1 = detail::clip_loop(r.vertices, fg_side);
  Halfspace gf_side{fg_side.normal * -1.0, -fg_side.offset};
  std::vector<Vec> side2 = detail::clip_loop(r.vertices, gf_side);
  if (side1.size() >= 2) out.push_back({Polyhedron::from_points(r.dim, side1), big});
  if (side2.size() >= 2) out.push_back({Polyhedron::from_points(r.dim, side2), small});
}

// Max or min of two cell PA functions restricted to a degenerate (point or
// segment) domain D.
inline CellPA lattice_on_degenerate(const CellPA& f, const CellPA& g, const Polyhedron& d,
                                    bool want_max) {
  auto active = [](const CellPA& u, const Vec& x) -> const Affine& {
    for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
      if (u.sub.cells[i].poly.contains(x, 1e-7)) return u.pieces[i];
    }
    fail(errc::outside_domain, "degenerate lattice: point outside domain");
  };
  if (d.affine_dim() == 0) {
    Vec p = d.vertices[0];
    const Affine& wf = active(f, p);
    const Affine& wg = active(g, p);
    bool f_wins = want_max ? wf(p) >= wg(p) : wf(p) <= wg(p);
    return make_cell_pa(f.dim, {{d, f_wins ? wf : wg}}, false);
  }
  Vec a = d.vertices.front(), b = d.vertices.back();
  Vec dir = normalized(b - a);
  double len = dist(a, b);
  std::vector<double> cuts = {0.0, len};
  auto add_cell_cuts = [&](const CellPA& u) {
    for (const SubCell& c : u.sub.cells) {
      std::vector<Vec> seg = {a, b};
      for (const Halfspace& h : c.poly.halfspaces) seg = detail::clip_loop(seg, h);
      for (const Vec& v : seg) cuts.push_back(std::clamp(dot(v - a, dir), 0.0, len));
    }
  };
  add_cell_cuts(f);
  add_cell_cuts(g);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double s, double t) { return std::abs(s - t) <= 1e-9; }),
             cuts.end());
  // insert piece-crossing cuts
  std::vector<double> all = cuts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Vec mid = a + dir * (0.5 * (cuts[i] + cuts[i + 1]));
    const Affine& wf = active(f, mid);
    const Affine& wg = active(g, mid);
    double d0 = wf(a + dir * cuts[i]) - wg(a + dir * cuts[i]);
    double d1 = wf(a + dir * cuts[i + 1]) - wg(a + dir * cuts[i + 1]);
    if ((d0 < -1e-12 && d1 > 1e-12) || (d0 > 1e-12 && d1 < -1e-12)) {
      all.push_back(cuts[i] + (cuts[i + 1] - cuts[i]) * d0 / (d0 - d1));
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end(),
                        [](double s, double t) { return std::abs(s - t) <= 1e-9; }),
            all.end());
  std::vector<std::pair<Polyhedron, Affine>> parts;
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    Vec pa = a + dir * all[i], pb = a + dir * all[i + 1];
    Vec mid = a + dir * (0.5 * (all[i] + all[i + 1]));
    const Affine& wf = active(f, mid);
    const Affine& wg = active(g, mid);
    bool f_wins = want_max ? wf(mid) >= wg(mid) : wf(mid) <= wg(mid);
    parts.push_back({Polyhedron::segment(f.dim, pa, pb), f_wins ? wf : wg});
  }
  if (parts.empty()) {
    const Affine& wf = active(f, a);
    const Affine& wg = active(g, a);
    bool f_wins = want_max ? wf(a) >= wg(a) : wf(a) <= wg(a);
    parts.push_back({d, f_wins ? wf : wg});
  }
  return make_cell_pa(f.dim, std::move(parts), false);
}

}  // namespace detail

// Pointwise max of two cell PA functions on the intersection of their domains.
inline CellPA pointwise_max(const CellPA& f, const CellPA& g) {
  require(f.dim == g.dim, errc::dimension_mismatch, "pointwise_max: dimension mismatch");
  Polyhedron d = intersect(f.dom, g.dom);
  require(!d.is_empty(), errc::empty_domain, "pointwise_max: disjoint domains");
  if (d.affine_dim() < f.dim) return detail::lattice_on_degenerate(f, g, d, true);
  std::vector<std::pair<Polyhedron, Affine>> parts;
  for (std::size_t i = 0; i < f.sub.cells.size(); ++i) {
    for (std::size_t j = 0; j < g.sub.cells.size(); ++j) {
      Polyhedron r = intersect(f.sub.cells[i].poly, g.sub.cells[j].poly);
      if (r.is_empty() || r.affine_dim() < f.dim) continue;
      detail::split_by_winner(r, f.pieces[i], g.pieces[j], parts, true);
    }
  }
  return make_cell_pa(f.dim, std::move(parts), false);
}

namespace detail {

// Convex chunks of p minus the interior of q (successive halfspace cuts).
inline std::vector<Polyhedron> subtract(const Polyhedron& p, const Polyhedron& q) {
  std::vector<Polyhedron> out;
  Polyhedron rest = p;
  for (const Halfspace& h : q.halfspaces) {
    Halfspace flip{h.normal * -1.0, -h.offset};
    Polyhedron chunk = intersect(rest, Polyhedron::from_halfspaces(p.dim, {flip}));
    if (!chunk.is_empty() && chunk.affine_dim() == p.dim) out.push_back(chunk);
    rest = intersect(rest, Polyhedron::from_halfspaces(p.dim, {h}));
    if (rest.is_empty()) break;
  }
  return out;
}

}  // namespace detail

// Pointwise min of two cell PA functions if the result is convex, otherwise
// nullopt. The domain of a convex min is the (convex) union of the domains.
inline std::optional<CellPA> guarded_min(const CellPA& f, const CellPA& g) {
  require(f.dim == g.dim, errc::dimension_mismatch, "guarded_min: dimension mismatch");
  int n = f.dim;
  bool f_full = f.dom.affine_dim() == n;
  bool g_full = g.dom.affine_dim() == n;
  if (f_full != g_full || (!f_full && !g_full)) {
    // a thin domain can only merge by lying inside the other domain with the
    // thin function dominating there (then min == the full function), or by
    // both being collinear segments; anything else breaks convexity
    const CellPA& full = f_full ? f : g;
    const CellPA& thin = f_full ? g : f;
    if (!f_full && !g_full) {
      Polyhedron hull = convex_hull_of(f.dom, g.dom);
      if (hull.affine_dim() < n) {
        return detail::lattice_on_degenerate(f, g, hull, false);  // may still be non-convex
      }
      return std::nullopt;
    }
    for (const Vec& v : thin.dom.vertices) {
      if (!full.dom.contains(v, 1e-7)) return std::nullopt;
    }
    // need thin >= full on the thin domain
    CellPA probe = detail::lattice_on_degenerate(full, thin, thin.dom, false);
    for (const SubCell& c : probe.sub.cells) {
      for (const Vec& v : c.poly.vertices) {
        if (thin(v) < full(v) - 1e-9) return std::nullopt;
      }
    }
    return full;
  }

  std::vector<std::pair<Polyhedron, Affine>> parts;
  for (std::size_t i = 0; i < f.sub.cells.size(); ++i) {
    for (std::size_t j = 0; j < g.sub.cells.size(); ++j) {
      Polyhedron r = intersect(f.sub.cells[i].poly, g.sub.cells[j].poly);
      if (r.is_empty() || r.affine_dim() < n) continue;
      detail::split_by_winner(r, f.pieces[i], g.pieces[j], parts, false);
    }
  }
  for (std::size_t i = 0; i < f.sub.cells.size(); ++i) {
    for (Polyhedron& chunk : detail::subtract(f.sub.cells[i].poly, g.dom)) {
      parts.push_back({std::move(chunk), f.pieces[i]});
    }
  }
  for (std::size_t j = 0; j < g.sub.cells.size(); ++j) {
    for (Polyhedron& chunk : detail::subtract(g.sub.cells[j].poly, f.dom)) {
      parts.push_back({std::move(chunk), g.pieces[j]});
    }
  }
  if (parts.empty()) return std::nullopt;

  CellPA out;
  try {
    out = make_cell_pa(n, parts, false);
  } catch (const Error&) {
    return std::nullopt;
  }
  // union must be convex: cell volumes must fill the hull
  double cells_vol = 0.0;
  for (const SubCell& c : out.sub.cells) cells_vol += c.poly.volume();
  double hull_vol = out.dom.volume();
  double scale = std::max(1.0, hull_vol);
  if (std::abs(hull_vol - cells_vol) > 1e-8 * scale) return std::nullopt;
  if (convexity_defect(out) > 1e-8 * detail::value_scale(out)) return std::nullopt;
  return out;
}

// Pointwise min of two max-affine functions if convex, otherwise nullopt.
// Convexity is decided through the convex envelope (f* v g*)*: the min is
// convex iff it coincides with its envelope.
inline std::optional<MaxAffine> guarded_min(const MaxAffine& f, const MaxAffine& g) {
  require(f.dim == g.dim, errc::dimension_mismatch, "guarded_min: dimension mismatch");
  CellPA fc = conjugate(f);
  CellPA gc = conjugate(g);
  Polyhedron d = intersect(fc.dom, gc.dom);
  if (d.is_empty()) return std::nullopt;  // min has no affine minorant
  // domains of the conjugates must have convex union, else the recession
  // behavior of min(f, g) already differs from any convex function
  Polyhedron hull = convex_hull_of(fc.dom, gc.dom);
  double union_vol = fc.dom.volume() + gc.dom.volume() - intersect(fc.dom, gc.dom).volume();
  if (hull.affine_dim() == f.dim && std::abs(hull.volume() - union_vol) > 1e-8) {
    return std::nullopt;
  }
  MaxAffine env = conjugate(pointwise_max(fc, gc));
  // env <= min(f, g) always; equality (= convexity) is checked on the vertex
  // lattice of the piece arrangement
  std::vector<Affine> all = f.pieces;
  all.insert(all.end(), g.pieces.begin(), g.pieces.end());
  all.insert(all.end(), env.pieces.begin(), env.pieces.end());
  std::vector<Vec> probes = {{0, 0}};
  if (f.dim == 1) {
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        double da = all[i].slope.x - all[j].slope.x;
        if (std::abs(da) <= 1e-12) continue;
        probes.push_back({(all[j].intercept - all[i].intercept) / da});
      }
    }
  } else {
    std::vector<Halfspace> lines;
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        Vec nrm = all[i].slope - all[j].slope;
        if (norm(nrm) <= 1e-12) continue;
        lines.push_back({nrm, all[j].intercept - all[i].intercept});
      }
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        double det = cross(lines[i].normal, lines[j].normal);
        if (std::abs(det) <= 1e-12) continue;
        probes.push_back(
            {(lines[i].offset * lines[j].normal.y - lines[j].offset * lines[i].normal.y) / det,
             (lines[i].normal.x * lines[j].offset - lines[j].normal.x * lines[i].offset) / det});
      }
    }
  }
  for (const Vec& p : probes) {
    double m = std::min(f(p), g(p));
    if (m > env(p) + 1e-8 * (1.0 + std::abs(m))) return std::nullopt;
  }
  return env;
}

// Epigraph translation by (translation, shift).
inline CellPA translate(const CellPA& u, const VerticalShiftTag& tag) {
  std::vector<std::pair<Polyhedron, Affine>> parts;
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    const Affine& w = u.pieces[i];
    parts.push_back({u.sub.cells[i].poly.translate(tag.translation),
                     Affine{w.slope, w.intercept - dot(w.slope, tag.translation) + tag.shift}});
  }
  return make_cell_pa(u.dim, std::move(parts), false);
}

namespace detail {

// Outward normal generators of the domain's normal cone at x (empty when x is
// interior). Handles thin domains.
inline std::vector<Vec> normal_cone_dirs(const Polyhedron& dom, const Vec& x) {
  std::vector<Vec> dirs;
  int ad = dom.affine_dim();
  if (dom.dim == 1) {
    bool at_lo = std::abs(x.x - dom.vertices.front().x) <= kGeomTol;
    bool at_hi = std::abs(x.x - dom.vertices.back().x) <= kGeomTol;
    if (ad == 0) return {{-1, 0}, {1, 0}};
    if (at_lo) dirs.push_back({-1, 0});
    if (at_hi) dirs.push_back({1, 0});
    return dirs;
  }
  if (ad == 0) return {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  if (ad == 1) {
    Vec a = dom.vertices.front(), b = dom.vertices.back();
    Vec dir = normalized(b - a);
    dirs.push_back(perp(dir));
    dirs.push_back(-perp(dir));
    if (approx(x, a)) dirs.push_back(-dir);
    if (approx(x, b)) dirs.push_back(dir);
    return dirs;
  }
  const auto& v = dom.vertices;
  std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec& a = v[i];
    const Vec& b = v[(i + 1) % m];
    if (point_segment_dist(x, a, b) <= kGeomTol) {
      dirs.push_back(normalized(Vec{(b - a).y, -(b - a).x}));
    }
  }
  return dirs;
}

}  // namespace detail

// Subdifferential of u at x: the hull of the slopes of all incident cells plus
// the normal cone of the domain when x is on the boundary. May be unbounded.
inline Polyhedron subdifferential(const CellPA& u, const Vec& x) {
  require(u.dom.contains(x, 1e-7), errc::outside_domain, "subdifferential: x outside dom(u)");
  std::vector<Vec> slopes;
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    if (u.sub.cells[i].poly.contains(x, 1e-7)) slopes.push_back(u.pieces[i].slope);
  }
  return Polyhedron::from_vrep(u.dim, slopes, detail::normal_cone_dirs(u.dom, x));
}

// Max of tangent planes of a smooth convex f at the probe points; a PA
// minorant interpolating f at the probes. Gradients by central differences
// unless supplied.
inline MaxAffine sample_approx(const std::function<double(Vec)>& f, const std::vector<Vec>& probes,
                               int dim, const std::function<Vec(Vec)>& grad = nullptr,
                               double h_fd = 1e-5) {
  require(!probes.empty(), errc::empty_input, "sample_approx: no probes");
  std::vector<Affine> pieces;
  for (const Vec& p : probes) {
    Vec g;
    if (grad) {
      g = grad(p);
    } else {
      g.x = (f({p.x + h_fd, p.y}) - f({p.x - h_fd, p.y})) / (2 * h_fd);
      if (dim == 2) g.y = (f({p.x, p.y + h_fd}) - f({p.x, p.y - h_fd})) / (2 * h_fd);
    }
    pieces.push_back({g, f(p) - dot(g, p)});
  }
  return max_affine(dim, std::move(pieces));
}

// { u <= t } for a cell PA function; empty for t below the minimum.
inline Polyhedron sublevel_set(const CellPA& u, double t) {
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    const Affine& w = u.pieces[i];
    std::vector<Vec> loop = u.sub.cells[i].poly.vertices;
    double ns = norm(w.slope);
    if (ns > kGeomTol) {
      loop = detail::clip_loop(loop, {w.slope * (1.0 / ns), (t - w.intercept) / ns});
    } else if (w.intercept > t + kGeomTol) {
      loop.clear();
    }
    pts.insert(pts.end(), loop.begin(), loop.end());
  }
  if (pts.empty()) return Polyhedron::empty_set(u.dim);
  return Polyhedron::from_points(u.dim, pts);
}

// { v <= t } for a max-affine function; a polyhedron, unbounded when v is not
// coercive.
inline Polyhedron sublevel_set(const MaxAffine& v, double t) {
  std::vector<Halfspace> hs;
  for (const Affine& w : v.pieces) {
    double ns = norm(w.slope);
    if (ns <= kGeomTol) {
      if (w.intercept > t + kGeomTol) return Polyhedron::empty_set(v.dim);
      continue;
    }
    hs.push_back({w.slope * (1.0 / ns), (t - w.intercept) / ns});
  }
  if (hs.empty()) fail(errc::unbounded, "sublevel_set: constant function has unbounded level set");
  return Polyhedron::from_halfspaces(v.dim, hs);
}

inline double min_value(const CellPA& u) {
  double m = kInf;
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    for (const Vec& v : u.sub.cells[i].poly.vertices) m = std::min(m, u.pieces[i](v));
  }
  return m;
}

struct EpiDistanceReport {
  std::vector<double> t_grid;
  std::vector<std::vector<double>> distances;  // [k][t]
  std::vector<bool> t_near_min;                // flagged t values
};

// Hausdorff distances of sublevel sets along a sequence: the epi-convergence
// diagnostic of the sublevel-set characterization.
inline EpiDistanceReport epi_distance_report(const std::vector<CellPA>& seq, const CellPA& limit,
                                             const std::vector<double>& t_grid) {
  EpiDistanceReport rep;
  rep.t_grid = t_grid;
  double m = min_value(limit);
  for (double t : t_grid) rep.t_near_min.push_back(std::abs(t - m) <= kGeomTol);
  for (const CellPA& u : seq) {
    std::vector<double> row;
    for (double t : t_grid) {
      Polyhedron a = sublevel_set(u, t);
      Polyhedron b = sublevel_set(limit, t);
      if (a.is_empty() && b.is_empty()) {
        row.push_back(0.0);
      } else if (a.is_empty() || b.is_empty()) {
        row.push_back(kInf);
      } else {
        row.push_back(hausdorff_distance(a, b));
      }
    }
    rep.distances.push_back(row);
  }
  return rep;
}

// Restriction of a finite PA function to a polytope: cells are the winner
// regions of the pieces clipped to P.
inline CellPA restrict_to(const MaxAffine& v, const Polyhedron& p) {
  require(!p.is_empty(), errc::empty_input, "restrict_to: empty polytope");
  require(p.is_bounded(), errc::unbounded, "restrict_to: unbounded polytope");
  int top = p.affine_dim();
  if (top == 0) {
    Vec x = p.vertices[0];
    double val = v(x);
    for (const Affine& w : v.pieces) {
      if (std::abs(w(x) - val) <= 1e-9 * (1.0 + std::abs(val))) {
        return make_cell_pa(v.dim, {{p, w}}, false);
      }
    }
  }
  std::vector<std::pair<Polyhedron, Affine>> parts;
  for (std::size_t i = 0; i < v.pieces.size(); ++i) {
    std::vector<Halfspace> hs;
    for (std::size_t j = 0; j < v.pieces.size(); ++j) {
      if (i == j) continue;
      Vec nrm = v.pieces[j].slope - v.pieces[i].slope;
      double nn = norm(nrm);
      if (nn <= kGeomTol) continue;
      hs.push_back({nrm * (1.0 / nn), (v.pieces[i].intercept - v.pieces[j].intercept) / nn});
    }
    Polyhedron region = p;
    std::vector<Vec> loop = p.vertices;
    if (p.dim == 1) {
      region = intersect(p, Polyhedron::from_halfspaces(1, hs));
    } else {
      for (const Halfspace& h : hs) loop = detail::clip_loop(loop, h);
      region = loop.empty() ? Polyhedron::empty_set(2) : Polyhedron::from_points(2, loop);
    }
    if (region.is_empty() || region.affine_dim() < top) continue;
    parts.push_back({region, v.pieces[i]});
  }
  return make_cell_pa(v.dim, std::move(parts), false);
}

// Canonical-form equality through evaluation on a deterministic probe set
// (domain vertices, cell centroids) plus domain agreement.
inline bool functions_equal(const CellPA& f, const CellPA& g, double tol = 1e-9) {
  if (f.dim != g.dim) return false;
  if (hausdorff_distance(f.dom, g.dom) > 1e-7) return false;
  std::vector<Vec> probes;
  auto add_probes = [&probes](const CellPA& u) {
    for (const SubCell& c : u.sub.cells) {
      Vec centroid{0, 0};
      for (const Vec& v : c.poly.vertices) {
        probes.push_back(v);
        centroid = centroid + v;
      }
      probes.push_back(centroid * (1.0 / static_cast<double>(c.poly.vertices.size())));
    }
  };
  add_probes(f);
  add_probes(g);
  double scale = 1.0;
  for (const Vec& p : probes) {
    double a = f(p), b = g(p);
    if (std::isinf(a) || std::isinf(b)) {
      // boundary roundoff: tolerate one-sided misses only off the common domain
      if (!(f.dom.contains(p, -1e-7) || g.dom.contains(p, -1e-7))) continue;
      return false;
    }
    scale = std::max({scale, std::abs(a), std::abs(b)});
    if (std::abs(a - b) > tol * scale) return false;
  }
  return true;
}

inline bool functions_equal(const MaxAffine& f, const MaxAffine& g, double tol = 1e-9) {
  if (f.dim != g.dim || f.pieces.size() != g.pieces.size()) return false;
  for (std::size_t i = 0; i < f.pieces.size(); ++i) {
    if (!affine_approx(f.pieces[i], g.pieces[i], tol * 10)) return false;
  }
  return true;
}

}  // namespace epival

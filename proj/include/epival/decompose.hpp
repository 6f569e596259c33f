#pragma once

// Homogeneous decomposition of black-box valuations: the Vandermonde system
//   Z(k [] u) = sum_j Z_j(u) k^j,   k = 0..n
// inverted exactly over the rationals gives Z_i(u) = sum_j alpha_ij Z(j [] u).
// Polarization and polynomial fitting realize the multilinear expansion of
// m-homogeneous valuations under inf-convolution.

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "epival/convexfn.hpp"
#include "epival/error.hpp"
#include "epival/valuations.hpp"

namespace epival {

namespace detail {

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  Fraction operator+(const Fraction& o) const { return {num * o.den + o.num * den, den * o.den}; }
  Fraction operator-(const Fraction& o) const { return {num * o.den - o.num * den, den * o.den}; }
  Fraction operator*(const Fraction& o) const { return {num * o.num, den * o.den}; }
  Fraction operator/(const Fraction& o) const {
    require(o.num != 0, errc::rank_deficient, "fraction division by zero");
    return {num * o.den, den * o.num};
  }
  bool is_zero() const { return num == 0; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::int64_t int_pow(std::int64_t k, int j) {
  std::int64_t p = 1;
  for (int t = 0; t < j; ++t) p *= k;
  return p;
}

}  // namespace detail

// Inverse of the integer Vandermonde matrix V_kj = k^j at nodes 0..n, solved
// by exact rational elimination.
struct DecompositionMatrix {
  int n = 0;
  std::vector<std::vector<double>> alpha;  // (n+1) x (n+1)

  double coeff(int i, int j) const {
    return alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
};

inline DecompositionMatrix vandermonde_coeffs(int n) {
  require(n >= 0, errc::invalid_argument, "vandermonde_coeffs: n must be nonnegative");
  require(n <= 6, errc::invalid_argument,
          "vandermonde_coeffs: nodes 0..n with n > 6 are too ill-conditioned");
  using detail::Fraction;
  int s = n + 1;
  std::vector<std::vector<Fraction>> a(static_cast<std::size_t>(s)),
      inv(static_cast<std::size_t>(s));
  for (int k = 0; k < s; ++k) {
    a[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(s));
    inv[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) {
      a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
          Fraction(j == 0 ? 1 : detail::int_pow(k, j));
      inv[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = Fraction(k == j ? 1 : 0);
    }
  }
  // Gauss-Jordan over the rationals
  for (int col = 0; col < s; ++col) {
    int pivot = col;
    while (pivot < s && a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)].is_zero())
      ++pivot;
    require(pivot < s, errc::rank_deficient, "vandermonde_coeffs: singular");
    std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(col)]);
    std::swap(inv[static_cast<std::size_t>(pivot)], inv[static_cast<std::size_t>(col)]);
    Fraction d = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    for (int j = 0; j < s; ++j) {
      a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] =
          a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] / d;
      inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] =
          inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] / d;
    }
    for (int row = 0; row < s; ++row) {
      if (row == col) continue;
      Fraction f = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      if (f.is_zero()) continue;
      for (int j = 0; j < s; ++j) {
        a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] =
            a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -
            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
        inv[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] =
            inv[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -
            f * inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
      }
    }
  }
  DecompositionMatrix m;
  m.n = n;
  m.alpha.resize(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      m.alpha[static_cast<std::size_t>(i)].push_back(
          inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value());
    }
  }
  return m;
}

// Z_i(u) = sum_j alpha_ij Z(j [] u); the row-sum identity at node 1 makes the
// components reconstruct Z(u).
inline std::vector<double> homogeneous_components(const ValuationOracle& z, const CellPA& u,
                                                  int n) {
  DecompositionMatrix m = vandermonde_coeffs(n);
  std::vector<double> jvals;
  for (int j = 0; j <= n; ++j) jvals.push_back(z(epi_scale(u, static_cast<double>(j))));
  std::vector<double> comps(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) comps[static_cast<std::size_t>(i)] += m.coeff(i, j) * jvals[static_cast<std::size_t>(j)];
  }
  return comps;
}

// The i-th component as an oracle of its own.
inline ValuationOracle component_oracle(const ValuationOracle& z, int n, int i) {
  DecompositionMatrix m = vandermonde_coeffs(n);
  ValuationOracle c;
  c.eval = [z, m, n, i](const CellPA& u) {
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) acc += m.coeff(i, j) * z(epi_scale(u, static_cast<double>(j)));
    return acc;
  };
  c.meta = z.meta;
  c.meta.degree = i;
  return c;
}

// Max relative defect of the claim that zi is epi-homogeneous of degree i:
// max over the grid of |zi(lambda [] u) - lambda^i zi(u)| / (1 + |zi(u)|).
inline double verify_homogeneity(const ValuationOracle& zi, int i, const CellPA& u,
                                 const std::vector<double>& lambda_grid) {
  double base = zi(u);
  double worst = 0.0;
  for (double lam : lambda_grid) {
    double got = zi(epi_scale(u, lam));
    worst = std::max(worst, std::abs(got - std::pow(lam, i) * base) / (1.0 + std::abs(base)));
  }
  return worst;
}

// Polarization of an m-homogeneous valuation by signed subset sums under
// inf-convolution: symmetric, and Z-bar(u,...,u) = Z(u).
inline double polarize(const ValuationOracle& z, const std::vector<CellPA>& args) {
  int m = static_cast<int>(args.size());
  require(m >= 1 && m <= 8, errc::arity_mismatch, "polarize: 1..8 arguments");
  double acc = 0.0;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<CellPA> subset;
    std::vector<double> weights;
    int bits = 0;
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) {
        subset.push_back(args[static_cast<std::size_t>(j)]);
        weights.push_back(1.0);
        ++bits;
      }
    }
    double sign = ((m - bits) % 2 == 0) ? 1.0 : -1.0;
    CellPA conv = subset.size() == 1 ? subset[0] : inf_convolve(weights, subset);
    acc += sign * z(conv);
  }
  double fact = 1.0;
  for (int t = 2; t <= m; ++t) fact *= t;
  return acc / fact;
}

struct PolynomialFit {
  int vars = 0;
  int degree = 0;
  std::vector<std::vector<int>> exponents;  // multi-indices, total degree <= m
  std::vector<double> coeffs;
  double residual = 0.0;  // max |fit - sample|

  double coeff_for(const std::vector<int>& e) const {
    for (std::size_t t = 0; t < exponents.size(); ++t) {
      if (exponents[t] == e) return coeffs[t];
    }
    fail(errc::invalid_argument, "coeff_for: unknown multi-index");
  }
};

namespace detail {

inline void enumerate_exponents(int vars, int max_total, std::vector<int>& cur,
                                std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == vars) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int e : cur) used += e;
  for (int e = 0; e + used <= max_total; ++e) {
    cur.push_back(e);
    enumerate_exponents(vars, max_total, cur, out);
    cur.pop_back();
  }
}

// Least squares by Householder QR; throws RankDeficient on a tiny pivot.
inline std::vector<double> lsq(std::vector<std::vector<double>> a, std::vector<double> b) {
  std::size_t rows = a.size();
  std::size_t cols = a[0].size();
  require(rows >= cols, errc::rank_deficient, "lsq: fewer samples than coefficients");
  for (std::size_t c = 0; c < cols; ++c) {
    double nrm = 0.0;
    for (std::size_t r = c; r < rows; ++r) nrm += a[r][c] * a[r][c];
    nrm = std::sqrt(nrm);
    require(nrm > 1e-12, errc::rank_deficient, "lsq: rank-deficient design");
    double alpha = a[c][c] > 0 ? -nrm : nrm;
    std::vector<double> v(rows, 0.0);
    v[c] = a[c][c] - alpha;
    for (std::size_t r = c + 1; r < rows; ++r) v[r] = a[r][c];
    double vtv = 0.0;
    for (std::size_t r = c; r < rows; ++r) vtv += v[r] * v[r];
    if (vtv <= 1e-300) continue;
    for (std::size_t cc = c; cc < cols; ++cc) {
      double dotv = 0.0;
      for (std::size_t r = c; r < rows; ++r) dotv += v[r] * a[r][cc];
      double f = 2.0 * dotv / vtv;
      for (std::size_t r = c; r < rows; ++r) a[r][cc] -= f * v[r];
    }
    double dotb = 0.0;
    for (std::size_t r = c; r < rows; ++r) dotb += v[r] * b[r];
    double f = 2.0 * dotb / vtv;
    for (std::size_t r = c; r < rows; ++r) b[r] -= f * v[r];
  }
  std::vector<double> x(cols, 0.0);
  for (std::size_t c = cols; c-- > 0;) {
    double acc = b[c];
    for (std::size_t cc = c + 1; cc < cols; ++cc) acc -= a[c][cc] * x[cc];
    require(std::abs(a[c][c]) > 1e-12, errc::rank_deficient, "lsq: tiny pivot");
    x[c] = acc / a[c][c];
  }
  return x;
}

}  // namespace detail

// Fits Z(lambda_1 [] u_1 [] ... [] lambda_k [] u_k) as a polynomial of total
// degree m over the tensor grid of positive nodes; the residual is itself the
// polynomiality test.
inline PolynomialFit polynomial_fit(const ValuationOracle& z, const std::vector<CellPA>& args,
                                    const std::vector<double>& lambda_nodes, int m) {
  int k = static_cast<int>(args.size());
  require(k >= 1, errc::empty_input, "polynomial_fit: no arguments");
  std::vector<double> nodes = lambda_nodes;
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  require(static_cast<int>(nodes.size()) >= m + 1, errc::rank_deficient,
          "polynomial_fit: need at least m+1 distinct nodes per variable");
  for (double v : nodes) {
    require(v > 0.0, errc::invalid_argument, "polynomial_fit: nodes must be positive");
  }

  PolynomialFit fit;
  fit.vars = k;
  fit.degree = m;
  std::vector<int> cur;
  detail::enumerate_exponents(k, m, cur, fit.exponents);

  // tensor grid samples
  std::vector<std::vector<double>> design;
  std::vector<double> values;
  std::vector<std::size_t> index(static_cast<std::size_t>(k), 0);
  while (true) {
    std::vector<double> lams;
    for (int v = 0; v < k; ++v) lams.push_back(nodes[index[static_cast<std::size_t>(v)]]);
    CellPA conv = inf_convolve(lams, args);
    values.push_back(z(conv));
    std::vector<double> row;
    for (const auto& e : fit.exponents) {
      double t = 1.0;
      for (int v = 0; v < k; ++v) t *= std::pow(lams[static_cast<std::size_t>(v)],
                                                e[static_cast<std::size_t>(v)]);
      row.push_back(t);
    }
    design.push_back(row);
    int v = 0;
    while (v < k && ++index[static_cast<std::size_t>(v)] == nodes.size()) {
      index[static_cast<std::size_t>(v)] = 0;
      ++v;
    }
    if (v == k) break;
  }

  fit.coeffs = detail::lsq(design, values);
  double worst = 0.0;
  for (std::size_t r = 0; r < design.size(); ++r) {
    double pred = 0.0;
    for (std::size_t t = 0; t < fit.coeffs.size(); ++t) pred += design[r][t] * fit.coeffs[t];
    worst = std::max(worst, std::abs(pred - values[r]));
  }
  fit.residual = worst;
  return fit;
}

inline double multinomial(int m, const std::vector<int>& parts) {
  double acc = 1.0;
  int used = 0;
  for (int p : parts) {
    for (int t = 1; t <= p; ++t) acc *= static_cast<double>(++used) / t;
  }
  return acc;
}

// Mixed valuations extracted from a polynomial fit: Z-bar(u_1[i_1],...) is the
// coefficient of lambda^i divided by the multinomial.
struct MixedValuationTable {
  int m = 0;
  std::vector<std::vector<int>> exponents;  // |i| = m only
  std::vector<double> values;

  double value_for(const std::vector<int>& e) const {
    for (std::size_t t = 0; t < exponents.size(); ++t) {
      if (exponents[t] == e) return values[t];
    }
    fail(errc::invalid_argument, "value_for: unknown multi-index");
  }
};

inline MixedValuationTable mixed_valuations(const PolynomialFit& fit) {
  MixedValuationTable table;
  table.m = fit.degree;
  for (std::size_t t = 0; t < fit.exponents.size(); ++t) {
    int total = 0;
    for (int e : fit.exponents[t]) total += e;
    if (total != fit.degree) continue;
    table.exponents.push_back(fit.exponents[t]);
    table.values.push_back(fit.coeffs[t] / multinomial(fit.degree, fit.exponents[t]));
  }
  return table;
}

// Dual decomposition: scalar multiplication replaces epi-scaling, so
// Z_i(v) = sum_j alpha_ij Z(j v) for dually epi-translation invariant Z.
inline std::vector<double> dual_decompose(const DualValuationOracle& z, const MaxAffine& v,
                                          int n) {
  DecompositionMatrix m = vandermonde_coeffs(n);
  std::vector<double> jvals;
  for (int j = 0; j <= n; ++j) jvals.push_back(z(scale_values(v, static_cast<double>(j))));
  std::vector<double> comps(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) comps[static_cast<std::size_t>(i)] += m.coeff(i, j) * jvals[static_cast<std::size_t>(j)];
  }
  return comps;
}

}  // namespace epival

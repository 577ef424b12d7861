#pragma once

// Continuous families of single-determinant representations of on-shell
// scalar products, built from the coefficients of the linear functional
// relation sum_i K_i S_n(X_i^0) = 0 and its images under x_0 <-> x_l.

#include "sixvertex/lattice.hpp"
#include "sixvertex/numerics.hpp"

#include <string>
#include <vector>

namespace sixvertex {

/// Free variables X, auxiliary x_0 and on-shell roots x^B.
struct EvalPoint {
  std::vector<Complex> X;
  Complex x0{};
  std::vector<Complex> xb;

  std::size_t n() const noexcept { return X.size(); }

  /// (x_0, x_1, ..., x_n)
  std::vector<Complex> all_vars() const { return VariableSet{X, x0}.with_aux(); }
};

inline constexpr double kEvalPoleTol = 1e-8;
/// Systems with a larger condition estimate are treated as singular.
inline constexpr double kMaxSystemCondition = 1e10;

namespace detail {

inline void require_clear(Complex v, double tol, const std::string& what) {
  if (!(std::abs(v) > tol)) throw PoleError("evaluation point too close to pole: " + what);
}

}  // namespace detail

/// Checks that no weight appearing in a denominator of the coefficient,
/// matrix or prefactor formulas vanishes. The check is symmetric in
/// (x_0, X), so it also covers every x_0 <-> x_i exchange.
inline void check_eval_point(const EvalPoint& ep, const ModelParams& p, double tol = kEvalPoleTol) {
  using detail::require_clear;
  if (ep.xb.size() != ep.X.size()) throw DimensionError("EvalPoint: X and xb lengths differ");
  if (ep.X.empty()) throw DimensionError("EvalPoint: n must be at least 1");
  const Complex g = p.gamma;
  const auto ys = ep.all_vars();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      require_clear(weight_b(ys[i] - ys[j]), tol, "b(x_i - x_j)");
      if (p.boundary == Boundary::Open) {
        require_clear(weight_a(ys[i] + ys[j], g), tol, "a(x_i + x_j)");
        require_clear(weight_b(ys[i] + ys[j] + g), tol, "b(x_i + x_j + gamma)");
      }
    }
    for (const auto& r : ep.xb) {
      require_clear(weight_b(ys[i] - r), tol, "b(x - x^B)");
      if (p.boundary == Boundary::Open) {
        require_clear(weight_a(ys[i] + r, g), tol, "a(x + x^B)");
        require_clear(weight_b(ys[i] + r + g), tol, "b(x + x^B + gamma)");
      }
    }
    if (p.boundary == Boundary::Open) {
      require_clear(weight_b(2.0 * ys[i] + g), tol, "b(2x + gamma)");
      require_clear(weight_a(2.0 * ys[i], g), tol, "a(2x)");
      require_clear(weight_a(2.0 * ys[i] + g, g), tol, "a(2x + gamma)");
    }
  }
  if (p.boundary == Boundary::Open) {
    for (std::size_t j = 0; j < ep.xb.size(); ++j) {
      require_clear(weight_b(ep.xb[j] - p.hbar), tol, "b(x^B - hbar)");
      for (std::size_t k = 0; k < j; ++k) require_clear(weight_b(ep.xb[j] + ep.xb[k]), tol, "b(x^B_j + x^B_k)");
    }
  }
}

// ---------------------------------------------------------------------------
// Coefficients, written for an ordered variable list ys = (y_0, y_1..y_n)
// where y_0 plays the role of x_0.

namespace detail {

inline std::vector<Complex> twisted_coefficients(const std::vector<Complex>& ys, const std::vector<Complex>& xb,
                                                 const ModelParams& p) {
  const std::size_t n = ys.size() - 1;
  const Complex g = p.gamma, c = weight_c(g), y0 = ys[0];
  std::vector<Complex> k(n + 1);

  Complex lam_a{1.0}, lam_d{1.0};
  for (const auto& m : p.mu) {
    lam_a *= weight_a(y0 - m, g);
    lam_d *= weight_b(y0 - m);
  }
  Complex pa{1.0}, pab{1.0}, pd{1.0}, pdb{1.0};
  for (std::size_t j = 1; j <= n; ++j) {
    pa *= checked_div(weight_a(ys[j] - y0, g), weight_b(ys[j] - y0), "b(x_k - x_0)");
    pd *= checked_div(weight_a(y0 - ys[j], g), weight_b(y0 - ys[j]), "b(x_0 - x_k)");
    pab *= checked_div(weight_a(xb[j - 1] - y0, g), weight_b(xb[j - 1] - y0), "b(x^B_k - x_0)");
    pdb *= checked_div(weight_a(y0 - xb[j - 1], g), weight_b(y0 - xb[j - 1]), "b(x_0 - x^B_k)");
  }
  k[0] = p.phi1 * lam_a * (pa - pab) + p.phi2 * lam_d * (pd - pdb);

  for (std::size_t i = 1; i <= n; ++i) {
    const Complex yi = ys[i];
    Complex ta = p.phi1 * checked_div(c, weight_b(y0 - yi), "b(x_0 - x_i)");
    Complex td = p.phi2 * checked_div(c, weight_b(yi - y0), "b(x_i - x_0)");
    for (const auto& m : p.mu) {
      ta *= weight_a(yi - m, g);
      td *= weight_b(yi - m);
    }
    for (std::size_t j = 1; j <= n; ++j) {
      if (j == i) continue;
      ta *= checked_div(weight_a(ys[j] - yi, g), weight_b(ys[j] - yi), "b(x_k - x_i)");
      td *= checked_div(weight_a(yi - ys[j], g), weight_b(yi - ys[j]), "b(x_i - x_k)");
    }
    k[i] = ta + td;
  }
  return k;
}

// Pieces of the open coefficients shared between K~_0 and K~_i.
inline Complex open_lambda_a(Complex y, const ModelParams& p) {
  Complex v = weight_b(y + p.h) * weight_b(y - p.hbar);
  for (const auto& m : p.mu) v *= weight_a(y - m, p.gamma) * weight_a(y + m, p.gamma);
  return v;
}

inline Complex open_lambda_d(Complex y, const ModelParams& p) {
  Complex v = weight_a(y - p.h, p.gamma) * weight_a(y + p.hbar, p.gamma);
  for (const auto& m : p.mu) v *= weight_b(y - m) * weight_b(y + m);
  return v;
}

// a(x - y)/b(x - y) * b(x + y)/a(x + y)
inline Complex open_ratio_a(Complex x, Complex y, Complex g) {
  return checked_div(weight_a(x - y, g) * weight_b(x + y), weight_b(x - y) * weight_a(x + y, g),
                     "b(x - y) a(x + y)");
}

// a(y - x)/b(y - x) * a(y + x + gamma)/b(y + x + gamma)
inline Complex open_ratio_d(Complex x, Complex y, Complex g) {
  return checked_div(weight_a(y - x, g) * weight_a(y + x + g, g), weight_b(y - x) * weight_b(y + x + g),
                     "b(y - x) b(y + x + gamma)");
}

inline std::vector<Complex> open_coefficients(const std::vector<Complex>& ys, const std::vector<Complex>& xb,
                                              const ModelParams& p) {
  const std::size_t n = ys.size() - 1;
  const Complex g = p.gamma, c = weight_c(g), y0 = ys[0];
  std::vector<Complex> k(n + 1);

  Complex pa{1.0}, pab{1.0}, pd{1.0}, pdb{1.0};
  for (std::size_t j = 1; j <= n; ++j) {
    pa *= open_ratio_a(ys[j], y0, g);
    pab *= open_ratio_a(xb[j - 1], y0, g);
    pd *= open_ratio_d(ys[j], y0, g);
    pdb *= open_ratio_d(xb[j - 1], y0, g);
  }
  const Complex wa = checked_div(weight_a(2.0 * y0 + g, g), weight_b(2.0 * y0 + g), "b(2x_0 + gamma)");
  const Complex wd = checked_div(weight_b(2.0 * y0), weight_a(2.0 * y0, g), "a(2x_0)");
  k[0] = wa * open_lambda_a(y0, p) * (pa - pab) + wd * open_lambda_d(y0, p) * (pd - pdb);

  for (std::size_t i = 1; i <= n; ++i) {
    const Complex yi = ys[i];
    const Complex pre = checked_div(weight_a(2.0 * y0 + g, g), weight_a(y0 + yi, g), "a(x_0 + x_i)") *
                        checked_div(c, weight_b(y0 - yi), "b(x_0 - x_i)") *
                        checked_div(weight_b(2.0 * yi), weight_a(2.0 * yi, g), "a(2x_i)");
    Complex ta = open_lambda_a(yi, p), td = open_lambda_d(yi, p);
    for (std::size_t j = 1; j <= n; ++j) {
      if (j == i) continue;
      ta *= open_ratio_a(ys[j], yi, g);
      td *= open_ratio_d(ys[j], yi, g);
    }
    k[i] = pre * (ta - td);
  }
  return k;
}

inline std::vector<Complex> coefficients_for(const std::vector<Complex>& ys, const std::vector<Complex>& xb,
                                             const ModelParams& p) {
  return p.boundary == Boundary::Twisted ? twisted_coefficients(ys, xb, p) : open_coefficients(ys, xb, p);
}

}  // namespace detail

/// (K_0, K_1, ..., K_n) of the twisted functional relation.
inline std::vector<Complex> coeff_twisted(const EvalPoint& ep, const ModelParams& p) {
  check_eval_point(ep, p);
  return detail::twisted_coefficients(ep.all_vars(), ep.xb, p);
}

/// (K~_0, K~_1, ..., K~_n) of the open functional relation.
inline std::vector<Complex> coeff_open(const EvalPoint& ep, const ModelParams& p) {
  check_eval_point(ep, p);
  return detail::open_coefficients(ep.all_vars(), ep.xb, p);
}

inline std::vector<Complex> coefficients(const EvalPoint& ep, const ModelParams& p) {
  return p.boundary == Boundary::Twisted ? coeff_twisted(ep, p) : coeff_open(ep, p);
}

/// K^(l): the coefficients after x_0 <-> x_l, with K_0 and K_l exchanged.
/// l = 0 returns the original coefficients.
inline std::vector<Complex> coeff_permuted(const EvalPoint& ep, const ModelParams& p, std::size_t l) {
  if (l > ep.n()) throw std::out_of_range("coeff_permuted: l exceeds n");
  check_eval_point(ep, p);
  auto ys = ep.all_vars();
  std::swap(ys[0], ys[l]);
  auto k = detail::coefficients_for(ys, ep.xb, p);
  std::swap(k[0], k[l]);
  return k;
}

/// (K_i^(l)), rows l = 0..n, columns i = 0..n. Singular on-shell.
inline CMatrix coefficient_system(const EvalPoint& ep, const ModelParams& p) {
  const auto n = static_cast<Eigen::Index>(ep.n());
  CMatrix m(n + 1, n + 1);
  for (Eigen::Index l = 0; l <= n; ++l) {
    const auto k = coeff_permuted(ep, p, static_cast<std::size_t>(l));
    for (Eigen::Index i = 0; i <= n; ++i) m(l, i) = k[static_cast<std::size_t>(i)];
  }
  return m;
}

// ---------------------------------------------------------------------------
// V and V_i, path 1: composed from the permuted coefficients.

/// V_{ab} = K_b^(a), 1 <= a, b <= n.
inline CMatrix build_V(const EvalPoint& ep, const ModelParams& p) {
  const CMatrix sys = coefficient_system(ep, p);
  const auto n = static_cast<Eigen::Index>(ep.n());
  return sys.block(1, 1, n, n);
}

/// V with column i replaced by (-K_0^(a))_a.
inline CMatrix build_Vi(const EvalPoint& ep, const ModelParams& p, std::size_t i) {
  if (i < 1 || i > ep.n()) throw std::out_of_range("build_Vi: i must lie in 1..n");
  const CMatrix sys = coefficient_system(ep, p);
  const auto n = static_cast<Eigen::Index>(ep.n());
  CMatrix v = sys.block(1, 1, n, n);
  v.col(static_cast<Eigen::Index>(i) - 1) = -sys.block(1, 0, n, 1);
  return v;
}

// ---------------------------------------------------------------------------
// V and V_i, path 2: the expanded entry formulas, written out directly in
// terms of (x_0, x_1..x_n). Indices alpha, beta are 1-based.

namespace detail {

inline Complex twisted_diag_entry(const std::vector<Complex>& ys, const std::vector<Complex>& xb,
                                  const ModelParams& p, std::size_t alpha) {
  const Complex g = p.gamma, xa = ys[alpha];
  Complex lam_a{1.0}, lam_d{1.0};
  for (const auto& m : p.mu) {
    lam_a *= weight_a(xa - m, g);
    lam_d *= weight_b(xa - m);
  }
  Complex pa{1.0}, pd{1.0}, pab{1.0}, pdb{1.0};
  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (k == alpha) continue;
    pa *= weight_a(ys[k] - xa, g) / weight_b(ys[k] - xa);
    pd *= weight_a(xa - ys[k], g) / weight_b(xa - ys[k]);
  }
  for (const auto& r : xb) {
    pab *= weight_a(r - xa, g) / weight_b(r - xa);
    pdb *= weight_a(xa - r, g) / weight_b(xa - r);
  }
  return p.phi1 * lam_a * (pa - pab) + p.phi2 * lam_d * (pd - pdb);
}

inline Complex twisted_offdiag_entry(const std::vector<Complex>& ys, const ModelParams& p, std::size_t alpha,
                                     std::size_t beta) {
  const Complex g = p.gamma, c = weight_c(g), xa = ys[alpha], xbeta = ys[beta];
  Complex ta = p.phi1 * c / weight_b(xa - xbeta);
  Complex td = p.phi2 * c / weight_b(xbeta - xa);
  for (const auto& m : p.mu) {
    ta *= weight_a(xbeta - m, g);
    td *= weight_b(xbeta - m);
  }
  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (k == alpha || k == beta) continue;
    ta *= weight_a(ys[k] - xbeta, g) / weight_b(ys[k] - xbeta);
    td *= weight_a(xbeta - ys[k], g) / weight_b(xbeta - ys[k]);
  }
  return ta + td;
}

// Column i of V_i, row alpha.
inline Complex twisted_substituted_entry(const std::vector<Complex>& ys, const ModelParams& p, std::size_t alpha) {
  const Complex g = p.gamma, c = weight_c(g), x0 = ys[0], xa = ys[alpha];
  Complex ta = p.phi1 * c / weight_b(xa - x0);
  Complex td = p.phi2 * c / weight_b(x0 - xa);
  for (const auto& m : p.mu) {
    ta *= weight_a(x0 - m, g);
    td *= weight_b(x0 - m);
  }
  for (std::size_t k = 1; k < ys.size(); ++k) {
    if (k == alpha) continue;
    ta *= weight_a(ys[k] - x0, g) / weight_b(ys[k] - x0);
    td *= weight_a(x0 - ys[k], g) / weight_b(x0 - ys[k]);
  }
  return -ta - td;
}

inline Complex open_diag_entry(const std::vector<Complex>& ys, const std::vector<Complex>& xb, const ModelParams& p,
                               std::size_t alpha) {
  const Complex g = p.gamma, xa = ys[alpha];
  Complex pa{1.0}, pd{1.0}, pab{1.0}, pdb{1.0};
  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (k == alpha) continue;
    pa *= weight_a(ys[k] - xa, g) / weight_b(ys[k] - xa) * weight_b(ys[k] + xa) / weight_a(ys[k] + xa, g);
    pd *= weight_a(xa - ys[k], g) / weight_b(xa - ys[k]) * weight_a(xa + ys[k] + g, g) / weight_b(xa + ys[k] + g);
  }
  for (const auto& r : xb) {
    pab *= weight_a(r - xa, g) / weight_b(r - xa) * weight_b(r + xa) / weight_a(r + xa, g);
    pdb *= weight_a(xa - r, g) / weight_b(xa - r) * weight_a(xa + r + g, g) / weight_b(xa + r + g);
  }
  Complex ta = weight_b(xa + p.h) * weight_b(xa - p.hbar) * weight_a(2.0 * xa + g, g) / weight_b(2.0 * xa + g);
  Complex td = weight_a(xa - p.h, g) * weight_a(xa + p.hbar, g) * weight_b(2.0 * xa) / weight_a(2.0 * xa, g);
  for (const auto& m : p.mu) {
    ta *= weight_a(xa - m, g) * weight_a(xa + m, g);
    td *= weight_b(xa - m) * weight_b(xa + m);
  }
  return ta * (pa - pab) + td * (pd - pdb);
}

// Shared shape of the open off-diagonal and substituted entries: the pivot
// variable `left` sits in the prefactor, `right` carries the products over
// every index except those listed in `skip`.
inline Complex open_pair_entry(const std::vector<Complex>& ys, const ModelParams& p, Complex left, Complex right,
                               std::size_t skip_a, std::size_t skip_b) {
  const Complex g = p.gamma, c = weight_c(g);
  const Complex pre = weight_a(2.0 * left + g, g) / weight_a(left + right, g) * c / weight_b(left - right) *
                      weight_b(2.0 * right) / weight_a(2.0 * right, g);
  Complex ta = weight_b(right + p.h) * weight_b(right - p.hbar);
  Complex td = weight_a(right - p.h, g) * weight_a(right + p.hbar, g);
  for (const auto& m : p.mu) {
    ta *= weight_a(right - m, g) * weight_a(right + m, g);
    td *= weight_b(right - m) * weight_b(right + m);
  }
  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (k == skip_a || k == skip_b) continue;
    ta *= weight_a(ys[k] - right, g) / weight_b(ys[k] - right) * weight_b(ys[k] + right) / weight_a(ys[k] + right, g);
    td *= weight_a(right - ys[k], g) / weight_b(right - ys[k]) * weight_a(right + ys[k] + g, g) /
          weight_b(right + ys[k] + g);
  }
  return pre * (ta - td);
}

}  // namespace detail

/// V assembled from the expanded entry formulas.
inline CMatrix build_V_expanded(const EvalPoint& ep, const ModelParams& p) {
  check_eval_point(ep, p);
  const auto ys = ep.all_vars();
  const std::size_t n = ep.n();
  CMatrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 1; a <= n; ++a) {
    for (std::size_t b = 1; b <= n; ++b) {
      Complex e;
      if (p.boundary == Boundary::Twisted) {
        e = a == b ? detail::twisted_diag_entry(ys, ep.xb, p, a) : detail::twisted_offdiag_entry(ys, p, a, b);
      } else {
        e = a == b ? detail::open_diag_entry(ys, ep.xb, p, a) : detail::open_pair_entry(ys, p, ys[a], ys[b], a, b);
      }
      v(static_cast<Eigen::Index>(a - 1), static_cast<Eigen::Index>(b - 1)) = e;
    }
  }
  return v;
}

/// V_i assembled from the expanded entry formulas.
inline CMatrix build_Vi_expanded(const EvalPoint& ep, const ModelParams& p, std::size_t i) {
  if (i < 1 || i > ep.n()) throw std::out_of_range("build_Vi_expanded: i must lie in 1..n");
  CMatrix v = build_V_expanded(ep, p);
  const auto ys = ep.all_vars();
  for (std::size_t a = 1; a <= ep.n(); ++a) {
    // The open entry carries the same overall minus sign as the composed
    // form -K~_0^(alpha).
    const Complex e = p.boundary == Boundary::Twisted
                          ? detail::twisted_substituted_entry(ys, p, a)
                          : -detail::open_pair_entry(ys, p, ys[a], ys[0], a, 0);
    v(static_cast<Eigen::Index>(a - 1), static_cast<Eigen::Index>(i - 1)) = e;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Prefactors

/// phi1^(-n) prod_j b(x_0 - x_j)/b(x^B_j - x_0) prod_k b(x^B_j - mu_k)
inline Complex prefactor_twisted(const EvalPoint& ep, const ModelParams& p) {
  check_eval_point(ep, p);
  Complex f = std::pow(p.phi1, -static_cast<double>(ep.n()));
  for (std::size_t j = 0; j < ep.n(); ++j) {
    f *= checked_div(weight_b(ep.x0 - ep.X[j]), weight_b(ep.xb[j] - ep.x0), "b(x^B_j - x_0)");
    for (const auto& m : p.mu) f *= weight_b(ep.xb[j] - m);
  }
  return f;
}

inline Complex prefactor_open(const EvalPoint& ep, const ModelParams& p) {
  check_eval_point(ep, p);
  const Complex g = p.gamma;
  Complex f{1.0};
  for (std::size_t j = 0; j < ep.n(); ++j) {
    for (std::size_t k = j + 1; k < ep.n(); ++k) {
      f *= checked_div(weight_a(ep.xb[j] + ep.xb[k] + g, g), weight_b(ep.xb[j] + ep.xb[k]), "b(x^B_j + x^B_k)");
    }
  }
  for (std::size_t j = 0; j < ep.n(); ++j) {
    const Complex xj = ep.X[j], rj = ep.xb[j];
    f *= checked_div(weight_b(ep.x0 - xj) * weight_a(ep.x0 + xj, g),
                     weight_b(ep.x0 - rj) * weight_a(ep.x0 + rj, g), "b(x_0 - x^B) a(x_0 + x^B)");
    f *= checked_div(weight_b(2.0 * rj), weight_a(2.0 * xj + g, g), "a(2x_j + gamma)");
    f *= checked_div(weight_a(rj - p.h, g), weight_b(rj - p.hbar), "b(x^B_j - hbar)");
    for (const auto& m : p.mu) f *= weight_b(rj - m) * weight_b(rj + m);
  }
  return f;
}

inline Complex prefactor(const EvalPoint& ep, const ModelParams& p) {
  return p.boundary == Boundary::Twisted ? prefactor_twisted(ep, p) : prefactor_open(ep, p);
}

// ---------------------------------------------------------------------------
// Scalar products

/// Family 0: prefactor * det(V) = S_n(X).
/// Family i in 1..n: prefactor * det(V_i) = S_n(X_i^0).
/// Throws SingularSystem when V is numerically singular.
inline Complex scalar_product_det(const EvalPoint& ep, const ModelParams& p, std::size_t family) {
  if (family > ep.n()) throw std::out_of_range("scalar_product_det: family exceeds n");
  const CMatrix v = build_V(ep, p);
  const double cond = condition_estimate(v);
  if (!(cond <= kMaxSystemCondition)) throw SingularSystem("scalar_product_det: V is near-singular", cond);
  const CMatrix m = family == 0 ? v : build_Vi(ep, p, family);
  return prefactor(ep, p) * lu_determinant(m);
}

/// S_n(X) through family i, using `aux` as the free auxiliary value. For
/// i >= 1 the roles of x_0 and x_i are exchanged: the evaluation point is
/// (X with slot i := aux, x_0 := x_i), whose X_i^0 is X itself.
inline Complex scalar_product_family(const std::vector<Complex>& X, Complex aux, const std::vector<Complex>& xb,
                                     const ModelParams& p, std::size_t family) {
  if (family > X.size()) throw std::out_of_range("scalar_product_family: family exceeds n");
  if (family == 0) return scalar_product_det(EvalPoint{X, aux, xb}, p, 0);
  EvalPoint ep{X, X[family - 1], xb};
  ep.X[family - 1] = aux;
  return scalar_product_det(ep, p, family);
}

/// sum_i K_i v_i normalized by sum_i |K_i v_i|; v_i = S_n(X_i^0).
inline Complex funcrel_residual(const EvalPoint& ep, const ModelParams& p, const std::vector<Complex>& sp_values) {
  if (sp_values.size() != ep.n() + 1) throw DimensionError("funcrel_residual: need n + 1 values");
  const auto k = coefficients(ep, p);
  Complex sum{};
  double scale = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    sum += k[i] * sp_values[i];
    scale += std::abs(k[i] * sp_values[i]);
  }
  return scale == 0.0 ? Complex{} : sum / scale;
}

/// Solves the l = 1..n subsystem for S_n(X_i^0)/S_n(X); equals det(V_i)/det(V).
inline std::vector<Complex> cramer_ratios(const EvalPoint& ep, const ModelParams& p) {
  const CMatrix sys = coefficient_system(ep, p);
  const auto n = static_cast<Eigen::Index>(ep.n());
  const CMatrix v = sys.block(1, 1, n, n);
  std::vector<Complex> rhs(static_cast<std::size_t>(n));
  for (Eigen::Index a = 0; a < n; ++a) rhs[static_cast<std::size_t>(a)] = -sys(a + 1, 0);
  return lu_solve(v, rhs);
}

}  // namespace sixvertex

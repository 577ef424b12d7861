#pragma once

// Bethe ansatz equations for the twisted and open models, and a damped
// multi-start Newton solver producing validated on-shell root sets.

#include "sixvertex/lattice.hpp"
#include "sixvertex/numerics.hpp"

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace sixvertex {

struct BetheSolution {
  std::vector<Complex> roots;
  double residual_norm = 0.0;
  double eigencheck_residual = 0.0;
  Boundary boundary = Boundary::Twisted;
  bool admissible = false;
  std::string reason;  // why the solution was rejected; empty when admissible
};

inline constexpr double kResidualAccept = 1e-10;
inline constexpr double kRootSeparation = 1e-8;
inline constexpr double kEigencheckTol = 1e-8;

inline double norm2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

/// Component k: (phi1/phi2) prod_i a(l_k - mu_i)/b(l_k - mu_i)
///              prod_{j != k} a(l_j - l_k)/a(l_k - l_j)  -  (-1)^(n-1)
inline std::vector<Complex> ba_residual_twisted(const std::vector<Complex>& roots, const ModelParams& p) {
  const auto n = roots.size();
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  const Complex g = p.gamma;
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex lk = roots[k];
    Complex v = p.phi1 / p.phi2;
    for (const auto& m : p.mu) v *= checked_div(weight_a(lk - m, g), weight_b(lk - m), "b(lambda - mu)");
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      v *= checked_div(weight_a(roots[j] - lk, g), weight_a(lk - roots[j], g), "a(lambda_k - lambda_j)");
    }
    out[k] = v - sign;
  }
  return out;
}

/// Component k of the open-boundary equations, written as LHS - (-1)^(n-1).
inline std::vector<Complex> ba_residual_open(const std::vector<Complex>& roots, const ModelParams& p) {
  const auto n = roots.size();
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  const Complex g = p.gamma;
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex lk = roots[k];
    Complex v = checked_div(weight_b(lk + p.h) * weight_b(lk - p.hbar),
                            weight_a(lk - p.h, g) * weight_a(lk + p.hbar, g), "boundary factor");
    for (const auto& m : p.mu) {
      v *= checked_div(weight_a(lk - m, g) * weight_a(lk + m, g), weight_b(lk - m) * weight_b(lk + m),
                       "b(lambda -+ mu)");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const Complex lj = roots[j];
      v *= checked_div(weight_a(lj - lk, g) * weight_b(lj + lk),
                       weight_a(lk - lj, g) * weight_a(lk + lj + g, g), "a(lambda_k -+ lambda_j)");
    }
    out[k] = v - sign;
  }
  return out;
}

inline std::vector<Complex> ba_residual(const std::vector<Complex>& roots, const ModelParams& p) {
  return p.boundary == Boundary::Twisted ? ba_residual_twisted(roots, p) : ba_residual_open(roots, p);
}

/// Residual norm, or nullopt at a pole / non-finite value.
inline std::optional<double> safe_residual_norm(const std::vector<Complex>& roots, const ModelParams& p,
                                                std::vector<Complex>* values = nullptr) {
  try {
    auto f = ba_residual(roots, p);
    const double nrm = norm2(f);
    if (!std::isfinite(nrm)) return std::nullopt;
    if (values) *values = std::move(f);
    return nrm;
  } catch (const PoleError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Validation

/// Two fixed, generic evaluation points for the transfer-matrix eigencheck.
inline std::vector<Complex> eigencheck_points(const ModelParams& p) {
  Complex centroid{};
  for (const auto& m : p.mu) centroid += m;
  centroid /= static_cast<double>(p.mu.size());
  return {centroid + Complex{0.2718, 0.1414}, centroid + Complex{-0.3183, 0.5772}};
}

/// ||t psi - theta psi|| / max(||psi||, ||t psi||), theta the Rayleigh quotient;
/// maximized over the eigencheck points.
inline double eigencheck(const std::vector<Complex>& roots, const ModelParams& p) {
  const StateVector psi = bethe_vector(roots, p);
  const double npsi = psi.norm();
  if (!(npsi > 0.0) || !std::isfinite(npsi)) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& u : eigencheck_points(p)) {
    const StateVector tpsi = apply_transfer(u, p, psi);
    const Complex theta = psi.dot(tpsi) / psi.squaredNorm();
    const double scale = std::max(npsi, tpsi.norm());
    worst = std::max(worst, (tpsi - theta * psi).norm() / scale);
  }
  return worst;
}

/// Separation and pole clearance; returns the first violated condition.
inline std::optional<std::string> clearance_violation(const std::vector<Complex>& roots, const ModelParams& p) {
  const Complex g = p.gamma;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      if (std::abs(weight_b(roots[j] - roots[k])) <= kRootSeparation) return "coincident roots";
      if (p.boundary == Boundary::Open && std::abs(weight_b(roots[j] + roots[k])) <= kRootSeparation) {
        return "roots related by lambda_j = -lambda_k";
      }
    }
    for (const auto& m : p.mu) {
      if (std::abs(weight_b(roots[j] - m)) <= kRootSeparation) return "root at b(lambda - mu) pole";
      if (p.boundary == Boundary::Open && std::abs(weight_b(roots[j] + m)) <= kRootSeparation) {
        return "root at b(lambda + mu) pole";
      }
    }
    if (p.boundary == Boundary::Open) {
      if (std::abs(weight_b(2.0 * roots[j])) <= kRootSeparation) return "root at b(2 lambda) = 0";
      if (std::abs(weight_a(2.0 * roots[j], g)) <= kRootSeparation) return "root at a(2 lambda) = 0";
      if (std::abs(weight_b(roots[j] - p.hbar)) <= kRootSeparation) return "root at b(lambda - hbar) = 0";
    }
  }
  return std::nullopt;
}

inline BetheSolution validate_solution(BetheSolution sol, const ModelParams& p) {
  sol.boundary = p.boundary;
  sol.admissible = false;
  sol.reason.clear();
  sol.eigencheck_residual = std::numeric_limits<double>::infinity();
  if (static_cast<int>(sol.roots.size()) != p.magnons) {
    sol.reason = "wrong number of roots";
    sol.residual_norm = std::numeric_limits<double>::infinity();
    return sol;
  }
  const auto res = safe_residual_norm(sol.roots, p);
  sol.residual_norm = res.value_or(std::numeric_limits<double>::infinity());
  if (auto why = clearance_violation(sol.roots, p)) {
    sol.reason = *why;
    return sol;
  }
  if (!res) {
    sol.reason = "Bethe equations hit a pole";
    return sol;
  }
  if (!(*res < kResidualAccept)) {
    sol.reason = "Bethe residual too large";
    return sol;
  }
  sol.eigencheck_residual = eigencheck(sol.roots, p);
  if (!(sol.eigencheck_residual < kEigencheckTol)) {
    sol.reason = "not a transfer-matrix eigenvector";
    return sol;
  }
  sol.admissible = true;
  return sol;
}

// ---------------------------------------------------------------------------
// Canonical form and deduplication

/// Shift by a multiple of i*pi so that Im z lies in [-pi/2, pi/2].
inline Complex reduce_strip(Complex z) {
  const double k = std::round(z.imag() / std::numbers::pi);
  return {z.real(), z.imag() - k * std::numbers::pi};
}

/// True when lambda_k -> -lambda_k - gamma maps this open solution to a solution.
inline bool open_reflection_symmetric(const std::vector<Complex>& roots, std::size_t k, const ModelParams& p) {
  if (p.boundary != Boundary::Open) return false;
  auto mapped = roots;
  mapped[k] = -mapped[k] - p.gamma;
  const auto r = safe_residual_norm(mapped, p);
  return r && *r < 1e-9;
}

inline bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

inline std::vector<Complex> canonical_roots(std::vector<Complex> roots, const ModelParams& p) {
  for (std::size_t k = 0; k < roots.size(); ++k) {
    Complex r = reduce_strip(roots[k]);
    if (open_reflection_symmetric(roots, k, p)) {
      const Complex alt = reduce_strip(-roots[k] - p.gamma);
      const double mid = -0.5 * p.gamma.real();
      const bool prefer_alt = std::abs(r.real() - mid) < 1e-9 ? alt.imag() > r.imag() : alt.real() > r.real();
      if (prefer_alt) r = alt;
    }
    roots[k] = r;
  }
  std::sort(roots.begin(), roots.end(), lex_less);
  return roots;
}

/// Equal modulo permutation and i*pi shifts of individual roots.
inline bool same_solution(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol = kRootSeparation) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& ra : a) {
    bool found = false;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (!used[k] && std::abs(std::sinh(ra - b[k])) < tol) {
        used[k] = found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Newton

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
  int max_halvings = 30;
  double fd_step = 1e-7;
};

struct NewtonOutcome {
  std::vector<Complex> roots;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton on the multiplicative residual with a central-difference
/// Jacobian. Converged when the residual drops below `tolerance`, or when it
/// stagnates below kResidualAccept.
inline NewtonOutcome newton_refine(std::vector<Complex> z, const ModelParams& p, const NewtonOptions& opt = {}) {
  NewtonOutcome out;
  const std::size_t n = z.size();
  std::vector<Complex> f;
  auto nrm = safe_residual_norm(z, p, &f);
  if (!nrm) return out;
  double current = *nrm;
  for (int it = 0; it < opt.max_iterations && current >= opt.tolerance; ++it) {
    out.iterations = it + 1;
    CMatrix jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    bool ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) {
      const double step = opt.fd_step * std::max(1.0, std::abs(z[c]));
      auto zp = z, zm = z;
      zp[c] += step;
      zm[c] -= step;
      std::vector<Complex> fp, fm;
      if (!safe_residual_norm(zp, p, &fp) || !safe_residual_norm(zm, p, &fm)) {
        ok = false;
        break;
      }
      for (std::size_t r = 0; r < n; ++r) {
        jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (fp[r] - fm[r]) / (2.0 * step);
      }
    }
    if (!ok) break;
    std::vector<Complex> delta;
    try {
      delta = lu_solve(jac, f);
    } catch (const SingularSystem&) {
      break;
    }
    double t = 1.0;
    bool accepted = false;
    for (int hv = 0; hv <= opt.max_halvings; ++hv, t *= 0.5) {
      auto trial = z;
      for (std::size_t k = 0; k < n; ++k) trial[k] -= t * delta[k];
      std::vector<Complex> ft;
      const auto tn = safe_residual_norm(trial, p, &ft);
      if (tn && *tn < current) {
        z = std::move(trial);
        f = std::move(ft);
        current = *tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.roots = std::move(z);
  out.residual = current;
  out.converged = current < opt.tolerance || current < kResidualAccept;
  return out;
}

struct SolveResult {
  std::vector<BetheSolution> solutions;  // admissible, canonical, sorted
  int starts = 0;
  int converged = 0;
  int rejected = 0;     // converged but failed validation
  int duplicates = 0;
  int failed = 0;       // no convergence
};

/// Deterministic uniform draws in [0, 1), independent of the standard
/// library's distribution implementation.
class UniformStream {
public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
  std::mt19937_64 engine_;
};

/// Complex uniform in Re in [-2, 2], Im in [-pi/2, pi/2] around the mu centroid.
inline Complex draw_in_strip(UniformStream& rng, Complex centre) {
  const double re = rng.uniform(-2.0, 2.0);
  const double im = rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2);
  return centre + Complex{re, im};
}

/// Newton starts alternate between a narrow box, Re in [-0.6, 0.6] and
/// Im in [-pi/4, pi/4], and the full strip.
inline Complex draw_start(UniformStream& rng, Complex centre, int start_index) {
  if (start_index % 2 == 1) return draw_in_strip(rng, centre);
  const double re = rng.uniform(-0.6, 0.6);
  const double im = rng.uniform(-std::numbers::pi / 4, std::numbers::pi / 4);
  return centre + Complex{re, im};
}

inline Complex mu_centroid(const ModelParams& p) {
  Complex c{};
  for (const auto& m : p.mu) c += m;
  return p.mu.empty() ? c : c / static_cast<double>(p.mu.size());
}

inline SolveResult solve_newton(const ModelParams& p, std::uint64_t seed, int max_starts,
                                const NewtonOptions& opt = {}) {
  p.validate();
  SolveResult result;
  UniformStream rng(seed);
  const Complex centre = mu_centroid(p);
  for (int s = 0; s < max_starts; ++s) {
    ++result.starts;
    std::vector<Complex> start(static_cast<std::size_t>(p.magnons));
    for (auto& z : start) z = draw_start(rng, centre, s);
    const NewtonOutcome nw = newton_refine(std::move(start), p, opt);
    if (!nw.converged) {
      ++result.failed;
      continue;
    }
    ++result.converged;
    BetheSolution cand;
    cand.roots = canonical_roots(nw.roots, p);
    if (std::any_of(result.solutions.begin(), result.solutions.end(),
                    [&](const BetheSolution& s2) { return same_solution(s2.roots, cand.roots); })) {
      ++result.duplicates;
      continue;
    }
    cand = validate_solution(std::move(cand), p);
    if (!cand.admissible) {
      ++result.rejected;
      continue;
    }
    result.solutions.push_back(std::move(cand));
  }
  std::sort(result.solutions.begin(), result.solutions.end(), [](const BetheSolution& a, const BetheSolution& b) {
    return std::lexicographical_compare(a.roots.begin(), a.roots.end(), b.roots.begin(), b.roots.end(), lex_less);
  });
  return result;
}

}  // namespace sixvertex

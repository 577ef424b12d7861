#pragma once

// End-to-end check of one on-shell solution: oracle scalar product against
// every determinant family at several x_0 samples, the functional relation,
// singularity of the coefficient system and Cramer consistency.

#include "sixvertex/bethe.hpp"
#include "sixvertex/determinant.hpp"
#include "sixvertex/lattice.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sixvertex {

struct Tolerances {
  double oracle_relerr = 1e-8;
  double x0_spread = 1e-9;
  double family_spread = 1e-8;
  double funcrel = 1e-9;
  double singular_ratio = 1e-9;  // on-shell ratio must stay below
  double offshell_ratio = 1e-4;  // off-shell control must stay above
  double rank_gap = 1e-4;        // second-smallest / largest singular value
  double cramer = 1e-10;
  double assembly = 1e-12;
};

struct VerifyOptions {
  int x0_samples = 5;
  std::uint64_t seed = 0;
  Tolerances tol;
  bool offshell = false;  // perturb the roots before verifying
};

inline constexpr double kSamplePoleTol = 1e-6;
inline constexpr Complex kOffshellShift{0.05, 0.03};
inline constexpr Complex kControlShift{0.37, -0.21};

struct ScalarProductReport {
  std::vector<Complex> roots;  // x^B as used; perturbed when injected off-shell
  std::vector<Complex> X;
  std::vector<Complex> x0_samples;
  Complex oracle{};
  std::vector<std::vector<Complex>> det_values;        // [family][sample], all estimates of S_n(X)
  std::vector<std::vector<Complex>> raw_determinants;  // [sample][family]: det V, det V_1 .. det V_n
  double max_x0_spread = 0.0;
  double max_family_spread = 0.0;
  double oracle_relerr = 0.0;
  double funcrel_residual = 0.0;
  double min_singular_ratio = 0.0;      // worst on-shell sigma_min / sigma_max
  double offshell_singular_ratio = 0.0; // same system at shifted roots
  bool offshell_control_pass = false;   // recorded only; the system is singular for any x^B
  double min_rank_gap = 0.0;            // null space is one-dimensional when this stays O(1)
  double cramer_relerr = 0.0;
  double assembly_mismatch = 0.0;
  bool pass = false;
  std::vector<std::string> failed_checks;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline bool admissible_point(const EvalPoint& ep, const ModelParams& p, double tol) {
  try {
    check_eval_point(ep, p, tol);
    return true;
  } catch (const PoleError&) {
    return false;
  }
}

// Row and column scaling change neither rank nor null-space dimension;
// alternate max-norm equilibration so singular-value ratios measure rank.
inline CMatrix equilibrated(CMatrix m) {
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double s = m.row(r).cwiseAbs().maxCoeff();
      if (s > 0.0) m.row(r) /= s;
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double s = m.col(c).cwiseAbs().maxCoeff();
      if (s > 0.0) m.col(c) /= s;
    }
  }
  return m;
}

inline double matrix_mismatch(const CMatrix& a, const CMatrix& b) {
  const double s = std::max(max_abs(a), max_abs(b));
  return s == 0.0 ? 0.0 : max_abs(a - b) / s;
}

inline double max_pair_spread(const std::vector<Complex>& v, double scale) {
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) worst = std::max(worst, std::abs(v[i] - v[j]) / scale);
  return worst;
}

struct SampleValues {
  std::vector<Complex> family;  // S_n(X) from each family
  std::vector<Complex> raw;     // det V, det V_i
};

// Throws PoleError / SingularSystem when the sample is unusable.
inline SampleValues evaluate_sample(const std::vector<Complex>& X, Complex t, const std::vector<Complex>& xb,
                                    const ModelParams& p) {
  SampleValues s;
  const std::size_t n = X.size();
  const EvalPoint ep{X, t, xb};
  s.raw.push_back(lu_determinant(build_V(ep, p)));
  for (std::size_t i = 1; i <= n; ++i) s.raw.push_back(lu_determinant(build_Vi(ep, p, i)));
  for (std::size_t i = 0; i <= n; ++i) s.family.push_back(scalar_product_family(X, t, xb, p, i));
  return s;
}

}  // namespace detail

/// Verifies one admissible solution. `stream` separates the random draws of
/// different solutions under the same seed.
inline ScalarProductReport verify_solution(const BetheSolution& sol, const ModelParams& p, const VerifyOptions& opt,
                                           std::uint64_t stream = 0) {
  if (opt.x0_samples < 1) throw std::invalid_argument("x0_samples must be at least 1");
  ScalarProductReport rep;
  const std::size_t n = sol.roots.size();
  const Complex centre = mu_centroid(p);
  UniformStream rng(detail::mix_seed(opt.seed, stream));

  rep.roots = sol.roots;
  if (opt.offshell) {
    for (auto& r : rep.roots) r += kOffshellShift;
  }
  const auto& xb = rep.roots;

  // Free variables and x_0 samples; a bad X is redrawn as a whole.
  std::vector<detail::SampleValues> samples;
  for (int attempt = 0; attempt < 50 && static_cast<int>(samples.size()) < opt.x0_samples; ++attempt) {
    samples.clear();
    rep.x0_samples.clear();
    rep.X.assign(n, Complex{});
    for (auto& x : rep.X) x = draw_in_strip(rng, centre);
    for (int tries = 0; tries < 40 * opt.x0_samples && static_cast<int>(samples.size()) < opt.x0_samples; ++tries) {
      const Complex t = draw_in_strip(rng, centre);
      if (!detail::admissible_point(EvalPoint{rep.X, t, xb}, p, kSamplePoleTol)) continue;
      try {
        samples.push_back(detail::evaluate_sample(rep.X, t, xb, p));
        rep.x0_samples.push_back(t);
      } catch (const PoleError&) {
      } catch (const SingularSystem&) {
      }
    }
  }
  if (static_cast<int>(samples.size()) < opt.x0_samples) {
    throw std::runtime_error("verify: could not draw enough admissible x0 samples");
  }

  const auto ns = samples.size();
  rep.oracle = oracle_scalar_product(rep.X, xb, p);
  rep.det_values.assign(n + 1, std::vector<Complex>(ns));
  double scale = std::abs(rep.oracle);
  for (std::size_t s = 0; s < ns; ++s) {
    rep.raw_determinants.push_back(samples[s].raw);
    for (std::size_t i = 0; i <= n; ++i) {
      rep.det_values[i][s] = samples[s].family[i];
      scale = std::max(scale, std::abs(samples[s].family[i]));
    }
  }
  if (scale == 0.0) scale = 1.0;

  for (std::size_t i = 0; i <= n; ++i) {
    rep.max_x0_spread = std::max(rep.max_x0_spread, detail::max_pair_spread(rep.det_values[i], scale));
    for (const auto& v : rep.det_values[i]) rep.oracle_relerr = std::max(rep.oracle_relerr, std::abs(v - rep.oracle) / scale);
  }
  for (std::size_t s = 0; s < ns; ++s) {
    rep.max_family_spread = std::max(rep.max_family_spread, detail::max_pair_spread(samples[s].family, scale));
  }

  for (std::size_t s = 0; s < ns; ++s) {
    const EvalPoint ep{rep.X, rep.x0_samples[s], xb};
    const VariableSet vs{rep.X, ep.x0};

    std::vector<Complex> oracle_vals, det_vals;
    for (std::size_t i = 0; i <= n; ++i) {
      oracle_vals.push_back(oracle_scalar_product(substitute(vs, i), xb, p));
      det_vals.push_back(scalar_product_det(ep, p, i));
    }
    rep.funcrel_residual = std::max({rep.funcrel_residual, std::abs(funcrel_residual(ep, p, oracle_vals)),
                                     std::abs(funcrel_residual(ep, p, det_vals))});

    const auto sv = singular_values(detail::equilibrated(coefficient_system(ep, p)));
    rep.min_singular_ratio = std::max(rep.min_singular_ratio, sv.back() / sv.front());
    const double gap = sv[sv.size() - 2] / sv.front();
    rep.min_rank_gap = s == 0 ? gap : std::min(rep.min_rank_gap, gap);

    const auto& raw = samples[s].raw;
    const auto ratios = cramer_ratios(ep, p);
    double dscale = 0.0, derr = 0.0;
    for (std::size_t i = 1; i <= n; ++i) dscale = std::max(dscale, std::abs(raw[i] / raw[0]));
    for (std::size_t i = 1; i <= n; ++i) derr = std::max(derr, std::abs(ratios[i - 1] - raw[i] / raw[0]));
    rep.cramer_relerr = std::max(rep.cramer_relerr, dscale == 0.0 ? derr : derr / dscale);

    rep.assembly_mismatch = std::max(rep.assembly_mismatch, detail::matrix_mismatch(build_V(ep, p), build_V_expanded(ep, p)));
    for (std::size_t i = 1; i <= n; ++i) {
      rep.assembly_mismatch =
          std::max(rep.assembly_mismatch, detail::matrix_mismatch(build_Vi(ep, p, i), build_Vi_expanded(ep, p, i)));
    }
  }

  // Off-shell control: the same system with shifted roots is regular.
  rep.offshell_singular_ratio = 0.0;
  for (int k = 1; k <= 8; ++k) {
    std::vector<Complex> shifted = xb;
    for (auto& r : shifted) r += static_cast<double>(k) * kControlShift;
    const EvalPoint ep{rep.X, rep.x0_samples.front(), shifted};
    if (!detail::admissible_point(ep, p, kSamplePoleTol)) continue;
    try {
      rep.offshell_singular_ratio = singular_ratio(detail::equilibrated(coefficient_system(ep, p)));
      break;
    } catch (const PoleError&) {
    }
  }

  const auto& tol = opt.tol;
  auto check = [&](bool ok, const char* name) {
    if (!ok) rep.failed_checks.emplace_back(name);
  };
  check(rep.oracle_relerr < tol.oracle_relerr, "oracle_relerr");
  check(rep.max_x0_spread < tol.x0_spread, "x0_spread");
  check(rep.max_family_spread < tol.family_spread, "family_spread");
  check(rep.funcrel_residual < tol.funcrel, "funcrel");
  check(rep.min_singular_ratio < tol.singular_ratio, "singular_ratio");
  rep.offshell_control_pass = rep.offshell_singular_ratio > tol.offshell_ratio;
  check(rep.min_rank_gap > tol.rank_gap, "rank_gap");
  check(rep.cramer_relerr < tol.cramer, "cramer");
  check(rep.assembly_mismatch < tol.assembly, "assembly");
  rep.pass = rep.failed_checks.empty();
  return rep;
}

struct VerifyRun {
  SolveResult solve;
  std::vector<ScalarProductReport> reports;
  bool pass = false;  // at least one solution and every report passes
};

inline VerifyRun run_verify(const ModelParams& p, int max_starts, const VerifyOptions& opt) {
  VerifyRun run;
  run.solve = solve_newton(p, opt.seed, max_starts);
  run.pass = !run.solve.solutions.empty();
  for (std::size_t k = 0; k < run.solve.solutions.size(); ++k) {
    run.reports.push_back(verify_solution(run.solve.solutions[k], p, opt, k));
    run.pass = run.pass && run.reports.back().pass;
  }
  return run;
}

}  // namespace sixvertex

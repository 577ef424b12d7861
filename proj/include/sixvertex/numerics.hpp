#pragma once

// Complex scalars, six-vertex statistical weights, dense complex linear
// algebra and variable-set bookkeeping.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sixvertex {

using Complex = std::complex<double>;
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

/// Two spectral values closer than this (in |sinh(x - y)|) are coincident.
inline constexpr double kCoincidenceTol = 1e-10;

/// Raised when a formula would divide by a (numerically) vanishing weight.
class PoleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Linear system judged singular; carries the condition estimate.
class SingularSystem : public std::runtime_error {
public:
  SingularSystem(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// a(x) = sinh(x + gamma), b(x) = sinh(x), c = sinh(gamma).
inline Complex weight_a(Complex x, Complex gamma) { return std::sinh(x + gamma); }
inline Complex weight_b(Complex x) { return std::sinh(x); }
inline Complex weight_c(Complex gamma) { return std::sinh(gamma); }

inline bool coincident(Complex x, Complex y, double tol = kCoincidenceTol) {
  return std::abs(std::sinh(x - y)) < tol;
}

/// Divides, raising PoleError when |den| < tol.
inline Complex checked_div(Complex num, Complex den, const char* what,
                           double tol = kCoincidenceTol) {
  if (!(std::abs(den) >= tol)) {
    throw PoleError(std::string("vanishing denominator: ") + what);
  }
  return num / den;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Determinant by LU with partial pivoting. An exactly singular matrix gives 0.
inline Complex lu_determinant(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("lu_determinant: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  if (m.rows() == 0) return Complex{1.0, 0.0};
  Eigen::PartialPivLU<CMatrix> lu(m);
  return lu.determinant();
}

/// Reciprocal-condition based estimate of cond_1(m); +inf when singular.
inline double condition_estimate(const CMatrix& m) {
  if (m.rows() == 0) return 1.0;
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

inline constexpr double kMaxSolveCondition = 1e12;

/// Solves m x = rhs. Throws SingularSystem when the condition estimate
/// reaches kMaxSolveCondition.
inline std::vector<Complex> lu_solve(const CMatrix& m, const std::vector<Complex>& rhs) {
  if (m.rows() != m.cols()) throw DimensionError("lu_solve: matrix not square");
  if (static_cast<std::size_t>(m.rows()) != rhs.size()) {
    throw DimensionError("lu_solve: rhs length does not match matrix");
  }
  if (m.rows() == 0) return {};
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double rc = lu.rcond();
  const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (!(cond < kMaxSolveCondition)) {
    throw SingularSystem("lu_solve: numerically singular system", cond);
  }
  const CVector b = Eigen::Map<const CVector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  const CVector x = lu.solve(b);
  return {x.data(), x.data() + x.size()};
}

/// Singular values in descending order.
inline std::vector<double> singular_values(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

/// sigma_min / sigma_max; 0 for an empty or zero matrix.
inline double singular_ratio(const CMatrix& m) {
  const auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0.0;
  return s.back() / s.front();
}

/// The ordered set X = (x_1..x_n) together with the auxiliary variable x_0.
struct VariableSet {
  std::vector<Complex> base;
  Complex aux{};

  std::size_t size() const noexcept { return base.size(); }

  /// (x_0, x_1, ..., x_n)
  std::vector<Complex> with_aux() const {
    std::vector<Complex> all;
    all.reserve(base.size() + 1);
    all.push_back(aux);
    all.insert(all.end(), base.begin(), base.end());
    return all;
  }
};

/// X_i^0: x_i replaced by x_0 in slot i. i = 0 returns X itself.
inline std::vector<Complex> substitute(const VariableSet& vs, std::size_t i) {
  if (i > vs.size()) {
    throw std::out_of_range("substitute: index " + std::to_string(i) + " exceeds n = " +
                            std::to_string(vs.size()));
  }
  std::vector<Complex> out = vs.base;
  if (i > 0) out[i - 1] = vs.aux;
  return out;
}

/// Relative distance |x - y| / max(|x|, |y|); 0 when both vanish.
inline double relative_error(Complex x, Complex y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

}  // namespace sixvertex

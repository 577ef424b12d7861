#pragma once

// R-matrix, reflection matrices, single- and double-row monodromies on
// C^2 (x) (C^2)^{(x)L}, Bethe vectors and brute-force scalar products.
//
// Basis convention: tensor factor 0 is the auxiliary space and is the most
// significant bit of a state index; site j (1-based) is factor j. Spin-up is
// bit 0, so the pseudo-vacuum |0> is index 0.

#include "sixvertex/numerics.hpp"

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace sixvertex {

enum class Boundary { Twisted, Open };

inline const char* to_string(Boundary b) { return b == Boundary::Twisted ? "twisted" : "open"; }

inline constexpr int kMaxSites = 12;
/// Dense materialization of 2^(L+1) operators is limited to this many sites.
inline constexpr int kMaxDenseSites = 10;

struct ModelParams {
  Boundary boundary = Boundary::Twisted;
  int sites = 1;    // L
  int magnons = 1;  // n
  Complex gamma{0.5, 0.0};
  std::vector<Complex> mu;  // inhomogeneities, length L
  Complex phi1{1.0, 0.0};   // twisted only
  Complex phi2{1.0, 0.0};
  Complex h{};              // open only
  Complex hbar{};

  /// Throws std::invalid_argument naming the offending field.
  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (sites < 1 || sites > kMaxSites) fail("L must lie in [1, " + std::to_string(kMaxSites) + "]");
    if (magnons < 1 || magnons > sites) fail("n must satisfy 1 <= n <= L");
    if (static_cast<int>(mu.size()) != sites) fail("mu must have exactly L entries");
    if (!is_finite(gamma)) fail("gamma is not finite");
    if (std::abs(weight_c(gamma)) < kCoincidenceTol) fail("gamma: sinh(gamma) vanishes (c = 0)");
    for (const auto& m : mu) {
      if (!is_finite(m)) fail("mu contains a non-finite entry");
    }
    if (boundary == Boundary::Twisted) {
      if (!is_finite(phi1) || std::abs(phi1) == 0.0) fail("phi1 must be finite and nonzero");
      if (!is_finite(phi2) || std::abs(phi2) == 0.0) fail("phi2 must be finite and nonzero");
    } else {
      if (!is_finite(h)) fail("h is not finite");
      if (!is_finite(hbar)) fail("hbar is not finite");
    }
  }
};

inline std::size_t state_dim(int sites) { return std::size_t{1} << sites; }

// ---------------------------------------------------------------------------
// Local matrices

inline CMatrix r_matrix(Complex x, Complex gamma) {
  const Complex a = weight_a(x, gamma), b = weight_b(x), c = weight_c(gamma);
  CMatrix r = CMatrix::Zero(4, 4);
  r(0, 0) = a;
  r(1, 1) = b;
  r(1, 2) = c;
  r(2, 1) = c;
  r(2, 2) = b;
  r(3, 3) = a;
  return r;
}

inline CMatrix r_matrix(Complex x, const ModelParams& p) { return r_matrix(x, p.gamma); }

inline CMatrix k_matrix(Complex x, Complex h) {
  CMatrix k = CMatrix::Zero(2, 2);
  k(0, 0) = std::sinh(h + x);
  k(1, 1) = std::sinh(h - x);
  return k;
}

inline CMatrix dual_k_matrix(Complex x, Complex hbar, Complex gamma) {
  CMatrix k = CMatrix::Zero(2, 2);
  k(0, 0) = std::sinh(hbar - x - gamma);
  k(1, 1) = std::sinh(hbar + x + gamma);
  return k;
}

/// (K(x), Kbar(x)) for the diagonal open boundary.
inline std::pair<CMatrix, CMatrix> k_matrices(Complex x, const ModelParams& p) {
  return {k_matrix(x, p.h), dual_k_matrix(x, p.hbar, p.gamma)};
}

// ---------------------------------------------------------------------------
// Factor chains: a product F_1 F_2 ... F_m of local operators on N tensor
// factors, applied right to left.

struct LocalFactor {
  CMatrix op;       // 2x2 (single) or 4x4 (pair)
  int first = 0;    // tensor factor index
  int second = -1;  // -1 for a single-factor operator
};

using FactorChain = std::vector<LocalFactor>;

namespace detail {

inline std::size_t bit_of(int factor, int factors) {
  return std::size_t{1} << (factors - 1 - factor);
}

inline void apply_single(CVector& v, const CMatrix& m, int i, int factors) {
  const std::size_t bi = bit_of(i, factors);
  const auto dim = static_cast<std::size_t>(v.size());
  for (std::size_t s = 0; s < dim; ++s) {
    if (s & bi) continue;
    const Complex u0 = v[s], u1 = v[s | bi];
    v[s] = m(0, 0) * u0 + m(0, 1) * u1;
    v[s | bi] = m(1, 0) * u0 + m(1, 1) * u1;
  }
}

inline void apply_pair(CVector& v, const CMatrix& m, int i, int j, int factors) {
  const std::size_t bi = bit_of(i, factors), bj = bit_of(j, factors);
  const auto dim = static_cast<std::size_t>(v.size());
  for (std::size_t s = 0; s < dim; ++s) {
    if (s & (bi | bj)) continue;
    const std::size_t idx[4] = {s, s | bj, s | bi, s | bi | bj};
    Complex in[4];
    for (int k = 0; k < 4; ++k) in[k] = v[idx[k]];
    for (int r = 0; r < 4; ++r) {
      Complex acc{};
      for (int c = 0; c < 4; ++c) {
        if (m(r, c) != Complex{}) acc += m(r, c) * in[c];
      }
      v[idx[r]] = acc;
    }
  }
}

}  // namespace detail

inline void apply_factor(CVector& v, const LocalFactor& f, int factors) {
  if (f.second < 0) {
    detail::apply_single(v, f.op, f.first, factors);
  } else {
    detail::apply_pair(v, f.op, f.first, f.second, factors);
  }
}

inline CVector apply_chain(const FactorChain& chain, CVector v, int factors) {
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) apply_factor(v, *it, factors);
  return v;
}

inline CMatrix materialize_chain(const FactorChain& chain, int factors) {
  const auto dim = static_cast<Eigen::Index>(state_dim(factors));
  CMatrix out(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    CVector e = CVector::Zero(dim);
    e[c] = 1.0;
    out.col(c) = apply_chain(chain, std::move(e), factors);
  }
  return out;
}

/// Dense embedding of a two-factor operator acting on factors (i, j).
inline CMatrix embed_pair(const CMatrix& m4, int i, int j, int factors) {
  return materialize_chain({LocalFactor{m4, i, j}}, factors);
}

inline CMatrix embed_single(const CMatrix& m2, int i, int factors) {
  return materialize_chain({LocalFactor{m2, i, -1}}, factors);
}

/// Transposition in leg 1 or 2 of a 4x4 operator on V (x) V.
inline CMatrix partial_transpose(const CMatrix& m4, int leg) {
  CMatrix out(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          if (leg == 1) {
            out(2 * a + b, 2 * c + d) = m4(2 * c + b, 2 * a + d);
          } else {
            out(2 * a + b, 2 * c + d) = m4(2 * a + d, 2 * c + b);
          }
        }
  return out;
}

// ---------------------------------------------------------------------------
// Monodromies

/// T_0(x) = R_01(x - mu_1) R_02(x - mu_2) ... R_0L(x - mu_L)
inline FactorChain monodromy_chain(Complex x, const ModelParams& p) {
  FactorChain chain;
  for (int j = 1; j <= p.sites; ++j) {
    chain.push_back({r_matrix(x - p.mu[j - 1], p.gamma), 0, j});
  }
  return chain;
}

/// U_0(x) = R_0L(x - mu_L) ... R_01(x - mu_1) K_0(x) R_01(x + mu_1) ... R_0L(x + mu_L).
/// The dual reflection matrix is not part of the chain; it enters through
/// the transfer matrix tr_0 Kbar_0(x) U_0(x).
inline FactorChain double_row_chain(Complex x, const ModelParams& p) {
  FactorChain chain;
  for (int j = p.sites; j >= 1; --j) {
    chain.push_back({r_matrix(x - p.mu[j - 1], p.gamma), 0, j});
  }
  chain.push_back({k_matrix(x, p.h), 0, -1});
  for (int j = 1; j <= p.sites; ++j) {
    chain.push_back({r_matrix(x + p.mu[j - 1], p.gamma), 0, j});
  }
  return chain;
}

inline FactorChain row_chain(Complex x, const ModelParams& p) {
  return p.boundary == Boundary::Twisted ? monodromy_chain(x, p) : double_row_chain(x, p);
}

namespace detail {
inline void require_dense(const ModelParams& p) {
  if (p.sites > kMaxDenseSites) {
    throw DimensionError("dense operators are limited to L <= " + std::to_string(kMaxDenseSites));
  }
}
}  // namespace detail

inline CMatrix monodromy(Complex x, const ModelParams& p) {
  if (p.boundary != Boundary::Twisted) throw std::invalid_argument("monodromy: twisted model required");
  detail::require_dense(p);
  return materialize_chain(monodromy_chain(x, p), p.sites + 1);
}

inline CMatrix double_row_monodromy(Complex x, const ModelParams& p) {
  if (p.boundary != Boundary::Open) throw std::invalid_argument("double_row_monodromy: open model required");
  detail::require_dense(p);
  return materialize_chain(double_row_chain(x, p), p.sites + 1);
}

inline CMatrix row_monodromy(Complex x, const ModelParams& p) {
  return p.boundary == Boundary::Twisted ? monodromy(x, p) : double_row_monodromy(x, p);
}

struct OperatorQuad {
  CMatrix A, B, C, D;
};

inline OperatorQuad extract_quad(const CMatrix& m) {
  const auto dim = m.rows();
  if (m.cols() != dim || dim < 2 || dim % 2 != 0 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw DimensionError("extract_quad: expected a 2^(L+1) square matrix");
  }
  const auto half = dim / 2;
  return {m.topLeftCorner(half, half), m.topRightCorner(half, half),
          m.bottomLeftCorner(half, half), m.bottomRightCorner(half, half)};
}

inline CMatrix assemble_quad(const OperatorQuad& q) {
  const auto half = q.A.rows();
  CMatrix m(2 * half, 2 * half);
  m << q.A, q.B, q.C, q.D;
  return m;
}

// ---------------------------------------------------------------------------
// Matrix-free operator action on states

using StateVector = CVector;

inline StateVector vacuum(int sites) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(state_dim(sites)));
  v[0] = 1.0;
  return v;
}

enum class Block { A, B, C, D };

/// Applies one auxiliary-space block (A, B, C or D) of the row operator at x.
inline StateVector apply_block(Block which, Complex x, const ModelParams& p, const StateVector& v) {
  const auto half = static_cast<Eigen::Index>(state_dim(p.sites));
  if (v.size() != half) throw DimensionError("apply_block: state dimension mismatch");
  const int row = (which == Block::A || which == Block::B) ? 0 : 1;
  const int col = (which == Block::A || which == Block::C) ? 0 : 1;
  CVector w = CVector::Zero(2 * half);
  w.segment(col * half, half) = v;
  w = apply_chain(row_chain(x, p), std::move(w), p.sites + 1);
  return w.segment(row * half, half);
}

/// Twisted: phi1 A + phi2 D. Open: tr_0 Kbar_0(x) U_0(x) = Kbar_00 A~ + Kbar_11 D~.
inline StateVector apply_transfer(Complex x, const ModelParams& p, const StateVector& v) {
  Complex wa = p.phi1, wd = p.phi2;
  if (p.boundary == Boundary::Open) {
    const CMatrix kb = dual_k_matrix(x, p.hbar, p.gamma);
    wa = kb(0, 0);
    wd = kb(1, 1);
  }
  return wa * apply_block(Block::A, x, p, v) + wd * apply_block(Block::D, x, p, v);
}

inline CMatrix transfer_matrix(Complex x, const ModelParams& p) {
  const OperatorQuad q = extract_quad(row_monodromy(x, p));
  if (p.boundary == Boundary::Twisted) return p.phi1 * q.A + p.phi2 * q.D;
  const CMatrix kb = dual_k_matrix(x, p.hbar, p.gamma);
  return kb(0, 0) * q.A + kb(1, 1) * q.D;
}

/// B(x_1) B(x_2) ... B(x_n) |0>  (B~ for the open model).
inline StateVector bethe_vector(const std::vector<Complex>& xs, const ModelParams& p) {
  if (static_cast<int>(xs.size()) > p.sites) throw DimensionError("bethe_vector: more rapidities than sites");
  StateVector v = vacuum(p.sites);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) v = apply_block(Block::B, *it, p, v);
  return v;
}

/// <0| C(x_n) ... C(x_1) B(y_1) ... B(y_n) |0> with the transpose pairing.
inline Complex oracle_scalar_product(const std::vector<Complex>& xc, const std::vector<Complex>& xb,
                                     const ModelParams& p) {
  if (xc.size() != xb.size()) throw DimensionError("oracle_scalar_product: argument lengths differ");
  StateVector v = bethe_vector(xb, p);
  for (const auto& x : xc) v = apply_block(Block::C, x, p, v);
  return v[0];
}

/// Number of down spins encoded in a basis index.
inline int magnon_count(std::size_t index) { return std::popcount(index); }

// ---------------------------------------------------------------------------
// Algebra residuals, relative to the larger side's max-entry norm.

namespace detail {
inline double relative_residual(const CMatrix& lhs, const CMatrix& rhs) {
  const double scale = std::max(max_abs(lhs), max_abs(rhs));
  return scale == 0.0 ? 0.0 : max_abs(lhs - rhs) / scale;
}
}  // namespace detail

/// R12(x-y) R13(x) R23(y) - R23(y) R13(x) R12(x-y)
inline double yang_baxter_residual(Complex x, Complex y, Complex gamma) {
  const CMatrix r12 = embed_pair(r_matrix(x - y, gamma), 0, 1, 3);
  const CMatrix r13 = embed_pair(r_matrix(x, gamma), 0, 2, 3);
  const CMatrix r23 = embed_pair(r_matrix(y, gamma), 1, 2, 3);
  return detail::relative_residual(r12 * r13 * r23, r23 * r13 * r12);
}

inline double reflection_residual(Complex x1, Complex x2, const ModelParams& p) {
  const CMatrix k1 = embed_single(k_matrix(x1, p.h), 0, 2);
  const CMatrix k2 = embed_single(k_matrix(x2, p.h), 1, 2);
  const CMatrix rm = r_matrix(x1 - x2, p.gamma), rp = r_matrix(x1 + x2, p.gamma);
  return detail::relative_residual(rm * k1 * rp * k2, k2 * rp * k1 * rm);
}

inline double dual_reflection_residual(Complex x1, Complex x2, const ModelParams& p) {
  const CMatrix k1 = partial_transpose(embed_single(dual_k_matrix(x1, p.hbar, p.gamma), 0, 2), 1);
  const CMatrix k2 = partial_transpose(embed_single(dual_k_matrix(x2, p.hbar, p.gamma), 1, 2), 2);
  const CMatrix rm = r_matrix(-x1 + x2, p.gamma);
  const CMatrix rp = r_matrix(-x1 - x2 - 2.0 * p.gamma, p.gamma);
  return detail::relative_residual(rm * k1 * rp * k2, k2 * rp * k1 * rm);
}

/// Places a row operator (aux factor + L sites) on V1 (x) V2 (x) V^{(x)L},
/// with its auxiliary space on factor aux_slot (0 or 1).
inline CMatrix lift_row_operator(const CMatrix& t, int aux_slot, int sites) {
  const std::size_t site_dim = state_dim(sites);
  const auto dim = static_cast<Eigen::Index>(4 * site_dim);
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t col = 0; col < static_cast<std::size_t>(dim); ++col) {
    const std::size_t s1 = (col >> (sites + 1)) & 1, s2 = (col >> sites) & 1, rest = col & (site_dim - 1);
    const std::size_t aux = aux_slot == 0 ? s1 : s2, other = aux_slot == 0 ? s2 : s1;
    const auto tcol = static_cast<Eigen::Index>(aux * site_dim + rest);
    for (Eigen::Index trow = 0; trow < t.rows(); ++trow) {
      const Complex val = t(trow, tcol);
      if (val == Complex{}) continue;
      const std::size_t na = static_cast<std::size_t>(trow) / site_dim;
      const std::size_t nr = static_cast<std::size_t>(trow) % site_dim;
      const std::size_t row = aux_slot == 0 ? ((na << (sites + 1)) | (other << sites) | nr)
                                            : ((other << (sites + 1)) | (na << sites) | nr);
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += val;
    }
  }
  return out;
}

/// R12(x1-x2) U1(x1) R12(x1+x2) U2(x2) = U2(x2) R12(x1+x2) U1(x1) R12(x1-x2)
inline double reflection_algebra_residual(Complex x1, Complex x2, const ModelParams& p) {
  const int factors = p.sites + 2;
  const CMatrix u1 = lift_row_operator(double_row_monodromy(x1, p), 0, p.sites);
  const CMatrix u2 = lift_row_operator(double_row_monodromy(x2, p), 1, p.sites);
  const CMatrix rm = embed_pair(r_matrix(x1 - x2, p.gamma), 0, 1, factors);
  const CMatrix rp = embed_pair(r_matrix(x1 + x2, p.gamma), 0, 1, factors);
  return detail::relative_residual(rm * u1 * rp * u2, u2 * rp * u1 * rm);
}

/// R12(x1-x2) T1(x1) T2(x2) = T2(x2) T1(x1) R12(x1-x2) for the twisted monodromy.
inline double yang_baxter_algebra_residual(Complex x1, Complex x2, const ModelParams& p) {
  const int factors = p.sites + 2;
  const CMatrix t1 = lift_row_operator(monodromy(x1, p), 0, p.sites);
  const CMatrix t2 = lift_row_operator(monodromy(x2, p), 1, p.sites);
  const CMatrix r = embed_pair(r_matrix(x1 - x2, p.gamma), 0, 1, factors);
  return detail::relative_residual(r * t1 * t2, t2 * t1 * r);
}

}  // namespace sixvertex

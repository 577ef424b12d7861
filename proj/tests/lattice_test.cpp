#include "sixvertex/lattice.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace sixvertex;
using testing_support::random_params;
using testing_support::uniform_complex;

namespace {

// Embeddings on three two-dimensional factors written out by index.
CMatrix embed3(const CMatrix& r, int which) {
  CMatrix out = CMatrix::Zero(8, 8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n) {
              Complex v{};
              if (which == 12 && k == n) v = r(2 * i + j, 2 * l + m);
              if (which == 13 && j == m) v = r(2 * i + k, 2 * l + n);
              if (which == 23 && i == l) v = r(2 * j + k, 2 * m + n);
              out(4 * i + 2 * j + k, 4 * l + 2 * m + n) = v;
            }
  return out;
}

double rel(const CMatrix& a, const CMatrix& b) {
  return max_abs(a - b) / std::max(max_abs(a), max_abs(b));
}

ModelParams twisted(int L, std::uint64_t seed = 1) {
  UniformStream rng(seed);
  return random_params(Boundary::Twisted, L, 1, rng);
}

ModelParams open_model(int L, std::uint64_t seed = 1) {
  UniformStream rng(seed);
  return random_params(Boundary::Open, L, 1, rng);
}

}  // namespace

TEST(RMatrix, Layout) {
  const Complex x{0.3, 0.2}, g{0.5, 0.1};
  const CMatrix r = r_matrix(x, g);
  EXPECT_LT(std::abs(r(0, 0) - weight_a(x, g)), 1e-15);
  EXPECT_LT(std::abs(r(3, 3) - weight_a(x, g)), 1e-15);
  EXPECT_LT(std::abs(r(1, 1) - weight_b(x)), 1e-15);
  EXPECT_LT(std::abs(r(2, 2) - weight_b(x)), 1e-15);
  EXPECT_LT(std::abs(r(1, 2) - weight_c(g)), 1e-15);
  EXPECT_LT(std::abs(r(2, 1) - weight_c(g)), 1e-15);
  EXPECT_EQ(r(0, 3), Complex{});
  // regularity: R(0) = c P
  const CMatrix r0 = r_matrix(0.0, g);
  EXPECT_LT(std::abs(r0(0, 0) - weight_c(g)), 1e-15);
  EXPECT_LT(std::abs(r0(1, 1)), 1e-15);
}

TEST(YangBaxter, IndexOracle) {
  UniformStream rng(21);
  for (int k = 0; k < 20; ++k) {
    const Complex x = uniform_complex(rng, 1.5, 1.0), y = uniform_complex(rng, 1.5, 1.0);
    const Complex g = Complex{rng.uniform(0.2, 1.0), rng.uniform(-0.3, 0.3)};
    const CMatrix r12 = embed3(r_matrix(x - y, g), 12);
    const CMatrix r13 = embed3(r_matrix(x, g), 13);
    const CMatrix r23 = embed3(r_matrix(y, g), 23);
    EXPECT_LT(rel(r12 * r13 * r23, r23 * r13 * r12), 1e-12);
    EXPECT_LT(yang_baxter_residual(x, y, g), 1e-12);
    EXPECT_LT(rel(embed_pair(r_matrix(x, g), 0, 2, 3), r13), 1e-15);
  }
}

TEST(YangBaxter, DetectsBrokenWeights) {
  // A non-solution: perturb one weight of R(x - y).
  const Complex x{0.4, 0.1}, y{-0.2, 0.3}, g{0.6, 0.0};
  CMatrix bad = r_matrix(x - y, g);
  bad(1, 2) *= 1.1;
  const CMatrix r12 = embed3(bad, 12), r13 = embed3(r_matrix(x, g), 13), r23 = embed3(r_matrix(y, g), 23);
  EXPECT_GT(rel(r12 * r13 * r23, r23 * r13 * r12), 1e-3);
}

TEST(Reflection, BothEquations) {
  UniformStream rng(31);
  for (int k = 0; k < 20; ++k) {
    const ModelParams p = random_params(Boundary::Open, 1, 1, rng);
    const Complex x1 = uniform_complex(rng, 1.0, 0.8), x2 = uniform_complex(rng, 1.0, 0.8);
    EXPECT_LT(reflection_residual(x1, x2, p), 1e-12);
    EXPECT_LT(dual_reflection_residual(x1, x2, p), 1e-12);
  }
}

TEST(Reflection, AlgebraForDoubleRow) {
  UniformStream rng(41);
  for (int L = 1; L <= 2; ++L) {
    for (int k = 0; k < 10; ++k) {
      const ModelParams p = random_params(Boundary::Open, L, 1, rng);
      const Complex x1 = uniform_complex(rng, 1.0, 0.8), x2 = uniform_complex(rng, 1.0, 0.8);
      EXPECT_LT(reflection_algebra_residual(x1, x2, p), 1e-11) << "L=" << L;
    }
  }
}

TEST(Monodromy, YangBaxterAlgebra) {
  UniformStream rng(43);
  for (int L = 1; L <= 3; ++L) {
    const ModelParams p = random_params(Boundary::Twisted, L, 1, rng);
    EXPECT_LT(yang_baxter_algebra_residual(Complex{0.3, 0.1}, Complex{-0.4, 0.25}, p), 1e-11);
  }
}

TEST(Monodromy, SingleSiteBlocks) {
  ModelParams p = twisted(1);
  const Complex x{0.35, -0.15};
  const auto q = extract_quad(monodromy(x, p));
  const Complex a = weight_a(x - p.mu[0], p.gamma), b = weight_b(x - p.mu[0]), c = weight_c(p.gamma);
  EXPECT_LT(std::abs(q.A(0, 0) - a), 1e-15);
  EXPECT_LT(std::abs(q.A(1, 1) - b), 1e-15);
  EXPECT_LT(std::abs(q.D(0, 0) - b), 1e-15);
  EXPECT_LT(std::abs(q.D(1, 1) - a), 1e-15);
  EXPECT_LT(std::abs(q.B(1, 0) - c), 1e-15);
  EXPECT_LT(std::abs(q.C(0, 1) - c), 1e-15);
  EXPECT_EQ(q.B(0, 1), Complex{});
  EXPECT_EQ(q.A(0, 1), Complex{});
  EXPECT_LT(rel(assemble_quad(q), monodromy(x, p)), 1e-16);
}

TEST(Monodromy, VacuumEigenvalues) {
  const ModelParams p = twisted(4, 7);
  const Complex x{0.21, 0.33};
  const auto v = vacuum(p.sites);
  Complex la{1.0}, ld{1.0};
  for (const auto& m : p.mu) {
    la *= weight_a(x - m, p.gamma);
    ld *= weight_b(x - m);
  }
  EXPECT_LT((apply_block(Block::A, x, p, v) - la * v).norm() / std::abs(la), 1e-13);
  EXPECT_LT((apply_block(Block::D, x, p, v) - ld * v).norm() / std::abs(ld), 1e-13);
  EXPECT_EQ(apply_block(Block::C, x, p, v).norm(), 0.0);
  const auto t = apply_transfer(x, p, v);
  EXPECT_LT((t - (p.phi1 * la + p.phi2 * ld) * v).norm(), 1e-12 * std::abs(p.phi1 * la));
}

TEST(Monodromy, MatrixFreeMatchesDense) {
  for (Boundary b : {Boundary::Twisted, Boundary::Open}) {
    UniformStream rng(5);
    const ModelParams p = random_params(b, 3, 1, rng);
    const Complex x{0.17, -0.29};
    const auto q = extract_quad(row_monodromy(x, p));
    CVector v(8);
    for (Eigen::Index i = 0; i < 8; ++i) v[i] = uniform_complex(rng, 1.0, 1.0);
    EXPECT_LT((apply_block(Block::A, x, p, v) - q.A * v).norm(), 1e-12 * (q.A * v).norm());
    EXPECT_LT((apply_block(Block::B, x, p, v) - q.B * v).norm(), 1e-12 * (q.B * v).norm());
    EXPECT_LT((apply_block(Block::C, x, p, v) - q.C * v).norm(), 1e-12 * (q.C * v).norm());
    EXPECT_LT((apply_block(Block::D, x, p, v) - q.D * v).norm(), 1e-12 * (q.D * v).norm());
    const CVector tv = transfer_matrix(x, p) * v;
    EXPECT_LT((apply_transfer(x, p, v) - tv).norm(), 1e-12 * tv.norm());
  }
}

TEST(Monodromy, CreationOperatorsCommute) {
  for (Boundary b : {Boundary::Twisted, Boundary::Open}) {
    const ModelParams p = b == Boundary::Twisted ? twisted(3, 9) : open_model(3, 9);
    const Complex x{0.3, 0.1}, y{-0.25, 0.4};
    const auto qx = extract_quad(row_monodromy(x, p)), qy = extract_quad(row_monodromy(y, p));
    const CMatrix bb = qx.B * qy.B;
    EXPECT_LT(rel(bb, qy.B * qx.B), 1e-12) << to_string(b);
    EXPECT_LT(rel(qx.C * qy.C, qy.C * qx.C), 1e-12) << to_string(b);
  }
}

TEST(Monodromy, TransferMatricesCommute) {
  for (Boundary b : {Boundary::Twisted, Boundary::Open}) {
    const ModelParams p = b == Boundary::Twisted ? twisted(3, 2) : open_model(3, 2);
    const CMatrix t1 = transfer_matrix(Complex{0.3, 0.1}, p), t2 = transfer_matrix(Complex{-0.6, 0.2}, p);
    EXPECT_LT(rel(t1 * t2, t2 * t1), 1e-12) << to_string(b);
  }
}

TEST(Monodromy, DenseGuardAndBoundaryCheck) {
  ModelParams big = twisted(1);
  big.sites = kMaxDenseSites + 1;
  big.mu.assign(static_cast<std::size_t>(big.sites), Complex{});
  EXPECT_THROW(monodromy(0.1, big), DimensionError);
  EXPECT_THROW(monodromy(0.1, open_model(2)), std::invalid_argument);
  EXPECT_THROW(double_row_monodromy(0.1, twisted(2)), std::invalid_argument);
  EXPECT_THROW(extract_quad(CMatrix::Zero(6, 6)), DimensionError);
  EXPECT_THROW(extract_quad(CMatrix::Zero(4, 2)), DimensionError);
}

TEST(BetheVector, SectorSupport) {
  for (Boundary b : {Boundary::Twisted, Boundary::Open}) {
    UniformStream rng(17);
    const ModelParams p = random_params(b, 6, 3, rng);
    const auto v = bethe_vector(testing_support::random_points(rng, 3), p);
    double inside = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (magnon_count(static_cast<std::size_t>(i)) == 3) {
        inside = std::max(inside, std::abs(v[i]));
      } else {
        EXPECT_EQ(v[i], Complex{}) << "index " << i;
      }
    }
    EXPECT_GT(inside, 0.0);
  }
}

TEST(BetheVector, MatrixFreeBeyondDenseCap) {
  UniformStream rng(19);
  const ModelParams p = random_params(Boundary::Twisted, 12, 1, rng);
  const auto v = bethe_vector({Complex{0.2, 0.1}}, p);
  EXPECT_EQ(v.size(), 4096);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (magnon_count(static_cast<std::size_t>(i)) != 1) {
      EXPECT_EQ(v[i], Complex{});
    }
  }
}

TEST(Oracle, SingleSiteValue) {
  // L = 1: C(x) B(y) |0> = c^2 |0> for every x, y.
  const ModelParams p = twisted(1, 4);
  const Complex s = oracle_scalar_product({Complex{0.3, 0.2}}, {Complex{-0.7, 0.1}}, p);
  const Complex c = weight_c(p.gamma);
  EXPECT_LT(relative_error(s, c * c), 1e-14);
}

TEST(Oracle, PermutationSymmetric) {
  for (Boundary b : {Boundary::Twisted, Boundary::Open}) {
    UniformStream rng(23);
    const ModelParams p = random_params(b, 5, 3, rng);
    auto xs = testing_support::random_points(rng, 3);
    auto ys = testing_support::random_points(rng, 3);
    const Complex ref = oracle_scalar_product(xs, ys, p);
    std::sort(xs.begin(), xs.end(), [](Complex a, Complex c) { return a.real() < c.real(); });
    do {
      auto yp = ys;
      std::rotate(yp.begin(), yp.begin() + 1, yp.end());
      EXPECT_LT(relative_error(oracle_scalar_product(xs, yp, p), ref), 1e-11);
    } while (std::next_permutation(xs.begin(), xs.end(), [](Complex a, Complex c) { return a.real() < c.real(); }));
  }
}

TEST(Oracle, RejectsMismatchedLengths) {
  const ModelParams p = twisted(3);
  EXPECT_THROW(oracle_scalar_product({Complex{0.1}}, {Complex{0.2}, Complex{0.3}}, p), DimensionError);
  EXPECT_THROW(bethe_vector({0.1, 0.2, 0.3, 0.4}, p), DimensionError);
}

TEST(ModelParams, ValidationNamesField) {
  auto message = [](const ModelParams& p) {
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  ModelParams p = twisted(2);
  EXPECT_EQ(message(p), "");
  ModelParams q = p;
  q.gamma = 0.0;
  EXPECT_EQ(message(q).rfind("gamma", 0), 0u);
  q = p;
  q.mu.pop_back();
  EXPECT_EQ(message(q).rfind("mu", 0), 0u);
  q = p;
  q.magnons = 3;
  EXPECT_EQ(message(q).rfind("n ", 0), 0u);
  q = p;
  q.phi2 = 0.0;
  EXPECT_EQ(message(q).rfind("phi2", 0), 0u);
  q = p;
  q.sites = 13;
  EXPECT_EQ(message(q).rfind("L ", 0), 0u);
}

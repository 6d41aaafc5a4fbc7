#include <gtest/gtest.h>

#include "common.hpp"

using namespace richardson;
using namespace richardson::sixvertex;
using testutil::cplx;

namespace {

SixVertexParams random_params(std::mt19937_64& rng, int n, bool complex_data) {
  std::uniform_real_distribution<double> u(-0.5, 0.5), ug(0.3, 1.5);
  SixVertexParams p;
  for (double x : testutil::random_levels(rng, n, 0.3 / n)) p.xi.push_back(complex_data ? cplx(x, 0.3 * u(rng)) : cplx(x));
  p.eta = complex_data ? cplx(0.3 + 0.2 * u(rng), 0.2 * u(rng)) : cplx(0.3);
  p.g = ug(rng);
  return p;
}

cplx random_t(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {1.5 * u(rng), 0.5 + 0.5 * std::abs(u(rng))};
}

double op_norm(const cmat& a) { return Eigen::JacobiSVD<cmat>(a).singularValues()(0); }

}  // namespace

TEST(SMatrix, EqualArguments) {
  cplx eta(0.4, 0.1);
  auto s = s_matrix(0.0, 0.0, eta);
  // basis |site1 site2> with index 2 a + b, up = 1: |up down> = 2, |down up> = 1
  Eigen::Vector4cd in = Eigen::Vector4cd::Zero(), want = Eigen::Vector4cd::Zero();
  in(2) = 1.0;
  want(1) = eta;
  want(2) = -0.5 * eta;
  EXPECT_LT((s * in - want).norm(), 1e-15);
}

TEST(SMatrix, ScalarWithoutEta) {
  auto s = s_matrix(cplx(1.3, 0.2), cplx(-0.4), 0.0);
  EXPECT_LT((s - cplx(1.7, 0.2) * Mat4::Identity()).norm(), 1e-15);
}

TEST(SMatrix, YangBaxter) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  double literal = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    cplx t1(u(rng), u(rng)), t2(u(rng), u(rng)), t3(u(rng), u(rng)), eta(u(rng), 0.3 * u(rng));
    EXPECT_LE(yang_baxter_residual(t1, t2, t3, eta), 1e-12);
    literal = std::max(literal, yang_baxter_residual(t1, t2, t3, eta, false));
  }
  // the unshifted arguments do not satisfy the relation
  EXPECT_GT(literal, 1e-3);
}

TEST(SMatrix, RMatrixInversion) {
  cplx eta(0.3, 0.05), lam(0.7, -0.2);
  EXPECT_LT((r_matrix(lam, eta) * r_matrix(-lam, eta) - Mat4::Identity()).norm(), 1e-14);
}

TEST(Monodromy, SingleSiteByHand) {
  SixVertexParams p{cplx(0.25), {cplx(0.4)}, 0.8};
  cplx t(-0.3, 0.6);
  auto m = monodromy(p, t);
  const cplx w = p.w(), u = p.xi[0] - t, h = 0.5 * p.eta;
  Eigen::Matrix2cd a = Eigen::Matrix2cd::Zero(), d = a, b = a, c = a;
  a(0, 0) = std::exp(w) * (u - h);
  a(1, 1) = std::exp(w) * (u + h);
  d(0, 0) = std::exp(-w) * (u + h);
  d(1, 1) = std::exp(-w) * (u - h);
  b(1, 0) = std::exp(-w) * p.eta;
  c(0, 1) = std::exp(w) * p.eta;
  EXPECT_LT((m.a - a).norm(), 1e-15);
  EXPECT_LT((m.d - d).norm(), 1e-15);
  EXPECT_LT((m.b - b).norm(), 1e-15);
  EXPECT_LT((m.c - c).norm(), 1e-15);
}

TEST(Monodromy, CapExceeded) {
  SixVertexParams p{cplx(0.3), std::vector<cplx>(11), 1.0};
  for (int i = 0; i < 11; ++i) p.xi[i] = double(i);
  EXPECT_THROW(monodromy(p, cplx(0.5, 0.5)), cap_exceeded);
}

TEST(MonodromyProperty, TransferMatricesCommute) {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 6; ++n)
    for (int rep = 0; rep < 3; ++rep) {
      auto p = random_params(rng, n, rep % 2);
      EXPECT_LE(transfer_commutator(p, random_t(rng), random_t(rng)), 1e-11) << n;
    }
}

TEST(MonodromyProperty, QuantumDeterminant) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 5; ++n)
    for (int rep = 0; rep < 3; ++rep) EXPECT_LE(quantum_determinant_residual(random_params(rng, n, rep % 2), random_t(rng)), 1e-10);
}

TEST(FOperator, SingleSiteIsIdentity) {
  SixVertexParams p{cplx(0.3), {cplx(0.1)}, 1.0};
  EXPECT_EQ((f_operator(p) - cmat::Identity(2, 2)).norm(), 0.0);
}

TEST(FOperator, VacuumInvariant) {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 6; ++n) {
    cmat f = f_operator(random_params(rng, n, true));
    cvec e0 = cvec::Zero(f.rows());
    e0(0) = 1.0;
    EXPECT_LE((f * e0 - e0).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((f.row(0).transpose() - e0).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(FOperator, TwoSiteFactorization) {
  std::mt19937_64 rng(5);
  auto p = random_params(rng, 2, true);
  cmat r21 = cmat::Identity(4, 4);
  sixvertex::detail::apply_right(r21, r_matrix(p.xi[1] - p.xi[0], p.eta), 1, 0, 2);
  EXPECT_LT((f_operator(p) - r21 * f_operator(p, {1, 0})).norm(), 1e-13);
}

TEST(FOperator, SingularParameters) {
  SixVertexParams p{cplx(0.5), {cplx(0.0), cplx(0.5)}, 1.0};
  EXPECT_THROW(f_operator(p), singular_matrix);
}

TEST(FOperator, ColumnsAreCreationStrings) {
  std::mt19937_64 rng(6);
  for (int n = 2; n <= 4; ++n) EXPECT_LE(f_column_residual(random_params(rng, n, false)), 1e-10);
}

TEST(FBasis, DiagonalAAndSingleSiteB) {
  std::mt19937_64 rng(7);
  auto p = random_params(rng, 4, true);
  cplx t = random_t(rng);
  auto f = fbasis_formulas(p, t);
  EXPECT_EQ((f.a - cmat(f.a.diagonal().asDiagonal())).norm(), 0.0);
  for (Eigen::Index s = 0; s < f.a.rows(); ++s) {
    cplx want = 1.0;
    for (int i = 0; i < 4; ++i)
      if (!sixvertex::detail::occ(s, i, 4)) want *= sixvertex::detail::ctil(p.xi[i] - t, p.eta);
    EXPECT_LT(std::abs(f.a(s, s) - want), 1e-14);
  }
  SixVertexParams one{cplx(0.3), {cplx(0.2)}, 1.0};
  auto g = fbasis_formulas(one, t);
  Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
  b(1, 0) = sixvertex::detail::btil(one.xi[0] - t, one.eta);
  EXPECT_LT((g.b - b).norm(), 1e-15);
}

TEST(FBasis, SingleSiteExact) {
  SixVertexParams p{cplx(0.3), {cplx(0.2)}, 0.9};
  auto r = verify_fbasis(p, cplx(-0.4, 0.3));
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_residual(), 1e-15);
}

TEST(FBasis, ThreeSitesRealData) {
  std::mt19937_64 rng(8);
  auto p = random_params(rng, 3, false);
  auto r = verify_fbasis(p, random_t(rng));
  EXPECT_TRUE(r.pass) << r.max_residual() << " " << r.max_scalar_deviation();
}

TEST(FBasisProperty, RandomDraws) {
  std::mt19937_64 rng(9);
  for (int n = 2; n <= 6; ++n)
    for (int rep = 0; rep < 4; ++rep) {
      auto r = verify_fbasis(random_params(rng, n, rep % 2), random_t(rng));
      EXPECT_TRUE(r.pass) << n << " " << r.max_residual() << " " << r.max_scalar_deviation();
    }
}

TEST(Bilocal, ConservesNumberAndCommutes) {
  std::mt19937_64 rng(10);
  auto p = random_params(rng, 4, true);
  cmat h = bilocal_hamiltonian(p);
  cmat num = cmat::Zero(h.rows(), h.cols());
  for (Eigen::Index s = 0; s < h.rows(); ++s)
    for (int i = 0; i < 4; ++i) num(s, s) += sixvertex::detail::occ(s, i, 4);
  EXPECT_LE(op_norm(commutator(h, num)), 1e-12);
  for (int rep = 0; rep < 3; ++rep) {
    cplx t = random_t(rng);
    auto f = fbasis_formulas(p, t);
    cmat z = f.a + d_formula(p, t);
    EXPECT_LE(op_norm(commutator(h, z)), 1e-10 * std::max(1.0, op_norm(h) * op_norm(z)));
  }
}

TEST(Quasiclassical, SiteFactor) {
  std::mt19937_64 rng(11);
  auto p = random_params(rng, 3, false);
  p.eta = 1e-2;
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(site_factor_expansion(p, i, random_t(rng)).pass());
}

TEST(Quasiclassical, BFormulaReducesToSigmaPlus) {
  std::mt19937_64 rng(12);
  for (int n = 1; n <= 4; ++n) {
    auto p = random_params(rng, n, false);
    p.eta = 1e-2;
    auto c = b_formula_limit(p, random_t(rng));
    EXPECT_TRUE(c.pass()) << c.ratio;
  }
}

TEST(Quasiclassical, TransferMatrixSecondOrder) {
  std::mt19937_64 rng(13);
  for (int n = 3; n <= 5; ++n) {
    auto p = random_params(rng, n, false);
    p.eta = 1e-2;
    cplx t = random_t(rng);
    auto a = transfer_expansion(p, t), b = monodromy_expansion(p, t);
    EXPECT_TRUE(a.pass()) << a.ratio;
    EXPECT_TRUE(b.pass()) << b.ratio;
  }
  // two sites: the untransformed remainder starts one order later
  auto p = random_params(rng, 2, false);
  p.eta = 1e-2;
  cplx t = random_t(rng);
  EXPECT_TRUE(transfer_expansion(p, t).pass());
  EXPECT_NEAR(monodromy_expansion(p, t).ratio, 0.25, 0.05);
}

TEST(BetheEquations, EmptyAndLimit) {
  SixVertexParams p{cplx(1e-4), {cplx(-0.6), cplx(0.1), cplx(0.8)}, 0.7};
  EXPECT_TRUE(ba_residual(p, 0.7, {}).empty());
  auto m = make_model({-0.6, 0.1, 0.8}, 2, 0.7);
  std::vector<cplx> t{cplx(-0.2, 0.3), cplx(0.5, -0.4)};
  auto ba = ba_residual(p, 0.7, t);
  auto r = residual(m, t);
  for (int i = 0; i < 2; ++i) EXPECT_LT(std::abs(ba[i] / p.eta + r[i]), 1e-3 * (1 + std::abs(r[i])));
  auto on = ground_state(m).roots;
  for (auto z : ba_residual(p, 0.7, on)) EXPECT_LT(std::abs(z / p.eta), 1e-3);
}

TEST(BetheEquations, Pole) {
  SixVertexParams p{cplx(0.2), {cplx(0.0), cplx(1.0)}, 0.7};
  EXPECT_THROW(ba_residual(p, 0.7, {cplx(-0.1)}), pole_collision);
}

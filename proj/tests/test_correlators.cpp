#include <gtest/gtest.h>

#include "common.hpp"

using namespace richardson;
using testutil::cplx;

namespace {

struct Solved {
  PairingModel model;
  RootSet roots;
};

// Every label of a handful of random models.
std::vector<Solved> random_instances(std::uint64_t seed, int count, int nmax) {
  std::mt19937_64 rng(seed);
  std::vector<Solved> out;
  for (int rep = 0; rep < count; ++rep) {
    std::uniform_int_distribution<int> un(2, nmax);
    int n = un(rng);
    std::uniform_int_distribution<int> um(1, n / 2);
    auto m = testutil::random_model(rng, n, um(rng));
    for (auto& l : all_labels(m)) out.push_back({m, continue_in_g(m, l)});
  }
  return out;
}

const double kRoot = -1.0 / std::sqrt(2.0);

}  // namespace

TEST(NormMatrix, WorkedExample) {
  auto nm = norm_matrix(testutil::worked_example(), {cplx(kRoot)});
  EXPECT_NEAR(nm.entries(0, 0).real(), 2.3431457505076198, 1e-13);
  EXPECT_NEAR(nm.det_value().real(), 2.3431457505076198, 1e-13);
}

TEST(NormMatrix, EntriesAndSymmetry) {
  auto m = make_model({0.0, 0.4, 1.0, 1.7}, 2, 0.5);
  std::vector<cplx> t{cplx(-0.2, 0.1), cplx(0.7, -0.3)};
  auto nm = norm_matrix(m, t);
  cplx n01 = 2.0 / ((t[0] - t[1]) * (t[0] - t[1]));
  EXPECT_EQ(nm.entries(0, 1), n01);
  EXPECT_EQ(nm.entries(1, 0), n01);
  cplx n00 = -n01;
  for (double x : m.levels) n00 += 1.0 / ((t[0] - x) * (t[0] - x));
  EXPECT_LT(std::abs(nm.entries(0, 0) - n00), 1e-14);
}

TEST(NormMatrix, SinglePairIsDefiningSum) {
  auto m = make_model({-0.3, 0.2, 0.9}, 1, 0.5);
  cplx t(0.1, 0.5);
  cplx s = 0.0;
  for (double x : m.levels) s += 1.0 / ((t - x) * (t - x));
  EXPECT_LT(std::abs(norm_matrix(m, {t}).det_value() - s), 1e-14);
}

TEST(NormMatrix, Errors) {
  auto m = make_model({0.0, 1.0, 2.0}, 2, 0.5);
  EXPECT_THROW(norm_matrix(m, {cplx(0.5), cplx(0.5 + 1e-10)}), coincident_roots);
  EXPECT_THROW(norm_matrix(make_model({0.0, 1.0}, 1, 0.5, Kind::trigonometric), {cplx(0.3)}), config_error);
  PairingModel spin{{0.0, 1.0}, {2, 1}, 1, 0.5, Kind::rational};
  EXPECT_THROW(norm_matrix(spin, {cplx(-0.3)}), config_error);
}

TEST(NormProperty, EqualsStateNorm) {
  for (auto& s : random_instances(101, 10, 8)) {
    cvec v = sigma_plus_state(s.model, s.roots.roots);
    double direct = v.squaredNorm();
    cplx d = norm_matrix(s.model, s.roots.roots).det_value();
    EXPECT_LE(std::abs(d - direct) / direct, 1e-9);
  }
}

TEST(RankOneDet, Examples) {
  auto m = make_model({0.0, 0.4, 1.0, 1.7, 2.2, 3.0}, 4, 0.5);
  auto t = std::vector<cplx>{cplx(-0.4, 0.1), cplx(0.7, -0.3), cplx(1.3, 0.6), cplx(2.6, -0.2)};
  auto nm = norm_matrix(m, t);
  cvec zero = cvec::Zero(4), phi(4), c(4);
  phi << 0.3, -1.0, cplx(0.2, 0.5), 2.0;
  c << 1.0, cplx(0.0, -0.7), 0.4, -0.25;
  EXPECT_LT(std::abs(rank_one_det(nm, zero, phi) - nm.det_value()), 1e-15 * std::abs(nm.det_value()));
  cplx direct = logdet(cmat(nm.entries + phi * c.transpose())).value();
  EXPECT_LT(std::abs(rank_one_det(nm, c, phi) - direct), 1e-10 * std::abs(direct));
  auto one = norm_matrix(make_model({0.0, 1.0}, 1, 0.5), {cplx(kRoot)});
  cvec c1(1), p1(1);
  c1 << 0.7;
  p1 << -0.2;
  EXPECT_NEAR(std::abs(rank_one_det(one, c1, p1) - (one.entries(0, 0) + 0.7 * -0.2)), 0.0, 1e-14);
}

TEST(RankOneDet, SingularBaseFallsBack) {
  NormMatrix nm;
  nm.entries = cmat::Zero(2, 2);
  nm.entries(0, 0) = 1.0;
  nm.lu.compute(nm.entries);
  nm.det = logdet(nm.lu);
  ASSERT_TRUE(nm.singular());
  cvec c(2), phi(2);
  c << 0.5, 2.0;
  phi << 1.0, 3.0;
  cplx direct = cmat(nm.entries + phi * c.transpose()).determinant();
  EXPECT_LT(std::abs(rank_one_det(nm, c, phi) - direct), 1e-14);
}

TEST(ScalarProduct, SinglePairClosedForms) {
  auto m = make_model({-0.5, 0.3, 1.1}, 1, 0.6);
  auto t = ground_state(m).roots;
  cplx lam(0.2, 0.8);
  cplx direct = 0.0, closed = 1.0 / m.coupling;
  for (double x : m.levels) {
    direct += 1.0 / ((lam - x) * (t[0] - x));
    closed += 1.0 / (lam - x);
  }
  closed /= (t[0] - lam);
  EXPECT_LT(std::abs(scalar_product(m, {lam}, t) - direct), 1e-12);
  EXPECT_LT(std::abs(closed - direct), 1e-12);
}

TEST(ScalarProduct, MatchesOracleOverlap) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    auto m = testutil::random_model(rng, 4 + rep % 3, 2 + rep % 2);
    for (auto& l : all_labels(m)) {
      auto t = continue_in_g(m, l).roots;
      auto lam = testutil::random_offshell(rng, m.pairs);
      cplx direct = sigma_plus_state(m, lam).transpose() * sigma_plus_state(m, t);
      EXPECT_LT(std::abs(scalar_product(m, lam, t) - direct), 1e-9 * std::abs(direct));
    }
  }
}

TEST(ScalarProduct, ApproachesNorm) {
  auto m = make_model({-0.8, -0.1, 0.4, 1.0}, 2, 0.7);
  auto t = ground_state(m).roots;
  double nrm = norm_matrix(m, t).det_value().real();
  std::vector<cplx> lam{t[0] + cplx(1e-6, 0.0), t[1] + cplx(0.0, 1.3e-6)};
  EXPECT_LT(std::abs(scalar_product(m, lam, t) - nrm), 1e-4 * nrm);
}

TEST(ScalarProduct, Errors) {
  auto m = make_model({-0.5, 0.3, 1.1}, 2, 0.6);
  auto t = ground_state(m).roots;
  EXPECT_THROW(scalar_product(m, {cplx(0.1), cplx(0.1)}, t), coincident_roots);
  EXPECT_THROW(scalar_product(m, {t[0], cplx(0.1)}, t), pole_collision);
  EXPECT_THROW(scalar_product(m, {cplx(0.3), cplx(0.1)}, t), pole_collision);
}

TEST(Correlators, WorkedExample) {
  auto m = testutil::worked_example();
  auto t = ground_state(m).roots;
  EXPECT_NEAR(occupation(m, t, 0), 0.85355339059327376, 1e-12);
  EXPECT_NEAR(occupation(m, t, 1), 0.14644660940672624, 1e-12);
  EXPECT_NEAR(pair_transfer(m, t, 1, 0), 0.35355339059327376, 1e-12);
  EXPECT_NEAR(pair_transfer(m, t, 0, 1), 0.35355339059327376, 1e-12);
  EXPECT_NEAR(pair_transfer(m, t, 0, 0), occupation(m, t, 0), 1e-15);
  EXPECT_EQ(density_density(m, t, 0, 1), 0.0);
  auto ss = spin_spin(m, t, 0, 1);
  EXPECT_NEAR(ss.value, 0.41421356237309503, 1e-12);
  EXPECT_LT(std::abs(ss.quadratic - ss.bordered), 1e-12);
  EXPECT_NEAR(pairing_amplitude(m, t), 1.7071067811865475, 1e-12);
}

TEST(Correlators, WeakCouplingLimit) {
  auto m = make_model({-1.0, -0.3, 0.2, 0.8, 1.5}, 2, 1e-5);
  auto t = ground_state(m).roots;
  for (int l = 0; l < 5; ++l) EXPECT_NEAR(occupation(m, t, l), l < 2 ? 1.0 : 0.0, 1e-4);
  EXPECT_NEAR(pairing_amplitude(m, t), 2.0, 1e-3);
}

TEST(Correlators, EmptySector) {
  auto m = make_model({-1.0, 0.5, 1.5}, 0, 0.4);
  auto r = correlator_report(m, {});
  for (double n : r.occupations) EXPECT_EQ(n, 0.0);
  EXPECT_EQ(r.pairing, 0.0);
  EXPECT_NEAR(r.spin_spin(0, 1), 1.0, 1e-15);
}

// Every correlator against the oracle, plus the internal identities.
TEST(CorrelatorProperty, MatchOracle) {
  for (auto& s : random_instances(202, 12, 8)) {
    const auto& m = s.model;
    const auto& t = s.roots.roots;
    Sector sec(m);
    cvec v = sigma_plus_state(m, t);
    Correlators c(m, t);
    const int n = int(m.size());
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(c.occupation(i), expectation(v, sec.number(i)).real(), 1e-8);
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(c.pair_transfer(i, j), expectation(v, sec.hop(i, j)).real(), 1e-8);
        EXPECT_NEAR(c.density_density(i, j), expectation(v, sec.density_density(i, j)).real(), 1e-8);
        if (i != j) {
          auto ss = c.spin_spin(i, j);
          EXPECT_NEAR(ss.value, expectation(v, sec.sigma_sigma(i, j)).real(), 1e-8);
          EXPECT_LT(std::abs(ss.quadratic - ss.bordered), 1e-10);
          EXPECT_LT(std::abs(c.pair_transfer_explicit(i, j) - c.pair_transfer_c(i, j)), 1e-9);
        }
      }
    }
    EXPECT_NEAR(c.pairing(), expectation(v, sec.pair_operator()).real(), 1e-8);
    auto r = c.report();
    EXPECT_LE(r.conservation_residual, 1e-10);
    EXPECT_LE(r.energy_identity_residual, 1e-9);
    EXPECT_LE(r.composition_residual, 1e-8);
    EXPECT_LE(r.spin_path_discrepancy, 1e-10);
    EXPECT_LE(r.imag_leakage, 1e-8);
    for (double x : r.occupations) {
      EXPECT_GE(x, -1e-10);
      EXPECT_LE(x, 1 + 1e-10);
    }
  }
}

TEST(CorrelatorProperty, PairCountFromDensities) {
  for (auto& s : random_instances(303, 6, 7)) {
    auto r = correlator_report(s.model, s.roots.roots);
    double off = 0.0;
    for (Eigen::Index i = 0; i < r.density_density.rows(); ++i)
      for (Eigen::Index j = 0; j < r.density_density.cols(); ++j)
        if (i != j) off += r.density_density(i, j);
    double mm = s.model.pairs;
    EXPECT_NEAR(off, mm * (mm - 1), 1e-8);
  }
}

TEST(CorrelatorProperty, StrongCouplingStillAgrees) {
  std::vector<double> xi;
  for (int i = 0; i < 8; ++i) xi.push_back(-1.0 + 2.0 * i / 7.0);
  auto m = make_model(xi, 4, 2.0);
  auto t = ground_state(m).roots;
  Sector sec(m);
  cvec v = sigma_plus_state(m, t);
  Correlators c(m, t);
  EXPECT_NEAR(c.pairing(), expectation(v, sec.pair_operator()).real(), 1e-8);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(c.occupation(i), expectation(v, sec.number(i)).real(), 1e-8);
}

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "linalg.hpp"
#include "model.hpp"
#include "solver.hpp"

namespace richardson {

struct NormMatrix {
  cmat entries;
  LogDet det;
  Eigen::PartialPivLU<cmat> lu;

  Eigen::Index size() const { return entries.rows(); }
  cplx det_value() const { return det.value(); }
  bool singular() const { return det.zero(); }
  cvec solve(const cvec& b) const {
    if (size() == 0) return cvec();
    if (singular()) throw singular_matrix("norm matrix is singular");
    return lu.solve(b);
  }
};

namespace detail {

inline void require_rational_half(const PairingModel& m) {
  if (m.kind != Kind::rational) throw config_error("determinant correlators cover the rational kind only");
  if (!m.spin_half()) throw config_error("determinant correlators need unit degeneracies");
}

inline void require_separated(const std::vector<cplx>& t, const std::vector<double>& xi) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    double sc = 1.0 + std::abs(t[i]);
    for (std::size_t k = 0; k < i; ++k)
      if (std::abs(t[i] - t[k]) < 1e-8 * sc) throw coincident_roots("roots closer than 1e-8");
    for (double x : xi)
      if (std::abs(t[i] - x) < 1e-14 * sc) throw pole_collision("root on a level");
  }
}

// column with entries 1/(t_a - x)^2
inline cvec inv_sq(const std::vector<cplx>& t, cplx x) {
  cvec v(t.size());
  for (std::size_t a = 0; a < t.size(); ++a) v(a) = 1.0 / ((t[a] - x) * (t[a] - x));
  return v;
}

}  // namespace detail

inline NormMatrix norm_matrix(const PairingModel& m, const std::vector<cplx>& t) {
  detail::require_rational_half(m);
  detail::require_separated(t, m.levels);
  const auto M = static_cast<Eigen::Index>(t.size());
  NormMatrix nm;
  nm.entries = cmat::Zero(M, M);
  for (Eigen::Index i = 0; i < M; ++i) {
    cplx s = 0.0;
    for (double x : m.levels) s += 1.0 / ((t[i] - x) * (t[i] - x));
    for (Eigen::Index a = 0; a < M; ++a) {
      if (a == i) continue;
      cplx p = 2.0 / ((t[i] - t[a]) * (t[i] - t[a]));
      s -= p;
      nm.entries(i, a) = p;
    }
    nm.entries(i, i) = s;
  }
  if (M > 0) {
    nm.lu.compute(nm.entries);
    nm.det = logdet(nm.lu);
  }
  return nm;
}

// det(N + phi c^T) through the stored factorization.
inline cplx rank_one_det(const NormMatrix& base, const cvec& c, const cvec& phi) {
  if (base.size() == 0) return 1.0;
  if (!base.singular()) {
    cvec x = base.lu.solve(phi);
    return base.det_value() * (1.0 + (c.transpose() * x)(0));
  }
  // column-replacement expansion: det N + sum_k c_k det(N with column k = phi)
  cplx s = logdet(base.entries).value();
  for (Eigen::Index k = 0; k < base.size(); ++k) {
    cmat a = base.entries;
    a.col(k) = phi;
    s += c(k) * logdet(a).value();
  }
  return s;
}

// Bilinear overlap <0|Sigma-(lambda_1)..Sigma-(lambda_M) Sigma+(t_1)..Sigma+(t_M)|0>
// for on-shell t and arbitrary distinct lambda.
inline cplx scalar_product(const PairingModel& m, const std::vector<cplx>& lambda, const std::vector<cplx>& t) {
  detail::require_rational_half(m);
  if (lambda.size() != t.size()) throw config_error("lambda and roots differ in length");
  const std::size_t M = t.size();
  for (std::size_t j = 0; j < M; ++j) {
    double sc = 1.0 + std::abs(lambda[j]);
    for (std::size_t k = 0; k < j; ++k)
      if (std::abs(lambda[j] - lambda[k]) <= 1e-14 * sc) throw coincident_roots("repeated lambda");
    for (std::size_t i = 0; i < M; ++i)
      if (std::abs(lambda[j] - t[i]) <= 1e-14 * sc) throw pole_collision("lambda collides with a root");
    for (double x : m.levels)
      if (std::abs(lambda[j] - x) <= 1e-14 * sc) throw pole_collision("lambda collides with a level");
  }
  if (M == 0) return 1.0;
  cmat mh(M, M);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) {
      cplx s = 1.0 / m.coupling;
      for (double x : m.levels) s += 1.0 / (lambda[j] - x);
      for (std::size_t k = 0; k < M; ++k)
        if (k != i) s -= 2.0 / (lambda[j] - t[k]);
      mh(i, j) = s / ((t[i] - lambda[j]) * (t[i] - lambda[j]));
    }
  LogDet d = logdet(mh);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) d *= (t[i] - lambda[j]);
  LogDet den;
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i + 1; j < M; ++j) den *= (t[i] - t[j]) * (lambda[j] - lambda[i]);
  return ratio(d, den);
}

struct SpinSpin {
  double value = 0.0;
  cplx quadratic;
  cplx bordered;
};

struct CorrelatorReport {
  std::vector<double> occupations;
  rmat pair_transfer;
  rmat density_density;
  rmat spin_spin;
  double pairing = 0.0;
  double weighted_occupation = 0.0;  // <sum xi n>
  double imag_leakage = 0.0;
  double conservation_residual = 0.0;
  double energy_identity_residual = 0.0;
  double spin_path_discrepancy = 0.0;
  double composition_residual = 0.0;
};

// Determinant correlators for one converged root set (rational, spin-1/2).
class Correlators {
 public:
  Correlators(const PairingModel& m, const std::vector<cplx>& roots)
      : m_(m), t_(roots), norm_(norm_matrix(m, roots)) {
    if (norm_.size() > 0 && norm_.singular()) throw singular_matrix("norm matrix is singular");
    u_.reserve(m.size());
    x_.reserve(m.size());
    for (double xi : m.levels) {
      u_.push_back(detail::inv_sq(t_, xi));
      x_.push_back(norm_.solve(u_.back()));
    }
  }

  const NormMatrix& norm() const { return norm_; }
  double imag_leakage() const { return leak_; }

  cplx occupation_c(std::size_t l) const { return x_[l].sum(); }
  double occupation(std::size_t l) const { return real(occupation_c(l)); }

  // <b_i^dagger b_j>
  cplx pair_transfer_c(std::size_t i, std::size_t j) const {
    if (i == j) return occupation_c(i);
    const cplx x2 = m_.levels[i], x1 = m_.levels[j];
    const auto M = t_.size();
    const cvec& X = x_[j];
    const cvec& Y = x_[i];
    cplx first = 0.0;
    for (std::size_t b = 0; b < M; ++b) first += (t_[b] - x2) / (t_[b] - x1) * Y(b);
    cplx second = 0.0;
    for (std::size_t k = 0; k < M; ++k)
      for (std::size_t l = k + 1; l < M; ++l)
        second += (t_[k] - x2) * (t_[l] - x2) * (X(k) * Y(l) - X(l) * Y(k)) / ((t_[k] - t_[l]) * (x2 - x1));
    return first - 2.0 * second;
  }
  double pair_transfer(std::size_t i, std::size_t j) const { return real(pair_transfer_c(i, j)); }

  // Same quantity with every determinant formed explicitly (column
  // replacement + fresh LU), used to cross-check the rank-two update.
  cplx pair_transfer_explicit(std::size_t i, std::size_t j) const {
    if (i == j) return occupation_c(i);
    const cplx x2 = m_.levels[i], x1 = m_.levels[j];
    const auto M = static_cast<Eigen::Index>(t_.size());
    const cmat& n = norm_.entries;
    cmat h1(M, M);
    for (Eigen::Index a = 0; a < M; ++a)
      for (Eigen::Index b = 0; b < M; ++b)
        h1(a, b) = 1.0 / ((t_[a] - x2) * (t_[a] - x2)) * (t_[b] - x2) / (t_[b] - x1);
    cplx v = ratio(logdet(cmat(n + h1)), norm_.det) - 1.0;
    for (Eigen::Index k = 0; k < M; ++k)
      for (Eigen::Index l = k + 1; l < M; ++l) {
        cmat a = n;
        for (Eigen::Index r = 0; r < M; ++r) {
          a(r, k) = (t_[k] - x2) / ((t_[r] - x1) * (t_[r] - x1));
          a(r, l) = (t_[l] - x2) / ((t_[r] - x2) * (t_[r] - x2));
        }
        v -= 2.0 / ((t_[k] - t_[l]) * (x2 - x1)) * ratio(logdet(a), norm_.det);
      }
    return v;
  }

  // <n_i n_j>
  cplx density_density_c(std::size_t i, std::size_t j) const {
    if (i == j) return occupation_c(i);
    const cplx x2 = m_.levels[i], x1 = m_.levels[j];
    const auto M = t_.size();
    const cvec& X = x_[j];
    const cvec& Y = x_[i];
    cplx s = 0.0;
    for (std::size_t k = 0; k < M; ++k)
      for (std::size_t l = 0; l < M; ++l) {
        if (k == l) continue;
        s += (t_[k] - x2) * (t_[l] - x1) / ((t_[k] - t_[l]) * (x2 - x1)) * (X(k) * Y(l) - X(l) * Y(k));
      }
    return s;
  }
  double density_density(std::size_t i, std::size_t j) const { return real(density_density_c(i, j)); }

  // <sigma_i . sigma_j> by the quadratic form and by the bordered determinant.
  SpinSpin spin_spin(std::size_t i, std::size_t j) const {
    SpinSpin s;
    if (i == j) {
      s.value = 3.0;
      s.quadratic = s.bordered = 3.0;
      return s;
    }
    const double dx = m_.levels[i] - m_.levels[j];
    const auto M = static_cast<Eigen::Index>(t_.size());
    s.quadratic = 1.0 - 2.0 * dx * dx * (u_[i].transpose() * x_[j])(0);
    cmat r = cmat::Zero(M + 1, M + 1);
    r.bottomRightCorner(M, M) = norm_.entries;
    r.block(1, 0, M, 1) = u_[j];
    r.block(0, 1, 1, M) = u_[i].transpose();
    s.bordered = M == 0 ? cplx(1.0) : 1.0 + 2.0 * dx * dx * ratio(logdet(r), norm_.det);
    s.value = real(0.5 * (s.quadratic + s.bordered));
    return s;
  }

  // <S+S-> = g^-2 sum_ij (N^-1)_ij
  double pairing() const {
    if (t_.empty()) return 0.0;
    cvec one = cvec::Ones(static_cast<Eigen::Index>(t_.size()));
    return real(norm_.solve(one).sum() / (m_.coupling * m_.coupling));
  }

  // <sum_alpha xi_alpha n_alpha> via phi_i = sum_alpha xi_alpha/(t_i - xi_alpha)^2
  double weighted_occupation() const {
    if (t_.empty()) return 0.0;
    cvec phi = cvec::Zero(static_cast<Eigen::Index>(t_.size()));
    for (std::size_t a = 0; a < m_.size(); ++a) phi += m_.levels[a] * u_[a];
    return real(norm_.solve(phi).sum());
  }

  double energy() const {
    cplx s = 0.0;
    for (auto z : t_) s += z;
    return s.real();
  }

  CorrelatorReport report() const {
    const std::size_t n = m_.size();
    CorrelatorReport r;
    r.occupations.resize(n);
    r.pair_transfer = rmat::Zero(n, n);
    r.density_density = rmat::Zero(n, n);
    r.spin_spin = rmat::Zero(n, n);
    double sum_n = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r.occupations[i] = occupation(i);
      sum_n += r.occupations[i];
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        r.pair_transfer(i, j) = pair_transfer(i, j);
        r.density_density(i, j) = density_density(i, j);
        auto ss = spin_spin(i, j);
        r.spin_spin(i, j) = ss.value;
        r.spin_path_discrepancy = std::max(r.spin_path_discrepancy, std::abs(ss.quadratic - ss.bordered));
        if (i != j) {
          double comp = 2.0 * (r.pair_transfer(i, j) + pair_transfer(j, i)) + 4.0 * r.density_density(i, j) -
                        2.0 * r.occupations[i] - 2.0 * r.occupations[j] + 1.0;
          r.composition_residual = std::max(r.composition_residual, std::abs(comp - ss.value));
        }
      }
    r.pairing = pairing();
    r.weighted_occupation = weighted_occupation();
    r.conservation_residual = std::abs(sum_n - m_.pairs);
    r.energy_identity_residual = std::abs(r.weighted_occupation - m_.coupling * r.pairing - energy());
    r.imag_leakage = leak_;
    return r;
  }

 private:
  double real(cplx z) const {
    leak_ = std::max(leak_, std::abs(z.imag()));
    return z.real();
  }

  PairingModel m_;
  std::vector<cplx> t_;
  NormMatrix norm_;
  std::vector<cvec> u_;  // u_l(a) = 1/(t_a - xi_l)^2
  std::vector<cvec> x_;  // N^-1 u_l
  mutable double leak_ = 0.0;
};

inline double occupation(const PairingModel& m, const std::vector<cplx>& t, std::size_t l) {
  return Correlators(m, t).occupation(l);
}
inline double pair_transfer(const PairingModel& m, const std::vector<cplx>& t, std::size_t i, std::size_t j) {
  return Correlators(m, t).pair_transfer(i, j);
}
inline double density_density(const PairingModel& m, const std::vector<cplx>& t, std::size_t i, std::size_t j) {
  return Correlators(m, t).density_density(i, j);
}
inline SpinSpin spin_spin(const PairingModel& m, const std::vector<cplx>& t, std::size_t i, std::size_t j) {
  return Correlators(m, t).spin_spin(i, j);
}
inline double pairing_amplitude(const PairingModel& m, const std::vector<cplx>& t) {
  return Correlators(m, t).pairing();
}
inline CorrelatorReport correlator_report(const PairingModel& m, const std::vector<cplx>& t) {
  return Correlators(m, t).report();
}

}  // namespace richardson

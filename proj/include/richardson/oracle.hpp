#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Eigenvalues>

#include "linalg.hpp"
#include "model.hpp"
#include "solver.hpp"

namespace richardson {

// Fixed-M occupation basis.  Configurations hold the pair count on each
// level (0..d_alpha) and are listed in decreasing lexicographic order, so the
// first entry fills site 1 first: for N=2, M=1 the order is |10>, |01>.
class SectorBasis {
 public:
  SectorBasis(std::vector<int> degeneracies, int pairs, std::size_t cap = 200000)
      : deg_(std::move(degeneracies)), pairs_(pairs) {
    if (pairs < 0) throw config_error("negative pair count");
    std::vector<int> cur(deg_.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t a, int left) {
      if (a == deg_.size()) {
        if (left == 0) {
          if (configs_.size() >= cap) throw cap_exceeded("sector dimension exceeds cap");
          index_.emplace(key(cur), configs_.size());
          configs_.push_back(cur);
        }
        return;
      }
      for (int k = std::min(left, deg_[a]); k >= 0; --k) {
        cur[a] = k;
        rec(a + 1, left - k);
      }
      cur[a] = 0;
    };
    rec(0, pairs);
  }

  std::size_t dim() const { return configs_.size(); }
  std::size_t sites() const { return deg_.size(); }
  int pairs() const { return pairs_; }
  int degeneracy(std::size_t a) const { return deg_[a]; }
  const std::vector<int>& degeneracies() const { return deg_; }
  const std::vector<int>& config(std::size_t k) const { return configs_[k]; }

  std::optional<std::size_t> find(const std::vector<int>& c) const {
    auto it = index_.find(key(c));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::uint64_t key(const std::vector<int>& c) const {
    std::uint64_t k = 0;
    for (std::size_t a = 0; a < c.size(); ++a) k = k * std::uint64_t(deg_[a] + 1) + std::uint64_t(c[a]);
    return k;
  }

  std::vector<int> deg_;
  int pairs_;
  std::vector<std::vector<int>> configs_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

using OperatorMatrix = cmat;

// Ladder amplitude <m+1|S+|m> for a level holding up to d pairs.
inline double raise_amp(int d, int m) { return std::sqrt(double(d - m) * double(m + 1)); }

// Operator builder on one sector of a model.
class Sector {
 public:
  Sector(const PairingModel& m, int pairs, std::size_t cap = 200000)
      : model_(m), basis_(m.degeneracies, pairs, cap) {}
  explicit Sector(const PairingModel& m) : Sector(m, m.pairs) {}

  const SectorBasis& basis() const { return basis_; }
  std::size_t dim() const { return basis_.dim(); }

  cmat number(std::size_t i) const {
    cmat o = cmat::Zero(dim(), dim());
    for (std::size_t k = 0; k < dim(); ++k) o(k, k) = basis_.config(k)[i];
    return o;
  }

  // b_i^dagger b_j (ladder operators for higher degeneracy)
  cmat hop(std::size_t i, std::size_t j) const {
    cmat o = cmat::Zero(dim(), dim());
    for (std::size_t k = 0; k < dim(); ++k) {
      auto c = basis_.config(k);
      int mj = c[j];
      if (mj == 0) continue;
      double amp = raise_amp(basis_.degeneracy(j), mj - 1);
      c[j] -= 1;
      int mi = c[i];
      if (mi == basis_.degeneracy(i)) continue;
      amp *= raise_amp(basis_.degeneracy(i), mi);
      c[i] += 1;
      o(*basis_.find(c), k) += amp;
    }
    return o;
  }

  cmat density_density(std::size_t i, std::size_t j) const {
    cmat o = cmat::Zero(dim(), dim());
    for (std::size_t k = 0; k < dim(); ++k) o(k, k) = double(basis_.config(k)[i]) * basis_.config(k)[j];
    return o;
  }

  // sigma_i . sigma_j for spin-1/2 levels
  cmat sigma_sigma(std::size_t i, std::size_t j) const {
    if (i == j) return 3.0 * cmat::Identity(dim(), dim());
    cmat o = 2.0 * (hop(i, j) + hop(j, i));
    for (std::size_t k = 0; k < dim(); ++k)
      o(k, k) += double(2 * basis_.config(k)[i] - 1) * double(2 * basis_.config(k)[j] - 1);
    return o;
  }

  // S+S- = sum_ij b_i^dagger b_j
  cmat pair_operator() const {
    cmat o = cmat::Zero(dim(), dim());
    const std::size_t n = basis_.sites();
    for (std::size_t k = 0; k < dim(); ++k) {
      auto c = basis_.config(k);
      for (std::size_t j = 0; j < n; ++j) {
        if (c[j] == 0) continue;
        double amp = raise_amp(basis_.degeneracy(j), c[j] - 1);
        c[j] -= 1;
        for (std::size_t i = 0; i < n; ++i) {
          if (c[i] == basis_.degeneracy(i)) continue;
          double a2 = amp * raise_amp(basis_.degeneracy(i), c[i]);
          c[i] += 1;
          o(*basis_.find(c), k) += a2;
          c[i] -= 1;
        }
        c[j] += 1;
      }
    }
    return o;
  }

  // 2 S_i . S_l for i != l
  cmat spin_exchange(std::size_t i, std::size_t l) const {
    cmat o = hop(i, l) + hop(l, i);
    for (std::size_t k = 0; k < dim(); ++k) {
      const auto& c = basis_.config(k);
      double zi = c[i] - 0.5 * basis_.degeneracy(i);
      double zl = c[l] - 0.5 * basis_.degeneracy(l);
      o(k, k) += 2.0 * zi * zl;
    }
    return o;
  }

  cmat gaudin(std::size_t i) const {
    const auto& m = model_;
    const double g = m.coupling;
    cmat h = -number(i) / g;
    if (m.kind == Kind::rational) {
      for (std::size_t l = 0; l < m.size(); ++l)
        if (l != i) h += spin_exchange(i, l) / (m.levels[i] - m.levels[l]);
      return h;
    }
    if (!m.spin_half()) throw config_error("trigonometric operators need unit degeneracies");
    for (std::size_t l = 0; l < m.size(); ++l) {
      if (l == i) continue;
      double x = m.levels[i] - m.levels[l];
      h += (hop(i, l) + hop(l, i)) / std::sin(x);
      for (std::size_t k = 0; k < dim(); ++k) {
        int ni = basis_.config(k)[i], nl = basis_.config(k)[l];
        h(k, k) += double(ni * nl + (1 - ni) * (1 - nl)) / std::tan(x);
      }
    }
    return h;
  }

  // Pairing Hamiltonian.  For the trigonometric kind the commuting family
  // is closed with -g sum_i xi_i H_i instead.
  cmat hamiltonian() const {
    const auto& m = model_;
    cmat h = cmat::Zero(dim(), dim());
    if (m.kind == Kind::trigonometric) {
      for (std::size_t i = 0; i < m.size(); ++i) h -= m.coupling * m.levels[i] * gaudin(i);
      return h;
    }
    for (std::size_t i = 0; i < m.size(); ++i) h += m.levels[i] * number(i);
    return h - m.coupling * pair_operator();
  }

 private:
  PairingModel model_;
  SectorBasis basis_;
};

inline cmat hamiltonian_matrix(const PairingModel& m) { return Sector(m).hamiltonian(); }
inline cmat gaudin_matrix(const PairingModel& m, std::size_t i) { return Sector(m).gaudin(i); }

// sum_a c_a S+_a applied to v (a state of `from`), landing in `to`.
inline cvec apply_raise(const SectorBasis& from, const SectorBasis& to, const cvec& v,
                        const std::vector<cplx>& c) {
  cvec out = cvec::Zero(to.dim());
  for (std::size_t k = 0; k < from.dim(); ++k) {
    if (v(k) == cplx{}) continue;
    auto conf = from.config(k);
    for (std::size_t a = 0; a < conf.size(); ++a) {
      if (conf[a] == from.degeneracy(a) || c[a] == cplx{}) continue;
      double amp = raise_amp(from.degeneracy(a), conf[a]);
      conf[a] += 1;
      out(*to.find(conf)) += c[a] * amp * v(k);
      conf[a] -= 1;
    }
  }
  return out;
}

// Coefficients of Sigma+(t): 1/(t - xi) or 1/sin(t - xi).
inline std::vector<cplx> sigma_plus_coefficients(const PairingModel& m, cplx t) {
  std::vector<cplx> c(m.size());
  for (std::size_t a = 0; a < m.size(); ++a) {
    cplx z = t - m.levels[a];
    double dist = m.kind == Kind::rational ? std::abs(z) : std::abs(std::sin(z));
    if (dist <= 1e-14 * (1.0 + std::abs(t))) throw pole_collision("Sigma+ argument on a level");
    c[a] = m.kind == Kind::rational ? 1.0 / z : 1.0 / std::sin(z);
  }
  return c;
}

inline cvec vacuum() { return cvec::Ones(1); }

// Sigma+(t_1) ... Sigma+(t_M)|0>, in the M = |t| sector.
inline cvec sigma_plus_state(const PairingModel& m, const std::vector<cplx>& t) {
  cvec v = vacuum();
  SectorBasis cur(m.degeneracies, 0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    SectorBasis next(m.degeneracies, int(k + 1));
    v = apply_raise(cur, next, v, sigma_plus_coefficients(m, t[k]));
    cur = std::move(next);
  }
  return v;
}

inline cplx expectation(const cvec& state, const cmat& op) {
  if (op.rows() != state.size() || op.cols() != state.size()) throw config_error("dimension mismatch");
  double n = state.squaredNorm();
  if (n == 0.0) throw numerical_error("zero-norm state");
  return state.dot(op * state) / n;
}

inline double hermiticity_defect(const cmat& op) {
  double n = op.norm();
  return n == 0.0 ? 0.0 : (op - op.adjoint()).norm() / n;
}

inline std::vector<double> ed_spectrum(const cmat& op) {
  if (hermiticity_defect(op) > 1e-12) throw numerical_error("operator is not Hermitian");
  if (op.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<cmat> es(op, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

struct Eigensystem {
  rvec values;
  cmat vectors;
};

inline Eigensystem ed_eigensystem(const cmat& op) {
  if (hermiticity_defect(op) > 1e-12) throw numerical_error("operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<cmat> es(op);
  return {es.eigenvalues(), es.eigenvectors()};
}

inline std::vector<cplx> drop(const std::vector<cplx>& t, std::size_t j) {
  std::vector<cplx> r;
  for (std::size_t k = 0; k < t.size(); ++k)
    if (k != j) r.push_back(t[k]);
  return r;
}

struct OffshellReport {
  cvec lhs;                    // H_i |t>
  cvec eigen_term;             // E_i(t) |t>
  std::vector<cvec> unwanted;  // f(t_j) w(t_j - xi_i) b_i^dagger |t(j)>
  double residual = 0.0;       // relative norm of lhs - (eigen_term - sum unwanted)
  std::vector<double> term_norms;
};

// H_i|t> = E_i(t)|t> - sum_j f(t_j)/(t_j - xi_i) b_i^dagger |t(j)>, valid for
// arbitrary t.  The trigonometric kind uses 1/sin(t_j - xi_i).
inline OffshellReport hi_action_offshell(const PairingModel& m, const std::vector<cplx>& t, std::size_t i) {
  if (!m.spin_half()) throw config_error("off-shell identity implemented for unit degeneracies");
  OffshellReport r;
  const int mm = int(t.size());
  Sector sec(m, mm);
  cvec state = sigma_plus_state(m, t);
  r.lhs = sec.gaudin(i) * state;
  auto e = gaudin_eigenvalues_complex(m, t);
  r.eigen_term = e[i] * state;
  Equations eq = Equations::of(m);
  auto f = eq.residual(t);
  SectorBasis lower(m.degeneracies, mm - 1);
  cvec rhs = r.eigen_term;
  for (int j = 0; j < mm; ++j) {
    cvec sub = sigma_plus_state(m, drop(t, j));
    std::vector<cplx> c(m.size(), 0.0);
    cplx z = t[j] - m.levels[i];
    c[i] = f[j] * (m.kind == Kind::rational ? 1.0 / z : 1.0 / std::sin(z));
    cvec term = apply_raise(lower, sec.basis(), sub, c);
    r.term_norms.push_back(term.norm());
    rhs -= term;
    r.unwanted.push_back(std::move(term));
  }
  double scale = std::max({r.lhs.norm(), r.eigen_term.norm(), 1e-300});
  r.residual = (r.lhs - rhs).norm() / scale;
  return r;
}

struct HActionReport {
  double residual = 0.0;
  double unwanted_norm = 0.0;
};

// (H - sum t)|t> = -g sum_j f(t_j) S+ |t(j)>, rational kind.
inline HActionReport h_action_offshell(const PairingModel& m, const std::vector<cplx>& t) {
  if (m.kind != Kind::rational) throw config_error("rational kind only");
  const int mm = int(t.size());
  Sector sec(m, mm);
  cvec state = sigma_plus_state(m, t);
  cplx sum = 0.0;
  for (auto z : t) sum += z;
  cvec lhs = sec.hamiltonian() * state - sum * state;
  auto f = Equations::of(m).residual(t);
  SectorBasis lower(m.degeneracies, mm - 1);
  cvec rhs = cvec::Zero(sec.dim());
  std::vector<cplx> ones(m.size(), 1.0);
  for (int j = 0; j < mm; ++j)
    rhs -= m.coupling * f[j] * apply_raise(lower, sec.basis(), sigma_plus_state(m, drop(t, j)), ones);
  HActionReport r;
  r.unwanted_norm = rhs.norm();
  double scale = std::max({lhs.norm(), rhs.norm(), (sec.hamiltonian() * state).norm(), 1e-300});
  r.residual = (lhs - rhs).norm() / scale;
  return r;
}

}  // namespace richardson

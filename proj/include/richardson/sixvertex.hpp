#pragma once

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "linalg.hpp"

// Finite-eta rational six-vertex laboratory on the full 2^N space.
//
// Conventions: qubit 0 is the most significant bit, bit value 1 = occupied
// (spin up).  In the monodromy the auxiliary space is the last (least
// significant) factor, and the blocks are A = <up|T|up>, B = <down|T|up>,
// C = <up|T|down>, D = <down|T|down> of the auxiliary space, so that B raises
// and C lowers the number of pairs.
namespace richardson::sixvertex {

using Mat4 = Eigen::Matrix4cd;

struct SixVertexParams {
  cplx eta;
  std::vector<cplx> xi;
  double g = 1.0;

  std::size_t size() const { return xi.size(); }
  // per-site twist exponent, K0 = diag(e^{-w}, e^{w}) on (down, up)
  cplx w() const { return eta / (2.0 * g * double(xi.size())); }
};

inline void check(const SixVertexParams& p, std::size_t cap = 10) {
  if (p.eta == cplx{}) throw config_error("eta must be nonzero");
  if (p.xi.empty()) throw config_error("need at least one site");
  if (p.xi.size() > cap) throw cap_exceeded("six-vertex lab limited to N <= 10");
  for (std::size_t i = 0; i < p.xi.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (p.xi[i] == p.xi[k]) throw config_error("inhomogeneities must be distinct");
}

// (sigma . sigma) on two qubits, basis |00>,|01>,|10>,|11> with 1 = up.
inline Mat4 sigma_dot_sigma() {
  Mat4 s = Mat4::Zero();
  s(0, 0) = s(3, 3) = 1.0;
  s(1, 1) = s(2, 2) = -1.0;
  s(1, 2) = s(2, 1) = 2.0;
  return s;
}

// S_12(t1, t2) = (t1 - t2) + (eta/2)(sigma_1 . sigma_2)
inline Mat4 s_matrix(cplx t1, cplx t2, cplx eta) {
  return (t1 - t2) * Mat4::Identity() + 0.5 * eta * sigma_dot_sigma();
}

// Normalized form used inside F: S(lambda + eta/2, 0)/(lambda + eta), which
// fixes |up up> and equals the permutation at lambda = 0.
inline Mat4 r_matrix(cplx lambda, cplx eta) {
  cplx den = lambda + eta;
  if (std::abs(den) <= 1e-14 * (std::abs(lambda) + std::abs(eta))) throw pole_collision("R-matrix pole");
  return s_matrix(lambda + 0.5 * eta, 0.0, eta) / den;
}

namespace detail {

inline std::size_t bitpos(std::size_t q, std::size_t nq) { return nq - 1 - q; }

// T * O with O = op acting on qubits (p, q)
inline void apply_right(cmat& t, const Mat4& op, std::size_t p, std::size_t q, std::size_t nq) {
  const std::size_t bp = std::size_t(1) << bitpos(p, nq), bq = std::size_t(1) << bitpos(q, nq);
  const std::size_t dim = std::size_t(1) << nq;
  cmat old(t.rows(), 4);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (bp | bq)) continue;
    const std::size_t idx[4] = {base, base | bq, base | bp, base | bp | bq};
    for (int s = 0; s < 4; ++s) old.col(s) = t.col(idx[s]);
    for (int s = 0; s < 4; ++s) {
      t.col(idx[s]).setZero();
      for (int s2 = 0; s2 < 4; ++s2)
        if (op(s2, s) != cplx{}) t.col(idx[s]) += op(s2, s) * old.col(s2);
    }
  }
}

// O * T
inline void apply_left(cmat& t, const Mat4& op, std::size_t p, std::size_t q, std::size_t nq) {
  const std::size_t bp = std::size_t(1) << bitpos(p, nq), bq = std::size_t(1) << bitpos(q, nq);
  const std::size_t dim = std::size_t(1) << nq;
  cmat old(4, t.cols());
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (bp | bq)) continue;
    const std::size_t idx[4] = {base, base | bq, base | bp, base | bp | bq};
    for (int s = 0; s < 4; ++s) old.row(s) = t.row(idx[s]);
    for (int s = 0; s < 4; ++s) {
      t.row(idx[s]).setZero();
      for (int s2 = 0; s2 < 4; ++s2)
        if (op(s, s2) != cplx{}) t.row(idx[s]) += op(s, s2) * old.row(s2);
    }
  }
}

inline int occ(std::size_t state, std::size_t i, std::size_t n) { return int((state >> bitpos(i, n)) & 1u); }

inline cplx ctil(cplx x, cplx eta) { return x / (x + eta); }
inline cplx btil(cplx x, cplx eta) { return eta / (x + eta); }

}  // namespace detail

struct MonodromyBlocks {
  cmat a, b, c, d;
};

// T(t) = K0 S_10(xi_1, t) K0 S_20(xi_2, t) ... K0 S_N0(xi_N, t)
inline cmat monodromy_matrix(const SixVertexParams& p, cplx t) {
  check(p);
  const std::size_t n = p.size(), nq = n + 1;
  const std::size_t dim = std::size_t(1) << nq;
  cmat m = cmat::Identity(dim, dim);
  const cplx w = p.w();
  Mat4 k0 = Mat4::Zero();  // acts on (site, aux) as identity x K0
  k0(0, 0) = k0(2, 2) = std::exp(-w);
  k0(1, 1) = k0(3, 3) = std::exp(w);
  for (std::size_t i = 0; i < n; ++i) detail::apply_right(m, k0 * s_matrix(p.xi[i], t, p.eta), i, n, nq);
  return m;
}

inline MonodromyBlocks monodromy(const SixVertexParams& p, cplx t) {
  cmat m = monodromy_matrix(p, t);
  const Eigen::Index half = m.rows() / 2;
  auto block = [&](int a, int b) {
    cmat x(half, half);
    for (Eigen::Index r = 0; r < half; ++r)
      for (Eigen::Index c = 0; c < half; ++c) x(r, c) = m(2 * r + a, 2 * c + b);
    return x;
  };
  return {block(1, 1), block(0, 1), block(1, 0), block(0, 0)};
}

inline cmat transfer_matrix(const SixVertexParams& p, cplx t) {
  auto m = monodromy(p, t);
  return m.a + m.d;
}

// F = F_1 ... F_N with F_i = (1 - n_i) + T_i n_i and
// T_i = R_{i+1,i}(xi_{i+1} - xi_i) ... R_{N,i}(xi_N - xi_i).  `order` relabels
// the sites (identity order by default).
inline cmat f_operator(const SixVertexParams& p, std::vector<std::size_t> order = {}) {
  check(p);
  const std::size_t n = p.size();
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && std::abs(p.xi[a] - p.xi[b] - p.eta) <= 1e-13 * (1.0 + std::abs(p.eta)))
        throw singular_matrix("F is singular: xi_k - xi_i = eta");
  const std::size_t dim = std::size_t(1) << n;
  cmat f = cmat::Identity(dim, dim);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t i = order[pos];
    cmat ft = f;
    for (std::size_t later = pos + 1; later < n; ++later) {
      const std::size_t k = order[later];
      detail::apply_right(ft, r_matrix(p.xi[k] - p.xi[i], p.eta), k, i, n);
    }
    for (std::size_t c = 0; c < dim; ++c)
      if (detail::occ(c, i, n)) f.col(c) = ft.col(c);
  }
  return f;
}

// Diagonal gauge prod_k exp(k w sigma^z_k) (k = 1..N) that carries the
// per-site twist.
inline cvec twist_gauge(const SixVertexParams& p) {
  const std::size_t n = p.size(), dim = std::size_t(1) << n;
  cvec q(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    cplx e = 0.0;
    for (std::size_t k = 0; k < n; ++k) e += double(k + 1) * p.w() * double(2 * detail::occ(s, k, n) - 1);
    q(s) = std::exp(e);
  }
  return q;
}

// Q^-1 F: conjugating the twisted monodromy with it gives the F-basis forms.
inline cmat twisted_f_operator(const SixVertexParams& p) {
  cvec q = twist_gauge(p);
  return q.cwiseInverse().asDiagonal() * f_operator(p);
}

struct FBasisOperators {
  cmat a, b, c;
};

// Closed-form F-basis operators, built site by site from c~ and b~.
inline FBasisOperators fbasis_formulas(const SixVertexParams& p, cplx t) {
  check(p);
  using detail::btil;
  using detail::ctil;
  using detail::occ;
  const std::size_t n = p.size(), dim = std::size_t(1) << n;
  const cplx eta = p.eta;
  for (auto x : p.xi)
    if (std::abs(x - t + eta) <= 1e-14 * (1.0 + std::abs(t))) throw pole_collision("c~/b~ pole");
  FBasisOperators o{cmat::Zero(dim, dim), cmat::Zero(dim, dim), cmat::Zero(dim, dim)};
  for (std::size_t s = 0; s < dim; ++s) {
    cplx a = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!occ(s, i, n)) a *= ctil(p.xi[i] - t, eta);
    o.a(s, s) = a;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t flip = s ^ (std::size_t(1) << detail::bitpos(i, n));
      if (!occ(s, i, n)) {
        cplx v = btil(p.xi[i] - t, eta);
        for (std::size_t k = 0; k < n; ++k)
          if (k != i && !occ(s, k, n)) v *= ctil(p.xi[k] - t, eta) / ctil(p.xi[k] - p.xi[i], eta);
        o.b(flip, s) += v;
      } else {
        cplx v = btil(p.xi[i] - t, eta);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i) continue;
          v *= occ(s, k, n) ? 1.0 / ctil(p.xi[i] - p.xi[k], eta) : ctil(p.xi[k] - t, eta);
        }
        o.c(flip, s) += v;
      }
    }
  }
  return o;
}

// C- = -sum_i sigma_i^- prod_{k != i} ((1 - n_k) + n_k / c~(xi_i - xi_k))
inline cmat c_minus(const SixVertexParams& p) {
  const std::size_t n = p.size(), dim = std::size_t(1) << n;
  cmat c = cmat::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s)
    for (std::size_t i = 0; i < n; ++i) {
      if (!detail::occ(s, i, n)) continue;
      cplx v = -1.0;
      for (std::size_t k = 0; k < n; ++k)
        if (k != i && detail::occ(s, k, n)) v /= detail::ctil(p.xi[i] - p.xi[k], p.eta);
      c(s ^ (std::size_t(1) << detail::bitpos(i, n)), s) += v;
    }
  return c;
}

// B+ = -sum_i sigma_i^+ prod_{k != i} (n_k + (1 - n_k) / c~(xi_k - xi_i))
inline cmat b_plus(const SixVertexParams& p) {
  const std::size_t n = p.size(), dim = std::size_t(1) << n;
  cmat b = cmat::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s)
    for (std::size_t i = 0; i < n; ++i) {
      if (detail::occ(s, i, n)) continue;
      cplx v = -1.0;
      for (std::size_t k = 0; k < n; ++k)
        if (k != i && !detail::occ(s, k, n)) v /= detail::ctil(p.xi[k] - p.xi[i], p.eta);
      b(s ^ (std::size_t(1) << detail::bitpos(i, n)), s) += v;
    }
  return b;
}

inline cmat commutator(const cmat& x, const cmat& y) { return x * y - y * x; }

// D^F = A^F + [B^F, C-]
inline cmat d_formula(const SixVertexParams& p, cplx t) {
  auto f = fbasis_formulas(p, t);
  return f.a + commutator(f.b, c_minus(p));
}

inline cmat bilocal_hamiltonian(const SixVertexParams& p) { return commutator(b_plus(p), c_minus(p)); }

struct BlockFit {
  double residual = 0.0;      // ||Y - alpha Z|| / ||Y|| after the scalar fit
  double raw_residual = 0.0;  // ||Y - Z|| / ||Y||
  cplx scalar;                // fitted alpha
  cplx predicted;             // e^{+-N w} prod (xi - t + eta/2)
  double scalar_deviation = 0.0;
};

struct FBasisReport {
  BlockFit a, b, c, d;
  bool pass = false;
  double max_residual() const { return std::max({a.residual, b.residual, c.residual, d.residual}); }
  double max_scalar_deviation() const {
    return std::max({a.scalar_deviation, b.scalar_deviation, c.scalar_deviation, d.scalar_deviation});
  }
};

inline BlockFit fit_block(const cmat& y, const cmat& z, cplx predicted) {
  BlockFit f;
  double zz = z.squaredNorm();
  f.scalar = zz == 0.0 ? cplx(0.0) : cplx(z.conjugate().cwiseProduct(y).sum() / zz);
  double yn = y.norm();
  f.residual = yn == 0.0 ? (z.norm() == 0.0 ? 0.0 : 1.0) : (y - f.scalar * z).norm() / yn;
  f.raw_residual = yn == 0.0 ? z.norm() : (y - z).norm() / yn;
  f.predicted = predicted;
  f.scalar_deviation = std::abs(f.scalar / predicted - 1.0);
  return f;
}

// Conjugates the monodromy blocks with the (gauge-dressed) F and compares
// with the closed forms taken at the spectral parameter t + eta/2.
inline FBasisReport verify_fbasis(const SixVertexParams& p, cplx t, double tol = 1e-10) {
  auto blocks = monodromy(p, t);
  cmat f = twisted_f_operator(p);
  Eigen::PartialPivLU<cmat> lu(f);
  auto conj = [&](const cmat& x) { return cmat(lu.solve(x * f)); };
  const cplx ts = t + 0.5 * p.eta;
  auto forms = fbasis_formulas(p, ts);
  cmat df = forms.a + commutator(forms.b, c_minus(p));
  cplx pref = 1.0;
  for (auto x : p.xi) pref *= x - t + 0.5 * p.eta;
  const cplx nw = double(p.size()) * p.w();
  FBasisReport r;
  r.a = fit_block(conj(blocks.a), forms.a, std::exp(nw) * pref);
  r.b = fit_block(conj(blocks.b), forms.b, std::exp(nw) * pref);
  r.c = fit_block(conj(blocks.c), forms.c, std::exp(-nw) * pref);
  r.d = fit_block(conj(blocks.d), df, std::exp(-nw) * pref);
  // the fitted scalar must be the closed-form prefactor, not a free per-t factor
  r.pass = r.max_residual() <= tol && r.max_scalar_deviation() <= 1e-8;
  return r;
}

// Yang-Baxter relation for the S-matrix in difference form.  The rapidities
// enter as S_ab(t_a + eta/2, t_b), i.e. the Yang form (t_a - t_b) + eta P.
inline double yang_baxter_residual(cplx t1, cplx t2, cplx t3, cplx eta, bool shifted = true) {
  const cplx h = shifted ? 0.5 * eta : 0.0;
  cmat l = cmat::Identity(8, 8), r = cmat::Identity(8, 8);
  detail::apply_right(l, s_matrix(t1 + h, t2, eta), 0, 1, 3);
  detail::apply_right(l, s_matrix(t1 + h, t3, eta), 0, 2, 3);
  detail::apply_right(l, s_matrix(t2 + h, t3, eta), 1, 2, 3);
  detail::apply_right(r, s_matrix(t2 + h, t3, eta), 1, 2, 3);
  detail::apply_right(r, s_matrix(t1 + h, t3, eta), 0, 2, 3);
  detail::apply_right(r, s_matrix(t1 + h, t2, eta), 0, 1, 3);
  return rel_diff(l, r);
}

// A(t)D(t-eta) - B(t)C(t-eta) and D(t)A(t-eta) - C(t)B(t-eta) against
// prod (xi - t - eta/2)(xi - t + 3 eta/2).
inline double quantum_determinant_residual(const SixVertexParams& p, cplx t) {
  auto x = monodromy(p, t), y = monodromy(p, t - p.eta);
  cplx q = 1.0;
  for (auto xi : p.xi) q *= (xi - t - 0.5 * p.eta) * (xi - t + 1.5 * p.eta);
  cmat target = q * cmat::Identity(x.a.rows(), x.a.cols());
  return std::max(rel_diff(x.a * y.d - x.b * y.c, target), rel_diff(x.d * y.a - x.c * y.b, target));
}

inline double transfer_commutator(const SixVertexParams& p, cplx t1, cplx t2) {
  cmat z1 = transfer_matrix(p, t1), z2 = transfer_matrix(p, t2);
  return commutator(z1, z2).norm() / (z1.norm() * z2.norm());
}

// Columns of Q^-1 F are proportional to B(xi_{n_1} - eta/2)...B(xi_{n_M} - eta/2)|0>.
inline double f_column_residual(const SixVertexParams& p) {
  const std::size_t n = p.size(), dim = std::size_t(1) << n;
  cmat f = twisted_f_operator(p);
  std::vector<cmat> bs(n);
  for (std::size_t k = 0; k < n; ++k) bs[k] = monodromy(p, p.xi[k] - 0.5 * p.eta).b;
  double worst = 0.0;
  for (std::size_t s = 0; s < dim; ++s) {
    cvec v = cvec::Zero(dim);
    v(0) = 1.0;
    for (std::size_t k = 0; k < n; ++k)
      if (detail::occ(s, k, n)) v = bs[k] * v;
    cvec col = f.col(s);
    cplx alpha = v.squaredNorm() == 0.0 ? cplx(0.0) : v.dot(col) / v.squaredNorm();
    double cn = col.norm();
    worst = std::max(worst, cn == 0.0 ? v.norm() : (col - alpha * v).norm() / cn);
  }
  return worst;
}

// Finite-eta Bethe equations:
// e^{-eta/g} prod_a (t_i - xi_a - eta/2)/(t_i - xi_a + eta/2) - prod_{k != i} (t_i - t_k - eta)/(t_i - t_k + eta).
// As eta -> 0 the residual divided by eta tends to minus the Richardson residual.
inline std::vector<cplx> ba_residual(const SixVertexParams& p, double g, const std::vector<cplx>& t) {
  std::vector<cplx> r(t.size());
  const cplx eta = p.eta;
  for (std::size_t i = 0; i < t.size(); ++i) {
    cplx lhs = std::exp(-eta / g);
    for (auto x : p.xi) {
      cplx den = t[i] - x + 0.5 * eta;
      if (std::abs(den) <= 1e-14 * (1.0 + std::abs(t[i]))) throw pole_collision("Bethe equation pole");
      lhs *= (t[i] - x - 0.5 * eta) / den;
    }
    cplx rhs = 1.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k == i) continue;
      cplx den = t[i] - t[k] + eta;
      if (std::abs(den) <= 1e-14 * (1.0 + std::abs(t[i]))) throw pole_collision("Bethe equation pole");
      rhs *= (t[i] - t[k] - eta) / den;
    }
    r[i] = lhs - rhs;
  }
  return r;
}

// Operators on the 2^N space used by the quasiclassical checks.
inline cmat sigma_plus_operator(const SixVertexParams& p, cplx t) {
  const std::size_t n = p.size(), dim = std::size_t(1) << n;
  cmat s = cmat::Zero(dim, dim);
  for (std::size_t st = 0; st < dim; ++st)
    for (std::size_t i = 0; i < n; ++i)
      if (!detail::occ(st, i, n)) s(st ^ (std::size_t(1) << detail::bitpos(i, n)), st) += 1.0 / (t - p.xi[i]);
  return s;
}

// H(t) = -(1/2g) sum_i sigma^z_i/(t - xi_i) + 1/2 sum_{i<j} (sigma_i.sigma_j)/((t - xi_i)(t - xi_j))
inline cmat gaudin_generating_hamiltonian(const SixVertexParams& p, cplx t) {
  const std::size_t n = p.size(), dim = std::size_t(1) << n;
  cmat h = cmat::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s)
    for (std::size_t i = 0; i < n; ++i) h(s, s) -= (2.0 * detail::occ(s, i, n) - 1.0) / (2.0 * p.g * (t - p.xi[i]));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      cmat ss = cmat::Identity(dim, dim);
      detail::apply_right(ss, sigma_dot_sigma(), i, j, n);
      h += 0.5 * ss / ((t - p.xi[i]) * (t - p.xi[j]));
    }
  return h;
}

struct ScalingCheck {
  double error_eta = 0.0;
  double error_half = 0.0;
  double ratio = 0.0;      // error_half / error_eta
  double predicted = 0.0;  // 2^-order
  bool pass(double rel = 0.2) const { return std::abs(ratio / predicted - 1.0) <= rel; }
};

inline ScalingCheck make_scaling(double e1, double e2, int order) {
  return {e1, e2, e2 / e1, std::pow(0.5, order)};
}

// K0 S_i0 / (xi_i - t) = 1 + w sigma^z_0 + eta/(2(xi_i - t)) (sigma_0 . sigma_i) + O(eta^2)
inline ScalingCheck site_factor_expansion(const SixVertexParams& p, std::size_t i, cplx t) {
  auto err = [&](cplx eta) {
    SixVertexParams q = p;
    q.eta = eta;
    const cplx w = q.w(), u = p.xi[i] - t;
    Mat4 k0 = Mat4::Zero();
    k0(0, 0) = k0(2, 2) = std::exp(-w);
    k0(1, 1) = k0(3, 3) = std::exp(w);
    Mat4 sz0 = Mat4::Zero();
    sz0(0, 0) = sz0(2, 2) = -1.0;
    sz0(1, 1) = sz0(3, 3) = 1.0;
    Mat4 lhs = k0 * s_matrix(p.xi[i], t, eta) / u;
    Mat4 rhs = Mat4::Identity() + w * sz0 + eta / (2.0 * u) * sigma_dot_sigma();
    return (lhs - rhs).norm();
  };
  return make_scaling(err(p.eta), err(0.5 * p.eta), 2);
}

// B^F(t)/eta -> -Sigma+(t)
inline ScalingCheck b_formula_limit(const SixVertexParams& p, cplx t) {
  auto err = [&](cplx eta) {
    SixVertexParams q = p;
    q.eta = eta;
    return (fbasis_formulas(q, t).b / eta + sigma_plus_operator(p, t)).norm();
  };
  return make_scaling(err(p.eta), err(0.5 * p.eta), 1);
}

// [Z^F - 2]/eta^2 -> H(t) + 1/(4 g^2), where Z^F is the F-basis transfer
// matrix e^{Nw} A^F + e^{-Nw} D^F normalized by prod (xi - t).
inline ScalingCheck transfer_expansion(const SixVertexParams& p, cplx t) {
  cmat target = gaudin_generating_hamiltonian(p, t);
  target += cmat::Identity(target.rows(), target.cols()) / (4.0 * p.g * p.g);
  auto err = [&](cplx eta) {
    SixVertexParams q = p;
    q.eta = eta;
    const cplx ts = t + 0.5 * eta;
    auto f = fbasis_formulas(q, ts);
    cmat df = f.a + commutator(f.b, c_minus(q));
    const cplx nw = double(q.size()) * q.w();
    cplx ratio = 1.0;
    for (auto x : q.xi) ratio *= (x - t + 0.5 * eta) / (x - t);
    cmat z = ratio * (std::exp(nw) * f.a + std::exp(-nw) * df);
    z -= 2.0 * cmat::Identity(z.rows(), z.cols());
    return (z / (eta * eta) - target).norm();
  };
  return make_scaling(err(p.eta), err(0.5 * p.eta), 1);
}

// Same expansion on the untransformed transfer matrix: Z(t)/prod(xi - t).
inline ScalingCheck monodromy_expansion(const SixVertexParams& p, cplx t) {
  cmat target = gaudin_generating_hamiltonian(p, t);
  target += cmat::Identity(target.rows(), target.cols()) / (4.0 * p.g * p.g);
  auto err = [&](cplx eta) {
    SixVertexParams q = p;
    q.eta = eta;
    cplx norm = 1.0;
    for (auto x : q.xi) norm *= x - t;
    cmat z = transfer_matrix(q, t) / norm;
    z -= 2.0 * cmat::Identity(z.rows(), z.cols());
    return (z / (eta * eta) - target).norm();
  };
  return make_scaling(err(p.eta), err(0.5 * p.eta), 1);
}

}  // namespace richardson::sixvertex

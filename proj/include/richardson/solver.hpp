#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "linalg.hpp"
#include "model.hpp"

namespace richardson {

// Richardson equations with possibly complex (deformed) levels.
struct Equations {
  std::vector<cplx> xi;
  std::vector<int> d;
  double g = 1.0;
  Kind kind = Kind::rational;

  static Equations of(const PairingModel& m) {
    Equations e;
    e.xi.assign(m.levels.begin(), m.levels.end());
    e.d = m.degeneracies;
    e.g = m.coupling;
    e.kind = m.kind;
    return e;
  }

  // 1/z or cot z
  cplx kernel(cplx z) const { return kind == Kind::rational ? 1.0 / z : std::cos(z) / std::sin(z); }
  // derivative of kernel
  cplx dkernel(cplx z) const {
    if (kind == Kind::rational) return -1.0 / (z * z);
    cplx s = std::sin(z);
    return -1.0 / (s * s);
  }
  double pole_distance(cplx z) const {
    return kind == Kind::rational ? std::abs(z) : std::abs(std::sin(z));
  }

  void check(const std::vector<cplx>& t) const {
    for (std::size_t i = 0; i < t.size(); ++i) {
      double scale = 1.0 + std::abs(t[i]);
      if (!std::isfinite(t[i].real()) || !std::isfinite(t[i].imag()))
        throw numerical_error("non-finite root");
      for (std::size_t k = 0; k < i; ++k)
        if (pole_distance(t[i] - t[k]) <= 1e-13 * scale)
          throw coincident_roots("roots " + std::to_string(k) + " and " + std::to_string(i) + " coincide");
      for (const auto& x : xi)
        if (pole_distance(t[i] - x) <= 1e-14 * scale) throw pole_collision("root sits on a level");
    }
  }

  std::vector<cplx> residual(const std::vector<cplx>& t) const {
    check(t);
    std::vector<cplx> r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      cplx s = 1.0 / g;
      for (std::size_t a = 0; a < xi.size(); ++a) s += double(d[a]) * kernel(t[i] - xi[a]);
      for (std::size_t k = 0; k < t.size(); ++k)
        if (k != i) s -= 2.0 * kernel(t[i] - t[k]);
      r[i] = s;
    }
    return r;
  }

  // Magnitude of the largest contributions, used to make tolerances relative.
  std::vector<double> residual_scale(const std::vector<cplx>& t) const {
    std::vector<double> s(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      double v = 1.0 / g;
      for (std::size_t a = 0; a < xi.size(); ++a) v += d[a] * std::abs(kernel(t[i] - xi[a]));
      for (std::size_t k = 0; k < t.size(); ++k)
        if (k != i) v += 2.0 * std::abs(kernel(t[i] - t[k]));
      s[i] = v;
    }
    return s;
  }

  cmat jacobian(const std::vector<cplx>& t) const {
    check(t);
    const auto m = static_cast<Eigen::Index>(t.size());
    cmat j = cmat::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      cplx diag = 0.0;
      for (std::size_t a = 0; a < xi.size(); ++a) diag += double(d[a]) * dkernel(t[i] - xi[a]);
      for (Eigen::Index k = 0; k < m; ++k) {
        if (k == i) continue;
        cplx p = dkernel(t[i] - t[k]);
        diag -= 2.0 * p;
        j(i, k) = 2.0 * p;
      }
      j(i, i) = diag;
    }
    return j;
  }
};

inline std::vector<cplx> residual(const PairingModel& m, const std::vector<cplx>& roots) {
  return Equations::of(m).residual(roots);
}

inline cmat jacobian(const PairingModel& m, const std::vector<cplx>& roots) {
  return Equations::of(m).jacobian(roots);
}

inline double max_abs(const std::vector<cplx>& v) {
  double r = 0.0;
  for (auto z : v) r = std::max(r, std::abs(z));
  return r;
}

// Steps of the g continuation are measured in log g; the deformation
// homotopy uses the same bounds on its unit interval.
struct ContinuationSchedule {
  double g_start = 1e-3;
  double g_target = 1.0;
  double max_step = 0.25;
  double min_step = 1e-7;
  double newton_tol = 1e-12;
  int max_newton_iters = 50;
  double deformation_epsilon = 0.5;
  double collision_threshold = 1e10;
};

inline double mean_spacing(const PairingModel& m) {
  if (m.levels.size() < 2) return std::max(1.0, std::abs(m.levels.empty() ? 0.0 : m.levels[0]));
  return (m.levels.back() - m.levels.front()) / double(m.levels.size() - 1);
}

inline ContinuationSchedule default_schedule(const PairingModel& m) {
  ContinuationSchedule s;
  double sp = mean_spacing(m);
  s.g_target = m.coupling;
  s.g_start = std::min(1e-3 * sp, m.coupling);
  s.deformation_epsilon = 0.5 * sp;
  return s;
}

// Number of pairs assigned to each level in the g -> 0 limit.
struct StateLabel {
  std::vector<int> occupation;
  bool operator==(const StateLabel&) const = default;
};

inline StateLabel ground_label(const PairingModel& m) {
  StateLabel l;
  l.occupation.assign(m.size(), 0);
  int left = m.pairs;
  for (std::size_t a = 0; a < m.size() && left > 0; ++a) {
    l.occupation[a] = std::min(left, m.degeneracies[a]);
    left -= l.occupation[a];
  }
  return l;
}

inline std::vector<StateLabel> all_labels(const PairingModel& m) {
  std::vector<StateLabel> out;
  StateLabel cur;
  cur.occupation.assign(m.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t a, int left) {
    if (a == m.size()) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (int k = std::min(left, m.degeneracies[a]); k >= 0; --k) {
      cur.occupation[a] = k;
      rec(a + 1, left - k);
    }
    cur.occupation[a] = 0;
  };
  rec(0, m.pairs);
  return out;
}

inline void check_label(const PairingModel& m, const StateLabel& l) {
  if (l.occupation.size() != m.size()) throw config_error("label length differs from number of levels");
  int total = 0;
  for (std::size_t a = 0; a < m.size(); ++a) {
    if (l.occupation[a] < 0 || l.occupation[a] > m.degeneracies[a])
      throw config_error("label exceeds level capacity");
    total += l.occupation[a];
  }
  if (total != m.pairs) throw config_error("label does not hold M pairs");
}

// Zeros of the generalized Laguerre polynomial L_k^(a)(z), arbitrary real a.
inline std::vector<cplx> laguerre_zeros(int k, double a) {
  if (k <= 0) return {};
  // c_i = (-1)^i binom(k+a, k-i) / i!
  std::vector<double> c(k + 1);
  for (int i = 0; i <= k; ++i) {
    double b = 1.0;  // binom(k+a, k-i) = prod_{j=1}^{k-i} (a+i+j)/j
    for (int j = 1; j <= k - i; ++j) b *= (a + i + j) / j;
    c[i] = (i % 2 ? -b : b) / std::tgamma(i + 1.0);
  }
  if (k == 1) return {cplx(-c[0] / c[1], 0.0)};
  cmat comp = cmat::Zero(k, k);
  for (int i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) comp(i, k - 1) = -c[i] / c[k];
  Eigen::ComplexEigenSolver<cmat> es(comp, false);
  std::vector<cplx> z(es.eigenvalues().data(), es.eigenvalues().data() + k);
  std::sort(z.begin(), z.end(), [](cplx x, cplx y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); });
  return z;
}

// Leading small-g roots: t = xi + g z with z the zeros of L_k^(-d-1).
inline std::vector<cplx> seed_roots(const Equations& eq, const StateLabel& label, double g) {
  std::vector<cplx> t;
  for (std::size_t a = 0; a < eq.xi.size(); ++a) {
    int k = label.occupation[a];
    for (cplx z : laguerre_zeros(k, -eq.d[a] - 1.0)) t.push_back(eq.xi[a] + g * z);
  }
  return t;
}

struct RootSet {
  std::vector<cplx> roots;
  double g = 0.0;
  double residual = 0.0;
  bool conjugation_closed = true;
  bool converged = false;
  int newton_iterations = 0;
  int continuation_steps = 0;
  bool deformed = false;
};

inline bool is_conjugation_closed(const std::vector<cplx>& t, double tol = 1e-10) {
  std::vector<bool> used(t.size(), false);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (used[i]) continue;
    double best = INFINITY;
    std::size_t bj = i;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (used[j] && j != i) continue;
      double dd = std::abs(t[j] - std::conj(t[i]));
      if (dd < best) best = dd, bj = j;
    }
    if (best > tol * (1.0 + std::abs(t[i]))) return false;
    used[i] = used[bj] = true;
  }
  return true;
}

namespace detail {

struct NewtonResult {
  std::vector<cplx> t;
  std::vector<cplx> r;
  int iterations = 0;
  bool ok = false;
};

inline bool small_enough(const Equations& eq, const std::vector<cplx>& t, const std::vector<cplx>& r,
                         double tol) {
  auto s = eq.residual_scale(t);
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!(std::abs(r[i]) <= tol * s[i])) return false;
  return true;
}

inline double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (auto z : v) s += std::norm(z);
  return std::sqrt(s);
}

// Damped Newton; never throws on breakdown, reports ok=false instead.
inline NewtonResult newton(const Equations& eq, std::vector<cplx> t, double tol, int max_iters) {
  NewtonResult res;
  try {
    res.r = eq.residual(t);
  } catch (const numerical_error&) {
    res.t = t;
    return res;
  }
  for (int it = 0; it <= max_iters; ++it) {
    if (small_enough(eq, t, res.r, tol)) {
      res.t = t;
      res.ok = true;
      return res;
    }
    if (it == max_iters) break;
    cmat j = eq.jacobian(t);
    Eigen::PartialPivLU<cmat> lu(j);
    bool singular = false;
    for (Eigen::Index i = 0; i < j.rows(); ++i)
      if (lu.matrixLU()(i, i) == cplx{}) singular = true;
    if (singular) break;
    cvec dt = lu.solve(-to_cvec(res.r));
    if (!dt.allFinite()) break;
    // step already at the rounding level of t: nothing left to gain
    bool stalled = true;
    for (std::size_t i = 0; i < t.size(); ++i)
      stalled = stalled && std::abs(dt(static_cast<Eigen::Index>(i))) <= 4e-16 * std::max(1.0, std::abs(t[i]));
    if (stalled) {
      res.t = t;
      res.ok = true;
      return res;
    }
    double base = norm2(res.r);
    double lam = 1.0;
    std::vector<cplx> best_t;
    std::vector<cplx> best_r;
    for (int h = 0; h <= 10; ++h, lam *= 0.5) {
      std::vector<cplx> tn(t);
      for (std::size_t i = 0; i < t.size(); ++i) tn[i] += lam * dt(static_cast<Eigen::Index>(i));
      std::vector<cplx> rn;
      try {
        rn = eq.residual(tn);
      } catch (const numerical_error&) {
        continue;
      }
      best_t = std::move(tn);
      best_r = std::move(rn);
      if (norm2(best_r) < base) break;
    }
    if (best_t.empty()) break;
    t = std::move(best_t);
    res.r = std::move(best_r);
    ++res.iterations;
  }
  res.t = t;
  return res;
}

// Smallest distance between distinct roots and between roots and levels.
inline double separation(const Equations& eq, const std::vector<cplx>& t) {
  double s = INFINITY;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) s = std::min(s, eq.pole_distance(t[i] - t[k]));
    for (const auto& x : eq.xi) s = std::min(s, eq.pole_distance(t[i] - x));
  }
  return s;
}

struct collision : numerical_error {
  using numerical_error::numerical_error;
};

struct TrackStats {
  int newton = 0;
  int steps = 0;
};

// Follows a root set along eq(s), s in [0,1], from a converged start.
inline std::vector<cplx> track(const std::function<Equations(double)>& path, std::vector<cplx> t,
                               const ContinuationSchedule& sc, double span, TrackStats& stats,
                               bool watch_collisions) {
  // span: length of the path in the units of max_step/min_step
  double s = 0.0;
  double h = std::min(sc.max_step / span, 1.0) * 0.5;
  std::vector<cplx> prev;
  double hprev = 0.0;
  while (s < 1.0) {
    double step = std::min(h, 1.0 - s);
    std::vector<cplx> pred(t);
    if (!prev.empty() && hprev > 0)
      for (std::size_t i = 0; i < t.size(); ++i) pred[i] += (t[i] - prev[i]) * (step / hprev);
    Equations eq = path(s + step);
    auto nr = newton(eq, pred, sc.newton_tol, 8);
    stats.newton += nr.iterations;
    bool accept = nr.ok;
    if (accept) {
      double move = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) move = std::max(move, std::abs(nr.t[i] - pred[i]));
      double sep = std::min(separation(eq, nr.t), separation(eq, t));
      if (move > 0.2 * sep) accept = false;
    }
    if (!accept) {
      h = step * 0.5;
      if (h * span < sc.min_step) throw collision("continuation step underflow");
      continue;
    }
    if (watch_collisions && t.size() > 0 &&
        condition_number(eq.jacobian(nr.t)) > sc.collision_threshold)
      throw collision("jacobian condition number above threshold");
    prev = std::move(t);
    t = std::move(nr.t);
    hprev = step;
    s += step;
    ++stats.steps;
    h = nr.iterations <= 3 ? std::min(step * 1.6, sc.max_step / span) : step;
  }
  return t;
}

inline void wrap_trig(std::vector<cplx>& t, const std::vector<double>& levels) {
  if (levels.empty()) return;
  double lo = *std::min_element(levels.begin(), levels.end());
  for (auto& z : t) {
    double re = z.real() - lo;
    re -= std::floor(re / std::numbers::pi) * std::numbers::pi;
    z = {lo + re, z.imag()};
  }
}

// Make conjugate partners exact mirror images.
inline void symmetrize(std::vector<cplx>& t) {
  std::vector<bool> used(t.size(), false);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (used[i]) continue;
    double best = INFINITY;
    std::size_t bj = i;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (used[j]) continue;
      double dd = std::abs(t[j] - std::conj(t[i]));
      if (dd < best) best = dd, bj = j;
    }
    used[i] = used[bj] = true;
    if (bj == i) {
      t[i] = {t[i].real(), 0.0};
    } else {
      cplx a = 0.5 * (t[i] + std::conj(t[bj]));
      t[i] = a;
      t[bj] = std::conj(a);
    }
  }
}

}  // namespace detail

inline RootSet finish(const PairingModel& m, std::vector<cplx> t, const ContinuationSchedule& sc,
                      double g) {
  Equations eq = Equations::of(m);
  eq.g = g;
  RootSet rs;
  rs.g = g;
  if (m.kind == Kind::trigonometric) detail::wrap_trig(t, m.levels);
  rs.conjugation_closed = is_conjugation_closed(t);
  if (rs.conjugation_closed) {
    auto sym = t;
    detail::symmetrize(sym);
    auto nr = detail::newton(eq, sym, sc.newton_tol, 2);
    if (nr.ok && is_conjugation_closed(nr.t)) {
      t = nr.t;
      detail::symmetrize(t);
    }
  }
  auto r = eq.residual(t);
  rs.roots = std::move(t);
  rs.residual = max_abs(r);
  rs.converged = detail::small_enough(eq, rs.roots, r, 10 * sc.newton_tol);
  return rs;
}

inline RootSet solve_at_g(const PairingModel& m, const std::vector<cplx>& seed,
                          const ContinuationSchedule& sc) {
  if (seed.size() != static_cast<std::size_t>(m.pairs)) throw config_error("seed must hold M roots");
  Equations eq = Equations::of(m);
  eq.g = sc.g_target;
  eq.check(seed);
  cmat j = eq.jacobian(seed);
  if (j.rows() > 0 && condition_number(j) > 1e15) throw singular_matrix("jacobian singular at seed");
  auto nr = detail::newton(eq, seed, sc.newton_tol, sc.max_newton_iters);
  if (!nr.ok) throw convergence_error("newton iteration did not converge", nr.t);
  RootSet rs = finish(m, nr.t, sc, sc.g_target);
  rs.newton_iterations = nr.iterations;
  return rs;
}

inline RootSet continue_in_g(const PairingModel& m, const StateLabel& label, const ContinuationSchedule& sc) {
  require_valid(m);
  check_label(m, label);
  if (!(sc.g_start > 0.0) || sc.g_start > sc.g_target) throw config_error("need 0 < g_start <= g_target");
  if (sc.min_step > sc.max_step) throw config_error("min_step exceeds max_step");
  const Equations base = Equations::of(m);
  const double span = std::log(sc.g_target / sc.g_start);
  auto g_at = [&](double s) { return sc.g_start * std::exp(s * span); };
  detail::TrackStats stats;

  auto attempt = [&](const std::vector<double>& delta) -> std::vector<cplx> {
    Equations e0 = base;
    for (std::size_t a = 0; a < delta.size(); ++a) e0.xi[a] += cplx(0.0, delta[a]);
    e0.g = sc.g_start;
    auto start = detail::newton(e0, seed_roots(e0, label, sc.g_start), sc.newton_tol, sc.max_newton_iters);
    stats.newton += start.iterations;
    if (!start.ok) throw detail::collision("seed did not converge");
    std::vector<cplx> t = start.t;
    bool deformed = !delta.empty();
    if (span > 0.0) {
      t = detail::track(
          [&](double s) {
            Equations e = e0;
            e.g = g_at(s);
            return e;
          },
          t, sc, span, stats, !deformed);
    }
    if (deformed) {
      t = detail::track(
          [&](double s) {
            Equations e = base;
            e.g = sc.g_target;
            for (std::size_t a = 0; a < delta.size(); ++a) e.xi[a] += cplx(0.0, (1.0 - s) * delta[a]);
            return e;
          },
          t, sc, 1.0, stats, false);
    }
    return t;
  };

  std::vector<cplx> t;
  bool deformed = false;
  try {
    t = attempt({});
  } catch (const detail::collision&) {
    deformed = true;
    const double eps = sc.deformation_epsilon;
    const double n = double(m.size());
    bool done = false;
    for (double scale : {1.0, -1.0, 0.5, -0.5, 2.0}) {
      std::vector<double> delta(m.size());
      for (std::size_t a = 0; a < m.size(); ++a) delta[a] = scale * eps * double(a + 1) / n;
      try {
        t = attempt(delta);
        done = true;
        break;
      } catch (const detail::collision&) {
      }
    }
    if (!done) throw convergence_error("unrecoverable root collision", t);
  }
  Equations eq = base;
  eq.g = sc.g_target;
  auto polish = detail::newton(eq, t, sc.newton_tol, sc.max_newton_iters);
  stats.newton += polish.iterations;
  if (!polish.ok) throw convergence_error("final newton polish failed", polish.t);
  RootSet rs = finish(m, polish.t, sc, sc.g_target);
  rs.newton_iterations = stats.newton;
  rs.continuation_steps = stats.steps;
  rs.deformed = deformed;
  return rs;
}

inline RootSet continue_in_g(const PairingModel& m, const StateLabel& label) {
  return continue_in_g(m, label, default_schedule(m));
}

inline RootSet ground_state(const PairingModel& m) { return continue_in_g(m, ground_label(m)); }

// Warm start: follow a converged root set from prev.g to sc.g_target.  Falls
// back to a cold continuation of `label` when the path hits a collision.
inline RootSet continue_from(const PairingModel& m, const RootSet& prev, const StateLabel& label,
                             const ContinuationSchedule& sc) {
  require_valid(m);
  if (prev.roots.size() != static_cast<std::size_t>(m.pairs)) throw config_error("previous root set has wrong size");
  const Equations base = Equations::of(m);
  const double g0 = prev.g, g1 = sc.g_target;
  if (!(g0 > 0.0 && g1 > 0.0)) throw config_error("couplings must be positive");
  const double span = std::abs(std::log(g1 / g0));
  detail::TrackStats stats;
  try {
    std::vector<cplx> t = prev.roots;
    if (span > 0.0)
      t = detail::track(
          [&](double s) {
            Equations e = base;
            e.g = g0 * std::pow(g1 / g0, s);
            return e;
          },
          t, sc, span, stats, false);
    Equations eq = base;
    eq.g = g1;
    auto polish = detail::newton(eq, t, sc.newton_tol, sc.max_newton_iters);
    stats.newton += polish.iterations;
    if (!polish.ok) throw detail::collision("warm start polish failed");
    RootSet rs = finish(m, polish.t, sc, g1);
    rs.newton_iterations = stats.newton;
    rs.continuation_steps = stats.steps;
    if (rs.converged) return rs;
  } catch (const numerical_error&) {
  }
  RootSet rs = continue_in_g(m, label, sc);
  rs.newton_iterations += stats.newton;
  return rs;
}

inline double energy(const RootSet& rs) {
  cplx s = 0.0;
  for (auto z : rs.roots) s += z;
  return s.real();
}

inline double energy_imag(const RootSet& rs) {
  cplx s = 0.0;
  for (auto z : rs.roots) s += z;
  return std::abs(s.imag());
}

// Eigenvalues of the commuting operators H_i for an arbitrary (possibly
// off-shell) root set; complex in general, real on shell.
inline std::vector<cplx> gaudin_eigenvalues_complex(const PairingModel& m, const std::vector<cplx>& t) {
  const std::size_t n = m.size();
  std::vector<cplx> e(n);
  if (m.kind == Kind::trigonometric) {
    if (!m.spin_half()) throw config_error("trigonometric eigenvalues need unit degeneracies");
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t l = 0; l < n; ++l)
        if (l != i) s += 1.0 / std::tan(m.levels[i] - m.levels[l]);
      for (auto tj : t) s += std::cos(tj - m.levels[i]) / std::sin(tj - m.levels[i]);
      e[i] = s;
    }
    return e;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double di = m.degeneracies[i];
    cplx s = 0.0;
    for (std::size_t l = 0; l < n; ++l)
      if (l != i) s += 0.5 * di * m.degeneracies[l] / (m.levels[i] - m.levels[l]);
    for (auto tj : t) s += di / (tj - m.levels[i]);
    e[i] = s;
  }
  return e;
}

inline std::vector<double> gaudin_eigenvalues(const PairingModel& m, const std::vector<cplx>& t) {
  auto c = gaudin_eigenvalues_complex(m, t);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

inline double generalized_energy(const std::vector<double>& eps, const std::vector<double>& gaudin, double g) {
  if (eps.size() != gaudin.size()) throw config_error("eps and eigenvalue lists differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) s += eps[i] * gaudin[i];
  return -g * s;
}

// Constant relating -g sum_i xi_i E_i to the pairing energy sum t (rational,
// unit degeneracies): E = generalized_energy(xi) + offset.
inline double generalized_energy_offset(const PairingModel& m) {
  const double g = m.coupling;
  const double n = double(m.size());
  const double mm = double(m.pairs);
  return -g * mm + 0.25 * g * ((2 * mm - n) * (2 * mm - n) - n);
}

struct SpectrumResult {
  double energy = 0.0;
  double energy_imag = 0.0;
  std::vector<double> gaudin_eigenvalues;
};

inline SpectrumResult spectrum(const PairingModel& m, const RootSet& rs) {
  return {energy(rs), energy_imag(rs), gaudin_eigenvalues(m, rs.roots)};
}

}  // namespace richardson

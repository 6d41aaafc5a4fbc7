#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "linalg.hpp"
#include "model.hpp"
#include "solver.hpp"

namespace richardson {

// h(z) = sum_i 1/(z - t_i) - 1/2 sum_a d_a/(z - xi_a) - 1/(2g)
inline cplx electric_field(const PairingModel& m, const std::vector<cplx>& t, cplx z) {
  cplx h = -0.5 / m.coupling;
  for (auto ti : t) {
    if (std::abs(z - ti) <= 1e-14 * (1.0 + std::abs(z))) throw pole_collision("field evaluated at a root");
    h += 1.0 / (z - ti);
  }
  for (std::size_t a = 0; a < m.size(); ++a) {
    if (std::abs(z - m.levels[a]) <= 1e-14 * (1.0 + std::abs(z))) throw pole_collision("field evaluated at a level");
    h -= 0.5 * m.degeneracies[a] / (z - m.levels[a]);
  }
  return h;
}

// Field at root j with its own pole removed; equals -r_j/2.
inline cplx regularized_field(const PairingModel& m, const std::vector<cplx>& t, std::size_t j) {
  cplx h = -0.5 / m.coupling;
  for (std::size_t k = 0; k < t.size(); ++k)
    if (k != j) h += 1.0 / (t[j] - t[k]);
  for (std::size_t a = 0; a < m.size(); ++a) h -= 0.5 * m.degeneracies[a] / (t[j] - m.levels[a]);
  return h;
}

struct ContourMoments {
  cplx zeroth;  // (1/2 pi i) closed integral of h
  cplx first;   // (1/2 pi i) closed integral of z h
  double root_count = 0.0;   // zeroth + level charge
  double root_sum = 0.0;     // first + level moment = Re sum t
};

// Trapezoid rule on a circle enclosing every root and level.
inline ContourMoments contour_moments(const PairingModel& m, const std::vector<cplx>& t, int points = 1024) {
  cplx centre = 0.0;
  std::size_t cnt = 0;
  for (auto z : t) centre += z, ++cnt;
  for (double x : m.levels) centre += x, ++cnt;
  centre /= double(std::max<std::size_t>(cnt, 1));
  double rad = 0.0;
  for (auto z : t) rad = std::max(rad, std::abs(z - centre));
  for (double x : m.levels) rad = std::max(rad, std::abs(x - centre));
  rad = 2.0 * rad + 1.0;
  ContourMoments c;
  for (int k = 0; k < points; ++k) {
    double th = 2.0 * std::numbers::pi * k / points;
    cplx e = std::polar(1.0, th);
    cplx z = centre + rad * e;
    cplx dz_over_2pii = rad * e / double(points);  // dz = i r e dth, divided by 2 pi i
    cplx h = electric_field(m, t, z);
    c.zeroth += h * dz_over_2pii;
    c.first += z * h * dz_over_2pii;
  }
  double charge = 0.0, moment = 0.0;
  for (std::size_t a = 0; a < m.size(); ++a) {
    charge += 0.5 * m.degeneracies[a];
    moment += 0.5 * m.degeneracies[a] * m.levels[a];
  }
  c.root_count = c.zeroth.real() + charge;
  c.root_sum = c.first.real() + moment;
  return c;
}

// Uniform band on (-1, 1) with density 1/2; endpoints of the root arc are mu +- i gap.
struct ContinuumSolution {
  double gap = 0.0;
  double mu = 0.0;
  double filling = 0.5;
  double energy = 0.0;  // per level
  bool normal_state = false;
  int iterations = 0;
  double residual = 0.0;
};

namespace continuum {

// integral over (-1,1) of f(xi) dxi after xi - mu = gap sinh(u)
template <class F>
double integrate(F f, double gap, double mu) {
  using boost::math::quadrature::gauss_kronrod;
  double lo = std::asinh((-1.0 - mu) / gap), hi = std::asinh((1.0 - mu) / gap);
  auto g = [&](double u) {
    double x = gap * std::sinh(u);
    double r = gap * std::cosh(u);
    return f(mu + x, x, r) * r;
  };
  return gauss_kronrod<double, 31>::integrate(g, lo, hi, 15, 1e-15);
}

// 1/g = int rho/R
inline double gap_integral(double gap, double mu) {
  return integrate([](double, double, double r) { return 0.5 / r; }, gap, mu);
}

// filling = int rho v^2, v^2 = (1 - x/R)/2
inline double number_integral(double gap, double mu) {
  return integrate([](double, double x, double r) { return 0.25 * (1.0 - x / r); }, gap, mu);
}

inline double energy_density(double gap, double mu, double g) {
  double kin = integrate([](double xi, double x, double r) { return 0.25 * xi * (1.0 - x / r); }, gap, mu);
  return kin - gap * gap / (4.0 * g);
}

// Closed forms of the same integrals.
inline double gap_closed(double gap, double mu) {
  return 0.5 * (std::asinh((1.0 - mu) / gap) + std::asinh((1.0 + mu) / gap));
}
inline double number_closed(double gap, double mu) {
  return 0.5 - 0.25 * (std::hypot(1.0 - mu, gap) - std::hypot(1.0 + mu, gap));
}
inline double energy_closed(double gap, double mu, double g) {
  auto prim = [&](double x) {
    double r = std::hypot(x, gap);
    return 0.5 * (x * r - gap * gap * std::asinh(x / gap)) + mu * r;
  };
  return -0.25 * (prim(1.0 - mu) - prim(-1.0 - mu)) - gap * gap / (4.0 * g);
}

// Normal state: filled band up to mu = 2f - 1.
inline double normal_energy(double filling) {
  double mu = 2.0 * filling - 1.0;
  return 0.25 * (mu * mu - 1.0);
}

}  // namespace continuum

inline ContinuumSolution gap_solve(double g, double filling) {
  if (!(g > 0.0)) throw config_error("coupling must be positive");
  if (!(filling > 0.0 && filling < 1.0)) throw config_error("filling must lie in (0, 1)");
  ContinuumSolution s;
  s.filling = filling;
  // unknowns: log gap, mu
  // weak-coupling start
  double lg = std::log(2.0) - 1.0 / g, mu = 2.0 * filling - 1.0;
  auto res = [&](double l, double m) {
    double gap = std::exp(l);
    return Eigen::Vector2d(continuum::gap_integral(gap, m) - 1.0 / g, continuum::number_integral(gap, m) - filling);
  };
  if (lg < std::log(1e-300)) {
    s.normal_state = true;
    s.mu = mu;
    s.energy = continuum::normal_energy(filling);
    return s;
  }
  Eigen::Vector2d r = res(lg, mu);
  for (int it = 0; it < 100 && r.norm() > 1e-14; ++it) {
    Eigen::Matrix2d j;
    const double h = 1e-7;
    j.col(0) = (res(lg + h, mu) - res(lg - h, mu)) / (2 * h);
    j.col(1) = (res(lg, mu + h) - res(lg, mu - h)) / (2 * h);
    Eigen::Vector2d step = j.fullPivLu().solve(-r);
    double lam = 1.0;
    Eigen::Vector2d rn;
    for (int k = 0; k < 30; ++k, lam *= 0.5) {
      double l2 = lg + lam * step(0), m2 = mu + lam * step(1);
      if (std::abs(m2) >= 1.0 + std::exp(l2) * 50) continue;
      rn = res(l2, m2);
      if (rn.allFinite() && rn.norm() < r.norm()) break;
    }
    lg += lam * step(0);
    mu += lam * step(1);
    r = rn;
    s.iterations = it + 1;
    if (lg < std::log(1e-300)) {
      s.normal_state = true;
      s.mu = 2.0 * filling - 1.0;
      s.energy = continuum::normal_energy(filling);
      return s;
    }
  }
  if (!(r.norm() <= 1e-10)) throw numerical_error("gap equations did not converge");
  s.gap = std::exp(lg);
  s.mu = mu;
  s.residual = r.norm();
  s.energy = continuum::energy_density(s.gap, s.mu, g);
  return s;
}

// Equally spaced levels -1 + (2a - 1)/N, N/2 pairs, coupling g/N.
inline PairingModel band_model(int n, double g) {
  std::vector<double> xi(n);
  for (int a = 1; a <= n; ++a) xi[a - 1] = -1.0 + (2.0 * a - 1.0) / n;
  return make_model(xi, n / 2, g / n);
}

struct ContinuumRow {
  int n = 0;
  double energy_per_level = 0.0;
  double deviation = 0.0;  // E/N - e
  bool deformed = false;
};

struct ContinuumTable {
  double g = 0.0;
  ContinuumSolution continuum;
  std::vector<ContinuumRow> rows;
  bool monotone = false;
  bool ratio_ok = false;
  bool pass() const { return monotone && ratio_ok; }
};

inline ContinuumTable continuum_compare(double g, const std::vector<int>& sizes) {
  ContinuumTable tab;
  tab.g = g;
  tab.continuum = gap_solve(g, 0.5);
  for (int n : sizes) {
    if (n <= 0 || n % 2) throw config_error("sizes must be positive and even");
    PairingModel m = band_model(n, g);
    RootSet rs = ground_state(m);
    ContinuumRow row;
    row.n = n;
    row.energy_per_level = energy(rs) / n;
    row.deviation = row.energy_per_level - tab.continuum.energy;
    row.deformed = rs.deformed;
    tab.rows.push_back(row);
  }
  tab.monotone = true;
  tab.ratio_ok = true;
  for (std::size_t k = 1; k < tab.rows.size(); ++k) {
    double a = std::abs(tab.rows[k - 1].deviation), b = std::abs(tab.rows[k].deviation);
    if (!(b < a)) tab.monotone = false;
    double sizes_ratio = double(tab.rows[k - 1].n) / tab.rows[k].n;
    double q = b / a;
    if (!(q >= 0.5 * sizes_ratio && q <= 2.0 * sizes_ratio)) tab.ratio_ok = false;
  }
  return tab;
}

// chi(t, xi) = e^{sum t/g} prod_{i<j}(t_i - t_j)^-2 prod_{a<b}(xi_a - xi_b)^{-1/2} prod_{i,a}(t_i - xi_a),
// every exponent divided by gamma.  d log chi/d t_i = f(t_i)/gamma and
// d log chi/d xi_i = -E_i(t, xi)/gamma.
struct ChiEvaluation {
  std::vector<cplx> t;
  std::vector<double> xi;
  double g = 1.0;
  double gamma = 1.0;
  cplx log_chi;
  std::vector<cplx> dt;   // analytic d/dt_i
  std::vector<cplx> dxi;  // analytic d/dxi_i
};

namespace chi_detail {

inline void check_args(const std::vector<cplx>& t, const std::vector<cplx>& xi) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k)
      if (t[i] == t[k]) throw coincident_roots("coincident arguments in chi");
    for (auto x : xi)
      if (t[i] == x) throw pole_collision("root equals a level in chi");
  }
}

// log chi(t, xi) - log chi(t0, xi0) summed factor by factor as logs of
// ratios, so the branch cuts of the individual logs never interfere.
inline cplx log_ratio(const std::vector<cplx>& t, const std::vector<cplx>& xi, const std::vector<cplx>& t0,
                      const std::vector<cplx>& xi0, double g, double gamma) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += (t[i] - t0[i]) / g;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) s -= 2.0 * std::log((t[i] - t[j]) / (t0[i] - t0[j]));
  for (std::size_t a = 0; a < xi.size(); ++a)
    for (std::size_t b = a + 1; b < xi.size(); ++b) s -= 0.5 * std::log((xi[a] - xi[b]) / (xi0[a] - xi0[b]));
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t a = 0; a < xi.size(); ++a) s += std::log((t[i] - xi[a]) / (t0[i] - xi0[a]));
  return s / gamma;
}

inline std::vector<cplx> cx(const std::vector<double>& v) { return {v.begin(), v.end()}; }

}  // namespace chi_detail

inline ChiEvaluation chi_evaluate(const std::vector<cplx>& t, const PairingModel& m, double gamma = 1.0) {
  if (!m.spin_half() || m.kind != Kind::rational) throw config_error("chi is defined for the rational spin-1/2 model");
  std::vector<cplx> xi = chi_detail::cx(m.levels);
  chi_detail::check_args(t, xi);
  ChiEvaluation e;
  e.t = t;
  e.xi = m.levels;
  e.g = m.coupling;
  e.gamma = gamma;
  cplx l = 0.0;
  for (auto z : t) l += z / m.coupling;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) l -= 2.0 * std::log(t[i] - t[j]);
  for (std::size_t a = 0; a < xi.size(); ++a)
    for (std::size_t b = a + 1; b < xi.size(); ++b) l -= 0.5 * std::log(xi[a] - xi[b]);
  for (auto z : t)
    for (auto x : xi) l += std::log(z - x);
  e.log_chi = l / gamma;
  auto f = Equations::of(m).residual(t);
  auto ev = gaudin_eigenvalues_complex(m, t);
  for (auto v : f) e.dt.push_back(v / gamma);
  for (auto v : ev) e.dxi.push_back(-v / gamma);
  return e;
}

struct KzReport {
  double dt_residual = 0.0;     // finite-difference vs analytic, d/dt
  double dxi_residual = 0.0;    // finite-difference vs analytic, d/dxi
  double mixed_residual = 0.0;  // d/dxi_i (dlogchi/dt_j) vs d/dt_j (dlogchi/dxi_i)
  double mixed_analytic = 0.0;  // both mixed partials against 1/(gamma (t_j - xi_i)^2)
  bool pass(double tol = 1e-6) const {
    return dt_residual <= tol && dxi_residual <= tol && mixed_residual <= tol && mixed_analytic <= tol;
  }
};

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Central differences with relative step `step`.
inline KzReport kz_residual(const std::vector<cplx>& t, const PairingModel& m, double gamma = 1.0,
                            double step = 1e-6) {
  KzReport r;
  const std::vector<cplx> xi = chi_detail::cx(m.levels);
  auto e0 = chi_evaluate(t, m, gamma);
  const double g = m.coupling;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double h = step * (1.0 + std::abs(t[i]));
    auto tp = t, tm = t;
    tp[i] += h;
    tm[i] -= h;
    cplx fd = chi_detail::log_ratio(tp, xi, tm, xi, g, gamma) / (2.0 * h);
    r.dt_residual = std::max(r.dt_residual, rel_err(fd, e0.dt[i]));
  }
  auto with_xi = [&](std::size_t a, double dx) {
    PairingModel q = m;
    q.levels[a] += dx;
    return q;
  };
  for (std::size_t a = 0; a < m.size(); ++a) {
    double h = step * (1.0 + std::abs(m.levels[a]));
    auto xp = xi, xm = xi;
    xp[a] += h;
    xm[a] -= h;
    cplx fd = chi_detail::log_ratio(t, xp, t, xm, g, gamma) / (2.0 * h);
    r.dxi_residual = std::max(r.dxi_residual, rel_err(fd, e0.dxi[a]));
    // mixed partials from the analytic first derivatives
    auto ep = chi_evaluate(t, with_xi(a, h), gamma), em = chi_evaluate(t, with_xi(a, -h), gamma);
    for (std::size_t j = 0; j < t.size(); ++j) {
      cplx d_xi_of_dt = (ep.dt[j] - em.dt[j]) / (2.0 * h);
      double ht = step * (1.0 + std::abs(t[j]));
      auto tp = t, tm = t;
      tp[j] += ht;
      tm[j] -= ht;
      cplx d_t_of_dxi = (chi_evaluate(tp, m, gamma).dxi[a] - chi_evaluate(tm, m, gamma).dxi[a]) / (2.0 * ht);
      cplx exact = 1.0 / (gamma * (t[j] - m.levels[a]) * (t[j] - m.levels[a]));
      r.mixed_residual = std::max(r.mixed_residual, rel_err(d_xi_of_dt, d_t_of_dxi));
      r.mixed_analytic = std::max({r.mixed_analytic, rel_err(d_xi_of_dt, exact), rel_err(d_t_of_dxi, exact)});
    }
  }
  return r;
}

// max_i |d log chi/d t_i| by finite differences.
inline double chi_stationarity(const std::vector<cplx>& t, const PairingModel& m, double step = 1e-6) {
  const std::vector<cplx> xi = chi_detail::cx(m.levels);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double h = step * (1.0 + std::abs(t[i]));
    auto tp = t, tm = t;
    tp[i] += h;
    tm[i] -= h;
    worst = std::max(worst, std::abs(chi_detail::log_ratio(tp, xi, tm, xi, m.coupling, 1.0) / (2.0 * h)));
  }
  return worst;
}

}  // namespace richardson

#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include <richardson/richardson.hpp>

namespace testutil {

using richardson::cplx;

// Sorted levels in [-1, 1] with a minimum gap, so kernels stay tame.
inline std::vector<double> random_levels(std::mt19937_64& rng, int n, double min_gap = 0.05) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<double> xi(n);
    for (auto& x : xi) x = u(rng);
    std::sort(xi.begin(), xi.end());
    bool ok = true;
    for (int i = 1; i < n; ++i) ok = ok && xi[i] - xi[i - 1] > min_gap;
    if (ok) return xi;
  }
}

inline richardson::PairingModel random_model(std::mt19937_64& rng, int n, int m, double glo = 0.05,
                                             double ghi = 1.5) {
  std::uniform_real_distribution<double> ug(glo, ghi);
  return richardson::make_model(random_levels(rng, n, 0.4 / n), m, ug(rng));
}

// Off-shell complex points kept away from the levels and from each other.
inline std::vector<cplx> random_offshell(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<cplx> t(m);
  for (auto& z : t) z = cplx(u(rng), 0.3 + 0.5 * std::abs(u(rng)));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += cplx(0.0, 0.2 * double(i));
  return t;
}

// Normalized Bethe vector of a root set.
inline richardson::cvec bethe_vector(const richardson::PairingModel& m, const std::vector<cplx>& t) {
  richardson::cvec v = richardson::sigma_plus_state(m, t);
  return v / v.norm();
}

// Ground-state model used throughout: two levels, one pair.
inline richardson::PairingModel worked_example() { return richardson::make_model({0.0, 1.0}, 1, 0.5); }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testutil

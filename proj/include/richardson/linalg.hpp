#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace richardson {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

inline cvec to_cvec(const std::vector<cplx>& v) {
  return Eigen::Map<const cvec>(v.data(), static_cast<Eigen::Index>(v.size()));
}
inline std::vector<cplx> to_std(const cvec& v) { return {v.data(), v.data() + v.size()}; }

// Determinant stored as mantissa * 2^exponent so that factorially growing
// norms never overflow.
struct LogDet {
  cplx mantissa{1.0, 0.0};
  long exponent = 0;

  static LogDet from(cplx z) {
    LogDet d;
    d.mantissa = z;
    d.normalize();
    return d;
  }
  void normalize() {
    double m = std::max(std::abs(mantissa.real()), std::abs(mantissa.imag()));
    if (m == 0.0 || !std::isfinite(m)) return;
    int e = 0;
    std::frexp(m, &e);
    mantissa = {std::ldexp(mantissa.real(), -e), std::ldexp(mantissa.imag(), -e)};
    exponent += e;
  }
  bool zero() const { return mantissa == cplx{}; }
  cplx value() const {
    return {std::ldexp(mantissa.real(), static_cast<int>(exponent)),
            std::ldexp(mantissa.imag(), static_cast<int>(exponent))};
  }
  // log|det| + i arg(det)
  cplx log() const { return std::log(mantissa) + cplx(exponent * std::log(2.0), 0.0); }

  LogDet& operator*=(const LogDet& o) {
    mantissa *= o.mantissa;
    exponent += o.exponent;
    normalize();
    return *this;
  }
  LogDet& operator*=(cplx z) { return *this *= from(z); }
  friend LogDet operator*(LogDet a, const LogDet& b) { return a *= b; }
};

// this / other as an ordinary number.
inline cplx ratio(const LogDet& a, const LogDet& b) {
  if (b.zero()) throw singular_matrix("division by a zero determinant");
  cplx q = a.mantissa / b.mantissa;
  long e = a.exponent - b.exponent;
  return {std::ldexp(q.real(), static_cast<int>(e)), std::ldexp(q.imag(), static_cast<int>(e))};
}

inline LogDet logdet(const Eigen::PartialPivLU<cmat>& lu) {
  LogDet d;
  const auto& m = lu.matrixLU();
  for (Eigen::Index i = 0; i < m.rows(); ++i) d *= m(i, i);
  if (lu.permutationP().determinant() < 0) d.mantissa = -d.mantissa;
  return d;
}

inline LogDet logdet(const cmat& a) {
  if (a.rows() == 0) return {};
  Eigen::PartialPivLU<cmat> lu(a);
  return logdet(lu);
}

inline double condition_number(const cmat& a) {
  if (a.rows() == 0) return 1.0;
  Eigen::JacobiSVD<cmat> svd(a);
  const auto& s = svd.singularValues();
  double lo = s(s.size() - 1);
  return lo == 0.0 ? INFINITY : s(0) / lo;
}

// Relative Frobenius distance, with a floor to avoid 0/0.
inline double rel_diff(const cmat& a, const cmat& b) {
  double n = std::max(a.norm(), b.norm());
  return n == 0.0 ? 0.0 : (a - b).norm() / n;
}

}  // namespace richardson

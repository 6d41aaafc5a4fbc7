#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace richardson {

// Base of every error thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model or configuration data.
class config_error : public error {
 public:
  using error::error;
};

// Generic numerical breakdown (singular systems, overflow, ...).
class numerical_error : public error {
 public:
  using error::error;
};

class coincident_roots : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

// An argument sits on a pole of a rational kernel.
class pole_collision : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class singular_matrix : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

// Newton or continuation gave up; carries the last iterate.
class convergence_error : public numerical_error {
 public:
  convergence_error(const std::string& what, std::vector<std::complex<double>> last)
      : numerical_error(what), last_iterate(std::move(last)) {}
  std::vector<std::complex<double>> last_iterate;
};

class cap_exceeded : public error {
 public:
  using error::error;
};

}  // namespace richardson

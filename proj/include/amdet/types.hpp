#pragma once

#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace amdet {

using cxd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// SNR sentinel: +inf disables channel noise entirely.
inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

// Problem exceeds a hard resource bound (chip capacity, exhaustive-search
// limits). The CLI maps this to exit code 3.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or malformed input data. CLI exit code 2.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file contents; message carries the offending line/field.
class parse_error : public config_error {
 public:
  using config_error::config_error;
};

// A decoder cannot produce a result (e.g. rank-deficient channel).
class decode_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace amdet

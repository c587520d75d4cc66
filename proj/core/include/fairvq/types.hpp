#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace fairvq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Failure of a numerical procedure (degenerate pivot sequence, NaN blowup).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable/unwritable file or malformed on-disk document.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fairvq

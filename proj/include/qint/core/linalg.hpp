#pragma once

#include <Eigen/Core>

namespace qint {

// Row-major so that a matrix's storage order matches the checkpoint tensor
// layout (out x in, rows contiguous) and batch rows are contiguous samples.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace qint

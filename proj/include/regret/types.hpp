#pragma once

#include <Eigen/Core>

namespace regret {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace regret

#pragma once

#include <Eigen/Dense>

namespace esdr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace esdr

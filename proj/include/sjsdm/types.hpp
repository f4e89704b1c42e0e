#pragma once

#include <Eigen/Dense>

namespace sjsdm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace sjsdm

#pragma once

#include <Eigen/Dense>

namespace npvi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace npvi

#pragma once

#include <Eigen/Dense>

namespace fhgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Value, gradient and Hessian of a scalar function at a point.
struct Jet2 {
    double value;
    Vec grad;
    Mat hess;
};

} // namespace fhgeo

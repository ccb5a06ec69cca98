#pragma once

#include <vector>

#include <Eigen/Dense>

#include "halfres/types.hpp"

namespace halfres {

// Product quadrature on the support ball B(0,R) in polar coordinates:
// Gauss-Legendre in the radius against the r^2 measure, Gauss-Legendre in
// cos(theta), uniform azimuth. The weight sum is the ball volume exactly.
// Node count is n * n_t * 2*n_t with n_t = max(6, n/3).
struct Quadrature {
    int dimension = 3;
    double R = 1.0;
    Eigen::Matrix<double, Eigen::Dynamic, 3> nodes;  // one row per node
    Eigen::VectorXd weights;

    // Closed-form integrals of the kernel's local singular models over each
    // node's equivalent-volume spherical cell (radius cell_radius[i]):
    // j_inv2 = int 1/s^2, j_inv1 = int 1/s, j_log = int log s. The diagonal
    // of the Nystrom matrix applies these to the singular coefficients in
    // place of the plain weight.
    Eigen::VectorXd j_inv2;
    Eigen::VectorXd j_inv1;
    Eigen::VectorXd j_log;
    Eigen::VectorXd cell_radius;

    bool coarse = false;  // diagnostic flag: few radial nodes for the support

    Eigen::Index size() const { return weights.size(); }
};

// d = 3 only (everything downstream of the matrix pipeline is d = 3)
Quadrature build_quadrature(double R, int n);

} // namespace halfres

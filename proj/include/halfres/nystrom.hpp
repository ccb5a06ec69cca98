#pragma once

#include <memory>

#include <Eigen/Dense>

#include "halfres/potential.hpp"
#include "halfres/quadrature.hpp"
#include "halfres/types.hpp"

namespace halfres {

// Nystrom matrix of the Birman-Schwinger operator K(z) = V R0(z) chi on the
// quadrature nodes. matrix holds K itself; the characteristic determinant
// downstream works with I + K.
struct BSOperator {
    SheetPoint z;
    Eigen::MatrixXcd matrix;
    std::shared_ptr<const Quadrature> quadrature;
    std::shared_ptr<const Potential> potential;
};

// entry(i,j) = V(x_i) w_j K_z(|x_i - x_j|) off the diagonal; the diagonal
// integrates the kernel's singular model over the node cell in closed form
// and applies the plain weight to the bounded remainder.
BSOperator assemble_bs(const SheetPoint& z, const Potential& v, const Quadrature& q,
                       int workers = 1);

// entrywise d/dz of assemble_bs along the surface
Eigen::MatrixXcd assemble_bs_dz(const SheetPoint& z, const Potential& v,
                                const Quadrature& q, int workers = 1);

// Unit sheet jump of the matrix: assemble_bs at arg_total + 2 pi m equals
// assemble_bs at arg_total plus m times this matrix (it depends on z only
// through the base value).
Eigen::MatrixXcd sheet_jump_matrix(const SheetPoint& z, const Potential& v,
                                   const Quadrature& q);

} // namespace halfres

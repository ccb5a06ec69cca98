#pragma once

#include <vector>

#include "halfres/expint.hpp"
#include "halfres/types.hpp"

namespace halfres {

// Constants of the kernel's oscillatory decomposition in odd dimension d:
// the sphere integral Omega_d(u) = int_{S^{d-1}} e^{i u w.e} dw splits as
//   Omega_d(u) = sum_k c_k e^{iu}/u^{(d-1)/2+k} + sum_k c_k e^{-iu}/(-u)^{(d-1)/2+k}
// and ctilde_k = -c_k (-i)^{s_k} (s_k = (d-1)/2 - k) are the folded constants
// in front of the d/ds^{s_k} terms of the closed kernel form. alpha_1 is the
// z -> 0 Riesz constant: the kernel tends to alpha_1 / r^{d-1}.
struct KernelConstants {
    int dimension;
    std::vector<cd> c;
    std::vector<cd> ctilde;
    double alpha_1;
};

KernelConstants kernel_constants(int dimension);

// Omega_d(u), entire in u (series near u = 0)
cd omega_sphere(int dimension, cd u);

// kernel of the outgoing free resolvent (sqrt(-Laplace) - z)^{-1} on the log
// surface, as a function of r = |x - y| > 0. singular_part collects the terms
// that are unbounded as r -> 0 (value - singular_part stays bounded).
struct KernelValue {
    cd value;
    cd singular_part;
};

KernelValue outgoing_kernel(int dimension, const SheetPoint& z, double r);
KernelValue incoming_kernel(int dimension, const SheetPoint& z, double r);

// d/dz of the outgoing kernel at fixed r (z the surface point's value,
// differentiated along the surface)
cd outgoing_kernel_dz(int dimension, const SheetPoint& z, double r);

// jump of the outgoing kernel under arg_total -> arg_total + 2*pi*m; depends
// on z0 only through its base value; entire in r, finite at r = 0
cd sheet_jump(int dimension, const SheetPoint& z0, long m, double r);

// z -> 0 limit of the kernel: alpha_1 * r^{1-d}
double riesz_limit(int dimension, double r);

// Small-r expansion coefficients used by the singular quadrature corrections:
//   kernel = alpha_1/r^2 + beta_1/r + beta_log * log(r) + beta_0 + O(r log r)
// (d = 3 only; the matrix pipelines are d = 3). beta_0 depends on the surface
// log of z, so it is branch-aware.
struct SmallRModel {
    double alpha_1;
    cd beta_1;
    cd beta_log;
    cd beta_0;
};

SmallRModel small_r_model(const SheetPoint& z);

// General small-r model in dimension d:
//   kernel = sum_j inv_power[j] / r^{d-1-j}  (j = 0 .. d-2)
//          + log_coef * log(r) + r0_limit + O(r log r)
// inv_power[0] = alpha_1 is real; r0_limit depends on the surface log of z.
struct SingularModel {
    std::vector<cd> inv_power;
    cd log_coef;
    cd r0_limit;
};

SingularModel singular_model(int dimension, const SheetPoint& z);

// entrywise d/dz of singular_model along the surface
SingularModel singular_model_dz(int dimension, const SheetPoint& z);

} // namespace halfres

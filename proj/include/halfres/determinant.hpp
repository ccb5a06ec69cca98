#pragma once

#include <Eigen/Dense>

#include "halfres/nystrom.hpp"

namespace halfres {

// Characteristic determinants are carried as complex logarithms. The matrix
// trace of K grows with the node count (the kernel's 1/r^2 diagonal region
// keeps the discrete operator out of trace class), so det(I + K) routinely
// leaves double range; log magnitudes stay small. value() exponentiates and
// is safe only when log.real() is moderate.
struct LogDet {
    cd log = cd(0.0, 0.0);
    bool exact_zero = false;  // an LU pivot vanished identically

    cd value() const { return exact_zero ? cd(0.0, 0.0) : std::exp(log); }
};

// log det of a dense matrix by partial-pivot LU: sum of pivot logs plus the
// permutation parity. rcond_proxy (optional out) is min|U_ii| / max|U_ii|,
// a cheap conditioning indicator for callers that must flag near-singular
// factorizations.
LogDet log_det(const Eigen::MatrixXcd& a, double* rcond_proxy = nullptr);

// det(I + K(z)) for an assembled operator, and the convenience overload that
// assembles first.
LogDet det_IplusK(const BSOperator& op);
LogDet det_IplusK(const SheetPoint& z, const Potential& v, const Quadrature& q);

// det(I - K(z)^{d+1}) with d = 3: the higher-order determinant whose trace
// argument converges for this kernel class. Shares its zero set with
// det(I + K) up to zeros of the cofactor below.
LogDet det_quartic(const BSOperator& op);
LogDet det_quartic(const SheetPoint& z, const Potential& v, const Quadrature& q);

// det(sum_{j=0}^{3} (-K)^j); the factorization
//   det(I - K^4) = det(I + K) * det(I - K + K^2 - K^3)
// is finite-dimensional algebra and is enforced by the acceptance suite.
LogDet det_cofactor(const BSOperator& op);

// d/dz log det(I + K(z)) = tr((I + K)^{-1} K') with K' the entrywise z
// derivative of the assembly. Throws runtime_error when the factorization's
// rcond proxy falls below rcond_floor (caller is on top of a zero).
cd logderiv_trace(const SheetPoint& z, const Potential& v, const Quadrature& q,
                  double rcond_floor = 1e-14);

// One-assembly evaluation for the pole search: log det, the log derivative
// from the same factorization, and the conditioning proxy.
struct DetSample {
    LogDet det;
    cd logderiv = cd(0.0, 0.0);
    double rcond = 1.0;
};

DetSample det_sample(const SheetPoint& z, const Potential& v, const Quadrature& q,
                     bool with_derivative = true);

} // namespace halfres

#include "halfres/determinant.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace halfres {

LogDet log_det(const Eigen::MatrixXcd& a, double* rcond_proxy) {
    if (a.rows() != a.cols()) throw std::invalid_argument("log_det: matrix must be square");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    LogDet out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const cd piv = lu.matrixLU()(i, i);
        const double mag = std::abs(piv);
        lo = std::min(lo, mag);
        hi = std::max(hi, mag);
        if (mag == 0.0) {
            out.exact_zero = true;
        } else {
            out.log += std::log(piv);
        }
    }
    if (lu.permutationP().determinant() < 0) out.log += cd(0.0, kPi);
    if (rcond_proxy) *rcond_proxy = hi > 0.0 ? lo / hi : 0.0;
    return out;
}

LogDet det_IplusK(const BSOperator& op) {
    Eigen::MatrixXcd a = op.matrix;
    a.diagonal().array() += 1.0;
    return log_det(a);
}

LogDet det_IplusK(const SheetPoint& z, const Potential& v, const Quadrature& q) {
    return det_IplusK(assemble_bs(z, v, q));
}

LogDet det_quartic(const BSOperator& op) {
    const Eigen::MatrixXcd k2 = op.matrix * op.matrix;
    Eigen::MatrixXcd a = -k2 * k2;
    a.diagonal().array() += 1.0;
    return log_det(a);
}

LogDet det_quartic(const SheetPoint& z, const Potential& v, const Quadrature& q) {
    return det_quartic(assemble_bs(z, v, q));
}

LogDet det_cofactor(const BSOperator& op) {
    const Eigen::MatrixXcd k2 = op.matrix * op.matrix;
    Eigen::MatrixXcd a = k2 - op.matrix - k2 * op.matrix;
    a.diagonal().array() += 1.0;
    return log_det(a);
}

cd logderiv_trace(const SheetPoint& z, const Potential& v, const Quadrature& q,
                  double rcond_floor) {
    const BSOperator op = assemble_bs(z, v, q);
    Eigen::MatrixXcd a = op.matrix;
    a.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double mag = std::abs(lu.matrixLU()(i, i));
        lo = std::min(lo, mag);
        hi = std::max(hi, mag);
    }
    if (!(hi > 0.0) || lo / hi < rcond_floor) {
        std::ostringstream msg;
        msg << "logderiv_trace: I+K near singular (rcond proxy "
            << (hi > 0.0 ? lo / hi : 0.0) << " at modulus " << z.modulus << ", arg "
            << z.arg_total << ")";
        throw std::runtime_error(msg.str());
    }
    const Eigen::MatrixXcd kprime = assemble_bs_dz(z, v, q);
    return lu.solve(kprime).trace();
}

DetSample det_sample(const SheetPoint& z, const Potential& v, const Quadrature& q,
                     bool with_derivative) {
    const BSOperator op = assemble_bs(z, v, q);
    Eigen::MatrixXcd a = op.matrix;
    a.diagonal().array() += 1.0;
    DetSample out;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const cd piv = lu.matrixLU()(i, i);
        const double mag = std::abs(piv);
        lo = std::min(lo, mag);
        hi = std::max(hi, mag);
        if (mag == 0.0) {
            out.det.exact_zero = true;
        } else {
            out.det.log += std::log(piv);
        }
    }
    if (lu.permutationP().determinant() < 0) out.det.log += cd(0.0, kPi);
    out.rcond = hi > 0.0 ? lo / hi : 0.0;
    if (with_derivative && !out.det.exact_zero) {
        const Eigen::MatrixXcd kprime = assemble_bs_dz(z, v, q);
        out.logderiv = lu.solve(kprime).trace();
    }
    return out;
}

} // namespace halfres

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace halfres {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Point on the logarithmic Riemann surface over C\{0}: modulus rho > 0 and a
// total (unwrapped) argument. arg_total is not reduced mod 2*pi; the sheet
// index is carried implicitly by how far arg_total has wound.
struct SheetPoint {
    double modulus = 1.0;
    double arg_total = kPi;

    cd value() const {
        return modulus * cd(std::cos(arg_total), std::sin(arg_total));
    }

    // base argument in (0, 2*pi]; arg_total == base_arg() + 2*pi*sheet() exactly
    // up to floating rounding.
    double base_arg() const {
        double a = std::fmod(arg_total, kTwoPi);
        if (a <= 0.0) a += kTwoPi;
        return a;
    }

    long sheet() const {
        return std::lround((arg_total - base_arg()) / kTwoPi);
    }

    // log on the surface: ln rho + i * arg_total (injective on the surface)
    cd surface_log() const { return cd(std::log(modulus), arg_total); }
};

inline SheetPoint make_sheet_point(double modulus, double arg_total) {
    if (!(modulus > 0.0) || !std::isfinite(modulus))
        throw std::domain_error("SheetPoint: modulus must be positive and finite");
    if (!std::isfinite(arg_total))
        throw std::domain_error("SheetPoint: arg_total must be finite");
    return SheetPoint{modulus, arg_total};
}

} // namespace halfres

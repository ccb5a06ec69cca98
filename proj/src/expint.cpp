#include "halfres/expint.hpp"

#include <cmath>
#include <limits>

namespace halfres {
namespace detail {

double arg_principal_neg(cd sigma) {
    if (sigma.imag() == 0.0 && sigma.real() > 0.0) return kPi;
    return std::atan2(-sigma.imag(), -sigma.real());
}

cd ei_series_sum(cd sigma) {
    // sum sigma^k/(k*k!), compensated; converges for all sigma, usable in
    // doubles while the cancellation ratio exp(|sigma|-Re sigma) stays modest
    cd sum = 0.0, comp = 0.0;
    cd power_term = 1.0; // sigma^k / k!
    for (int k = 1; k <= 400; ++k) {
        power_term *= sigma / static_cast<double>(k);
        cd term = power_term / static_cast<double>(k);
        cd y = term - comp;
        cd t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::abs(term) <= 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

cd e1_scaled_cf(cd w, int* iterations) {
    // modified Lentz on 1/(w+1 - 1/(w+3 - 4/(w+5 - ...)))
    const double tiny = 1e-290;
    cd f = w + 1.0;
    if (std::abs(f) < tiny) f = tiny;
    cd C = f, D = 0.0;
    int k = 1;
    for (; k <= 6000; ++k) {
        cd a = -static_cast<double>(k) * static_cast<double>(k);
        cd b = w + static_cast<double>(2 * k + 1);
        D = b + a * D;
        if (std::abs(D) < tiny) D = tiny;
        C = b + a / C;
        if (std::abs(C) < tiny) C = tiny;
        D = 1.0 / D;
        cd delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    if (iterations) *iterations = k;
    return 1.0 / f;
}

cd ei_scaled_asymptotic(cd sigma) {
    cd sum = 0.0;
    cd term = 1.0 / sigma;
    double prev = std::numeric_limits<double>::max();
    for (int k = 0; k <= 300; ++k) {
        sum += term;
        term *= static_cast<double>(k + 1) / sigma;
        double mag = std::abs(term);
        if (mag >= prev || mag <= 1e-18 * std::abs(sum)) break;
        prev = mag;
    }
    return sum + cd(0.0, arg_principal_neg(sigma)) * std::exp(-sigma);
}

EiRoute ei_route_for(cd sigma) {
    double r = std::abs(sigma);
    bool in_wedge = std::abs(std::arg(sigma)) <= kEiWedgeAngle;
    if (r <= kEiSeriesRadius || (in_wedge && r <= kEiSeriesCutRadius))
        return EiRoute::Series;
    if (in_wedge) return EiRoute::Asymptotic;
    return EiRoute::ContinuedFraction;
}

static EiValue ei_eval(cd sigma, long m) {
    if (sigma == cd(0.0, 0.0))
        throw std::domain_error("ei: logarithmic singularity at sigma = 0");
    if (!std::isfinite(sigma.real()) || !std::isfinite(sigma.imag()))
        throw std::domain_error("ei: sigma must be finite");

    const double ap = arg_principal_neg(sigma);
    const cd branch_term = cd(0.0, kTwoPi * static_cast<double>(m));
    EiValue out;
    switch (ei_route_for(sigma)) {
    case EiRoute::Series: {
        cd value = cd(kEulerGamma + std::log(std::abs(sigma)), ap)
                 + branch_term + ei_series_sum(sigma);
        cd es = std::exp(-sigma); // |Re sigma| <= 44 here, never overflows
        out = {value, es * value, true};
        break;
    }
    case EiRoute::Asymptotic: {
        // wedge has Re sigma > 0, so exp(-sigma) is small and safe
        cd scaled_principal = ei_scaled_asymptotic(sigma);
        cd em = std::exp(-sigma);
        cd scaled = scaled_principal + branch_term * em;
        cd value = std::exp(sigma) * scaled_principal + branch_term;
        out = {value, scaled, std::isfinite(scaled.real()) && std::isfinite(scaled.imag())};
        break;
    }
    case EiRoute::ContinuedFraction: {
        cd scaled_principal = -e1_scaled_cf(-sigma);
        cd em = std::exp(-sigma); // may overflow for Re sigma << 0
        cd scaled = scaled_principal + branch_term * em;
        cd value = std::exp(sigma) * scaled_principal + branch_term;
        out = {value, scaled, std::isfinite(scaled.real()) && std::isfinite(scaled.imag())};
        break;
    }
    }
    return out;
}

} // namespace detail

EiValue ei_principal(cd sigma, long branch_log) {
    return detail::ei_eval(sigma, branch_log);
}

EiValue ei_on_lambda(const SheetPoint& zeta, double s, int sign) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::domain_error("ei_on_lambda: s must be positive and finite");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("ei_on_lambda: sign must be +1 or -1");

    const cd z = zeta.value();
    const cd sigma = cd(0.0, static_cast<double>(sign)) * z * s;
    // continued argument of -sigma along the winding path: theta - sign*pi/2
    const double theta_cont = zeta.arg_total - 0.5 * kPi * static_cast<double>(sign);
    const long m = std::lround((theta_cont - detail::arg_principal_neg(sigma)) / kTwoPi);
    return detail::ei_eval(sigma, m);
}

} // namespace halfres

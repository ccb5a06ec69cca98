#pragma once

#include "halfres/types.hpp"

namespace halfres {

// Continued exponential integral
//   E(sigma) = gamma + log(-sigma) + sum_{k>=1} sigma^k / (k * k!)
// with the log branch cut along sigma in [0, inf). The principal branch takes
// Arg(-sigma) in (-pi, pi]; on the cut (sigma > 0) this is the limit from
// below, E(x) = Ei(x) + i*pi. branch_log shifts the value by 2*pi*i per unit.
//
// scaled_value = exp(-sigma) * value; valid_scaled says the scaled form was
// produced without overflow. For |Im sigma| > 30 downstream code must combine
// scaled_value with its own exponential factors instead of using value.
struct EiValue {
    cd value;
    cd scaled_value;
    bool valid_scaled;
};

EiValue ei_principal(cd sigma, long branch_log);

// E(sign * i * z * s) for z on the log surface, s > 0, sign in {-1, +1}.
// The branch is the analytic continuation along the path that zeta's
// arg_total describes, starting from the physical sheet.
EiValue ei_on_lambda(const SheetPoint& zeta, double s, int sign);

namespace detail {

// Arg(-sigma) in (-pi, pi], with the on-cut convention Arg(-x) = +pi for x > 0.
double arg_principal_neg(cd sigma);

// entire part sum_{k>=1} sigma^k/(k*k!) by forward summation (compensated)
cd ei_series_sum(cd sigma);

// exp(w)*E1(w) via the modified-Lentz continued fraction
// E1(w) = e^{-w} / (w+1 - 1^2/(w+3 - 2^2/(w+5 - ...))); requires w off (-inf, 0]
cd e1_scaled_cf(cd w, int* iterations = nullptr);

// exp(-sigma)*E(sigma), principal branch, by the divergent-series tail
// sum_k k!/sigma^{k+1} plus the explicit i*Arg(-sigma)*exp(-sigma) cut term;
// accurate for |sigma| >= 44 near the cut
cd ei_scaled_asymptotic(cd sigma);

// which evaluation route ei_principal takes (exposed for the hand-off tests)
enum class EiRoute { Series, ContinuedFraction, Asymptotic };
EiRoute ei_route_for(cd sigma);

// series stays in charge inside |arg sigma| <= kEiWedgeAngle up to |sigma| =
// kEiSeriesCutRadius; the continued fraction handles the rest beyond radius 6
inline constexpr double kEiWedgeAngle = 0.62831853071795864769;   // pi/5
inline constexpr double kEiSeriesRadius = 6.0;
inline constexpr double kEiSeriesCutRadius = 44.0;

} // namespace detail

} // namespace halfres

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halfres/expint.hpp"
#include "oracle_utils.hpp"

using halfres::cd;
using halfres::ei_principal;
using halfres::ei_on_lambda;
using halfres::SheetPoint;
using halfres::kPi;
using halfres::kTwoPi;

// generated by tools/oracles/expint_reference.py (mpmath, adaptive precision)
struct EiRef { cd sigma; cd value; cd scaled; };
static const EiRef kEiRefs[] = {
    {cd(-1.0000000000000000, 0.0), cd(-0.21938393439552027, 0.0), cd(-0.59634736232319407, 0.0)},
    {cd(1.0000000000000000, 0.0), cd(1.8951178163559368, 3.1415926535897932), cd(0.69717488323506607, 1.1557273497909217)},
    {cd(0.50000000000000000, 0.80000000000000004), cd(0.87057504593057871, -1.1321958206185075), cd(-0.12473429934842109, -0.85722235857550429)},
    {cd(-3.0000000000000000, 4.0000000000000000), cd(-0.00086395395897958511, 0.0087862083771974420), cd(-0.12221459566956696, -0.12848500180921379)},
    {cd(0.0, 1.0000000000000000), cd(0.33740392290096813, -0.62471325642771360), cd(-0.34337796155642703, -0.62144962423581336)},
    {cd(0.0, -2.5000000000000000), cd(0.28587119636538350, -0.20772384664893002), cd(-0.10470694795138418, 0.33750258136599484)},
    {cd(0.70710678118654752, -0.70710678118654752), cd(1.2334669156788152, 1.3612337887636672), cd(0.026344071660165418, 0.90536104778976647)},
    {cd(-50.000000000000000, 0.0), cd(-3.7832640295504590e-24, 0.0), cd(-0.019615109930114870, 0.0)},
    {cd(17.320508075688773, 10.000000000000000), cd(-1740357.9293238357, -39560.197774653237), cd(0.044523610708302990, -0.027450728708584778)},
    {cd(18.000000000000000, 2.0000000000000000), cd(-1178651.4563272991, 3665744.3510325330), cd(0.058235543375590562, -0.0069104994241006765)},
    {cd(-12.000000000000000, -9.0000000000000000), cd(3.8258544625755604e-7, -7.1241065449912102e-8), cd(-0.051955466299723144, 0.036226030678604306)},
    {cd(57.955549577344097, 15.529142706151246), cd(-2.2607199247736636e+23, 1.0785813753681422e+23), cd(0.016346113053341155, -0.0044595205254153657)},
    {cd(-200.00000000000000, 40.000000000000000), cd(5.3991686690578721e-90, -4.0557559985898888e-90), cd(-0.0047856961333189060, -0.00095242206426857605)},
    {cd(3.0000000000000000, -35.000000000000000), cd(-0.27421481107446088, -0.50252580893218215), cd(0.0016246986602415903, 0.028455434793517872)},
};

static double rel_err(cd got, cd want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

TEST_CASE("principal branch matches frozen high-precision references") {
    for (const auto& ref : kEiRefs) {
        auto v = ei_principal(ref.sigma, 0);
        INFO("sigma = " << ref.sigma.real() << " + " << ref.sigma.imag() << "i");
        CHECK(rel_err(v.value, ref.value) < 5e-13);
        REQUIRE(v.valid_scaled);
        CHECK(rel_err(v.scaled_value, ref.scaled) < 5e-13);
    }
}

TEST_CASE("branch shift adds 2*pi*i per unit") {
    const cd sigma(0.3, -1.1);
    auto base = ei_principal(sigma, 0);
    for (long m : {-3L, -1L, 1L, 2L, 7L}) {
        auto shifted = ei_principal(sigma, m);
        cd expect = base.value + cd(0.0, kTwoPi * m);
        CHECK(std::abs(shifted.value - expect) < 1e-13 * std::abs(expect));
    }
    // frozen scaled value at m = 2 (mpmath)
    auto s2 = ei_principal(sigma, 2);
    CHECK(rel_err(s2.scaled_value, cd(-8.4926944446148651, 4.8885838460474981)) < 1e-13);
}

TEST_CASE("scaled value large-argument behavior: sigma * scaled -> 1") {
    auto v = ei_principal(cd(-50.0, 0.0), 0);
    REQUIRE(v.valid_scaled);
    CHECK(std::abs(cd(-50.0, 0.0) * v.scaled_value - 1.0) < 0.025);
    // scaled and value stay consistent where both are finite
    CHECK(rel_err(v.scaled_value, std::exp(cd(50.0, 0.0)) * v.value) < 1e-12);
}

TEST_CASE("derivative identity dE/dsigma = exp(sigma)/sigma (central differences)") {
    const cd pts[] = {cd(0.7, 0.4), cd(-2.0, 1.0), cd(3.0, -9.0), cd(-14.0, 5.0)};
    for (cd s : pts) {
        const double h = 1e-5 * std::max(1.0, std::abs(s));
        cd d = (ei_principal(s + h, 0).value - ei_principal(s - h, 0).value) / (2.0 * h);
        cd want = std::exp(s) / s;
        CHECK(rel_err(d, want) < 1e-8);
    }
}

TEST_CASE("route hand-offs agree to 1e-10 in the overlap annulus |sigma| in [15,25]") {
    using namespace halfres::detail;
    // the hand-off in that annulus is the series <-> continued-fraction wedge
    // boundary |arg sigma| = wedge angle; sample across it on both sides
    for (double r = 15.0; r <= 25.0; r += 2.5) {
        for (double da : {-0.02, -0.005, 0.005, 0.02}) {
            for (int side : {-1, +1}) {
                double a = side * (kEiWedgeAngle + da);
                cd sigma = std::polar(r, a);
                cd se = cd(halfres::kEulerGamma + std::log(r), arg_principal_neg(sigma))
                      + ei_series_sum(sigma);
                cd cf = std::exp(sigma) * (-e1_scaled_cf(-sigma));
                INFO("sigma = " << r << " * exp(" << a << " i)");
                CHECK(rel_err(se, cf) < 1e-10);
                // scaled forms as well (this is what the kernel consumes)
                cd se_scaled = std::exp(-sigma) * se;
                cd cf_scaled = -e1_scaled_cf(-sigma);
                CHECK(rel_err(se_scaled, cf_scaled) < 1e-10);
            }
        }
    }
    // the in-wedge series <-> asymptotic hand-off at |sigma| = 44
    for (double a : {-0.5, -0.2, 0.0, 0.2, 0.5}) {
        double aa = a * kEiWedgeAngle;
        for (double r : {42.0, 44.0, 46.0}) {
            cd sigma = std::polar(r, aa);
            cd se_scaled = std::exp(-sigma)
                * (cd(halfres::kEulerGamma + std::log(r), arg_principal_neg(sigma))
                   + ei_series_sum(sigma));
            cd as_scaled = ei_scaled_asymptotic(sigma);
            CHECK(rel_err(se_scaled, as_scaled) < 1e-10);
        }
    }
}

TEST_CASE("surface evaluation matches principal branch on the physical sheet") {
    SheetPoint zeta{1.0, kPi / 4.0};
    auto a = ei_on_lambda(zeta, 1.0, -1);
    auto b = ei_principal(cd(0.0, -1.0) * std::polar(1.0, kPi / 4.0), 0);
    CHECK(std::abs(a.value - b.value) < 1e-15 * std::abs(b.value) + 1e-300);

    auto c = ei_on_lambda(zeta, 1.0, +1);
    auto d = ei_principal(cd(0.0, 1.0) * std::polar(1.0, kPi / 4.0), 0);
    CHECK(std::abs(c.value - d.value) < 1e-15 * std::abs(d.value) + 1e-300);
}

TEST_CASE("one full winding adds exactly 2*pi*i") {
    for (double rho : {0.3, 1.0, 2.7}) {
        for (double s : {0.5, 1.0, 3.0}) {
            for (int sign : {-1, +1}) {
                SheetPoint base{rho, 0.7};
                SheetPoint up{rho, 0.7 + kTwoPi};
                SheetPoint dn{rho, 0.7 - kTwoPi};
                cd v0 = ei_on_lambda(base, s, sign).value;
                CHECK(std::abs(ei_on_lambda(up, s, sign).value - v0 - cd(0.0, kTwoPi)) < 1e-12);
                CHECK(std::abs(ei_on_lambda(dn, s, sign).value - v0 + cd(0.0, kTwoPi)) < 1e-12);
            }
        }
    }
}

TEST_CASE("winding continuation matches explicit path integration of exp(p)/p") {
    // E(sigma) continued along |sigma| = const circles; compare against the
    // ODE dE/dt = i exp(sigma(t)) integrated with GL panels from a trusted
    // series value at the start
    for (double rho : {0.4, 1.3}) {
        for (double s : {0.8, 2.0}) {
            double radius = rho * s;
            for (int sign : {-1, +1}) {
                double theta0 = 0.9;
                // start: sigma0 = sign*i*z0*s with z0 = rho*exp(i*theta0)
                double a0 = theta0 + sign * kPi / 2.0;
                cd start = oracle::ei_series_reference(std::polar(radius, a0));
                for (double turn : {kTwoPi, -kTwoPi, 2.0 * kTwoPi, 3.5}) {
                    cd expect = oracle::continue_ei_along_circle(start, radius, a0, turn);
                    SheetPoint zeta{rho, theta0 + turn};
                    cd got = ei_on_lambda(zeta, s, sign).value;
                    INFO("rho=" << rho << " s=" << s << " sign=" << sign << " turn=" << turn);
                    CHECK(std::abs(got - expect) < 1e-11 * std::max(1.0, std::abs(expect)));
                }
            }
        }
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(ei_principal(cd(0.0, 0.0), 0), std::domain_error);
    CHECK_THROWS_AS(ei_on_lambda(SheetPoint{1.0, 0.0}, 0.0, 1), std::domain_error);
    CHECK_THROWS_AS(ei_on_lambda(SheetPoint{1.0, 0.0}, -2.0, 1), std::domain_error);
    CHECK_THROWS_AS(ei_on_lambda(SheetPoint{1.0, 0.0}, 1.0, 2), std::invalid_argument);
}

TEST_CASE("sheet point bookkeeping") {
    SheetPoint p{2.0, 5.0 * kPi / 2.0};
    CHECK(p.sheet() == 1);
    CHECK(p.base_arg() == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    SheetPoint q{2.0, -kPi / 2.0};
    CHECK(q.sheet() == -1);
    CHECK(q.base_arg() == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-14));
    SheetPoint r{1.0, kTwoPi};
    CHECK(r.sheet() == 0);
    CHECK(r.base_arg() == doctest::Approx(kTwoPi).epsilon(1e-14));
}

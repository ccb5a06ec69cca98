#include "halfres/free_resolvent.hpp"

#include <cmath>

namespace halfres {

namespace {

constexpr double kPi2 = kPi * kPi;
constexpr double kPi3 = kPi2 * kPi;

void require_dimension(int d) {
    if (d != 3 && d != 5)
        throw std::invalid_argument("kernel: dimension must be 3 or 5");
}

void require_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::domain_error("kernel: r must be positive and finite");
}

// P-(r) = e^{izr} E(-izr) and P+(r) = e^{-izr} E(izr), branch-continued.
// These are exactly the scaled_value fields: exp(-sigma) with sigma = -+izr
// reproduces the e^{+-izr} prefactors.
struct EiPair {
    cd pm; // e^{izr} E(-izr)
    cd pp; // e^{-izr} E(izr)
};

EiPair ei_products(const SheetPoint& z, double r) {
    auto em = ei_on_lambda(z, r, -1);
    auto ep = ei_on_lambda(z, r, +1);
    cd zv = z.value();
    cd pm = em.valid_scaled ? em.scaled_value : std::exp(cd(0, 1) * zv * r) * em.value;
    cd pp = ep.valid_scaled ? ep.scaled_value : std::exp(-cd(0, 1) * zv * r) * ep.value;
    return {pm, pp};
}

cd sin_over_u(cd u) {
    if (std::abs(u) < 1e-4) {
        cd u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

// (sin u - u cos u)/u^3, entire
cd sinmcos_over_u3(cd u) {
    if (std::abs(u) < 1e-3) {
        cd u2 = u * u;
        return 1.0 / 3.0 - u2 / 30.0 + u2 * u2 / 840.0;
    }
    return (std::sin(u) - u * std::cos(u)) / (u * u * u);
}

} // namespace

KernelConstants kernel_constants(int dimension) {
    require_dimension(dimension);
    KernelConstants k;
    k.dimension = dimension;
    if (dimension == 3) {
        k.c = {cd(0.0, -2.0 * kPi)};
        k.ctilde = {cd(1.0 / (4.0 * kPi2), 0.0)};
        k.alpha_1 = 1.0 / (2.0 * kPi2);
    } else {
        k.c = {cd(-4.0 * kPi2, 0.0), cd(0.0, -4.0 * kPi2)};
        k.ctilde = {cd(-1.0 / (8.0 * kPi3), 0.0), cd(1.0 / (8.0 * kPi3), 0.0)};
        k.alpha_1 = 1.0 / (2.0 * kPi3);
    }
    return k;
}

cd omega_sphere(int dimension, cd u) {
    require_dimension(dimension);
    if (dimension == 3) return 4.0 * kPi * sin_over_u(u);
    return 8.0 * kPi2 * sinmcos_over_u3(u);
}

double riesz_limit(int dimension, double r) {
    require_dimension(dimension);
    require_radius(r);
    return kernel_constants(dimension).alpha_1 * std::pow(r, 1 - dimension);
}

KernelValue outgoing_kernel(int dimension, const SheetPoint& z, double r) {
    require_dimension(dimension);
    require_radius(r);
    const cd zv = z.value();
    const auto [pm, pp] = ei_products(z, r);
    const cd eizr = std::exp(cd(0, 1) * zv * r);
    KernelValue out;
    if (dimension == 3) {
        cd bracket = 2.0 / r + cd(0, 1) * zv * (pm - pp) + 2.0 * kPi * zv * eizr;
        out.value = bracket / (4.0 * kPi2 * r);
        out.singular_part = 1.0 / (2.0 * kPi2 * r * r) + zv / (4.0 * kPi * r)
                          - zv * zv / (2.0 * kPi2) * std::log(r);
    } else {
        cd z2 = zv * zv;
        out.value = (4.0 / (r * r * r * r) + z2 * (pm + pp) / (r * r)
                     + cd(0, 1) * zv * (pm - pp) / (r * r * r)
                     + 2.0 * kPi * zv * (1.0 - cd(0, 1) * zv * r) * eizr / (r * r * r))
                  / (8.0 * kPi3);
        cd z3 = z2 * zv;
        out.singular_part = 1.0 / (2.0 * kPi3 * std::pow(r, 4)) + zv / (8.0 * kPi2 * r * r * r)
                          + z2 / (4.0 * kPi3 * r * r) + z3 / (16.0 * kPi2 * r)
                          - z2 * z2 / (12.0 * kPi3) * std::log(r);
    }
    return out;
}

KernelValue incoming_kernel(int dimension, const SheetPoint& z, double r) {
    require_dimension(dimension);
    require_radius(r);
    const cd zv = z.value();
    const auto [pm, pp] = ei_products(z, r);
    const cd emizr = std::exp(-cd(0, 1) * zv * r);
    KernelValue out;
    if (dimension == 3) {
        cd bracket = 2.0 / r + cd(0, 1) * zv * (pm - pp) + 2.0 * kPi * zv * emizr;
        out.value = bracket / (4.0 * kPi2 * r);
        out.singular_part = 1.0 / (2.0 * kPi2 * r * r) + zv / (4.0 * kPi * r)
                          - zv * zv / (2.0 * kPi2) * std::log(r);
    } else {
        cd z2 = zv * zv;
        out.value = (4.0 / (r * r * r * r) + z2 * (pm + pp) / (r * r)
                     + cd(0, 1) * zv * (pm - pp) / (r * r * r)
                     + 2.0 * kPi * zv * (1.0 + cd(0, 1) * zv * r) * emizr / (r * r * r))
                  / (8.0 * kPi3);
        cd z3 = z2 * zv;
        out.singular_part = 1.0 / (2.0 * kPi3 * std::pow(r, 4)) + zv / (8.0 * kPi2 * r * r * r)
                          + z2 / (4.0 * kPi3 * r * r) + z3 / (16.0 * kPi2 * r)
                          - z2 * z2 / (12.0 * kPi3) * std::log(r);
    }
    return out;
}

cd outgoing_kernel_dz(int dimension, const SheetPoint& z, double r) {
    require_dimension(dimension);
    require_radius(r);
    const cd zv = z.value();
    const auto [pm, pp] = ei_products(z, r);
    const cd eizr = std::exp(cd(0, 1) * zv * r);
    const cd i(0, 1);
    if (dimension == 3) {
        cd dbracket = (i - zv * r) * pm - (i + zv * r) * pp
                    + 2.0 * kPi * (1.0 + i * zv * r) * eizr;
        return dbracket / (4.0 * kPi2 * r);
    }
    cd z2 = zv * zv;
    cd term2 = (2.0 * zv * (pm + pp) + i * r * z2 * (pm - pp) + 2.0 * zv) / (r * r);
    cd term1 = (i * (pm - pp) - zv * r * (pm + pp)) / (r * r * r);
    cd termf = 2.0 * kPi * (1.0 - i * zv * r + z2 * r * r) * eizr / (r * r * r);
    return (term2 + term1 + termf) / (8.0 * kPi3);
}

cd sheet_jump(int dimension, const SheetPoint& z0, long m, double r) {
    require_dimension(dimension);
    require_radius(r);
    if (m == 0) return cd(0.0, 0.0);
    const cd i(0, 1);
    const cd zb = std::polar(z0.modulus, z0.base_arg());
    const cd u = zb * r;
    if (dimension == 3)
        return -i * static_cast<double>(m) * zb * zb * sin_over_u(u) / kPi;
    return -i * static_cast<double>(m) * zb * zb * zb * zb * sinmcos_over_u3(u) / (2.0 * kPi2);
}

SmallRModel small_r_model(const SheetPoint& z) {
    const SingularModel m = singular_model(3, z);
    SmallRModel model;
    model.alpha_1 = m.inv_power[0].real();
    model.beta_1 = m.inv_power[1];
    model.beta_log = m.log_coef;
    model.beta_0 = m.r0_limit;
    return model;
}

SingularModel singular_model(int dimension, const SheetPoint& z) {
    require_dimension(dimension);
    const cd zv = z.value();
    const cd z2 = zv * zv;
    // gamma + log z - i*pi with the surface log, so the constant term keeps
    // continuing across sheets together with the kernel
    const cd lam = kEulerGamma + z.surface_log() - cd(0, kPi);
    SingularModel model;
    if (dimension == 3) {
        model.inv_power = {cd(1.0 / (2.0 * kPi2), 0.0), zv / (4.0 * kPi)};
        model.log_coef = -z2 / (2.0 * kPi2);
        model.r0_limit = z2 * (1.0 - lam) / (2.0 * kPi2);
        return model;
    }
    const cd z3 = z2 * zv;
    const cd z4 = z2 * z2;
    model.inv_power = {cd(1.0 / (2.0 * kPi3), 0.0), zv / (8.0 * kPi2),
                       z2 / (4.0 * kPi3), z3 / (16.0 * kPi2)};
    model.log_coef = -z4 / (12.0 * kPi3);
    model.r0_limit = z4 * (4.0 - 3.0 * lam) / (36.0 * kPi3);
    return model;
}

SingularModel singular_model_dz(int dimension, const SheetPoint& z) {
    require_dimension(dimension);
    const cd zv = z.value();
    const cd z2 = zv * zv;
    const cd lam = kEulerGamma + z.surface_log() - cd(0, kPi);
    SingularModel model;
    if (dimension == 3) {
        model.inv_power = {cd(0.0, 0.0), cd(1.0 / (4.0 * kPi), 0.0)};
        model.log_coef = -2.0 * zv / (2.0 * kPi2);
        model.r0_limit = (2.0 * zv * (1.0 - lam) - zv) / (2.0 * kPi2);
        return model;
    }
    const cd z3 = z2 * zv;
    model.inv_power = {cd(0.0, 0.0), cd(1.0 / (8.0 * kPi2), 0.0),
                       zv / (2.0 * kPi3), 3.0 * z2 / (16.0 * kPi2)};
    model.log_coef = -z3 / (3.0 * kPi3);
    model.r0_limit = (4.0 * z3 * (4.0 - 3.0 * lam) - 3.0 * z3) / (36.0 * kPi3);
    return model;
}

} // namespace halfres

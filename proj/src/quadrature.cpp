#include "halfres/quadrature.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "halfres/gauss.hpp"

namespace halfres {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1 || n > 200) throw std::invalid_argument("gauss_legendre: n out of range");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p1d = n * (t * p0 - p1) / (t * t - 1.0);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * p1d * p1d);
    }
}

namespace {

// ball integrals of the singular basis around an interior point at radius a:
// int_{B(0,R)} |x0 - y|^{-2} dy and |x0 - y|^{-1} dy in closed form
double ball_inv2(double R, double a) {
    if (a < 1e-14) return 4.0 * kPi * R;
    return (2.0 * kPi / a) *
           ((R * R - a * a) / 2.0 * std::log((R + a) / (R - a)) + a * R);
}

double ball_inv1(double R, double a) {
    return 2.0 * kPi * R * R - (2.0 * kPi / 3.0) * a * a;
}

// spherical mean of log|x0 - y| over |y| = rho, |x0| = a
double log_mean(double rho, double a) {
    const double up = rho + a;
    const double dn = std::abs(rho - a);
    const double fup = up * up * (2.0 * std::log(up) - 1.0);
    const double fdn = (dn == 0.0) ? 0.0 : dn * dn * (2.0 * std::log(dn) - 1.0);
    return (fup - fdn) / (8.0 * rho * a);
}

// int_{B(0,R)} log|x0 - y| dy by radial panels split at the kink rho = a,
// geometrically refined toward it
double ball_log(double R, double a) {
    static std::vector<double> gx, gw;
    if (gx.empty()) gauss_legendre(16, gx, gw);
    auto segment = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (std::size_t q = 0; q < gx.size(); ++q) {
            const double rho = mid + half * gx[q];
            acc += gw[q] * half * 4.0 * kPi * rho * rho * log_mean(rho, a);
        }
        return acc;
    };
    auto graded = [&](double lo, double hi, bool toward_hi) {
        double acc = 0.0;
        const double len = hi - lo;
        if (len <= 0.0) return acc;
        double frac = 1.0;
        for (int k = 0; k < 40; ++k) {
            const double next = (k == 39) ? 0.0 : frac * 0.5;
            acc += toward_hi ? segment(hi - frac * len, hi - next * len)
                             : segment(lo + next * len, lo + frac * len);
            frac = next;
        }
        return acc;
    };
    if (a < 1e-14) return 4.0 * kPi * R * R * R * (std::log(R) / 3.0 - 1.0 / 9.0);
    return graded(0.0, a, true) + graded(a, R, false);
}

} // namespace

Quadrature build_quadrature(double R, int n) {
    if (!(R > 0.0) || !std::isfinite(R))
        throw std::domain_error("build_quadrature: R must be positive and finite");
    if (n < 8) throw std::invalid_argument("build_quadrature: need n >= 8");

    if (n % 2 != 0)
        throw std::invalid_argument("build_quadrature: need even n");

    const int nt = std::max(6, n / 3);
    const int nphi_max = 2 * nt;

    std::vector<double> xt, wt, g2x, g2w;
    gauss_legendre(nt, xt, wt);
    gauss_legendre(2, g2x, g2w);

    // Reduced azimuth counts: each colatitude ring carries a node count
    // proportional to its circumference, so node spacing is quasi uniform
    // over the sphere. A fixed azimuth count would place nodes a distance
    // of order s/n^2 apart on the polar rings, and those pairs couple
    // through a 1/r^2 kernel with O(1) strength no matter how fine the
    // rule; that pollutes every trace and determinant downstream. The ring
    // weight is wt * 2 pi / count, so the angular weights still sum to
    // 4 pi exactly. Counts stay even to keep the half-offset rings closed
    // under both equatorial reflections.
    std::vector<int> nphi(nt);
    for (int j = 0; j < nt; ++j) {
        const double st = std::sqrt(std::max(0.0, 1.0 - xt[j] * xt[j]));
        nphi[j] = std::max(6, 2 * static_cast<int>(std::lround(0.5 * nphi_max * st)));
    }
    Eigen::Index per_shell = 0;
    for (int j = 0; j < nt; ++j) per_shell += nphi[j];

    Quadrature q;
    q.dimension = 3;
    q.R = R;
    const Eigen::Index total = static_cast<Eigen::Index>(n) * per_shell;
    q.nodes.resize(total, 3);
    q.weights.resize(total);

    Eigen::Index row = 0;
    for (int i = 0; i < n; ++i) {
        // Uniform radial cells with two Gauss nodes per cell; the two point
        // rule integrates cubics, so the r^2 cell mass is exact and the
        // total mass telescopes to R^3/3. A single Gauss rule over the
        // whole radius would cluster nodes quadratically at the boundary,
        // and the near-singular kernel couplings between those crowded
        // shells inject spurious top modes whose count grows with
        // refinement; uniform cells keep node spacing, and with it the
        // neighbor couplings, O(1/n).
        const double lo = (i / 2) * 2.0 * R / n, hi = (i / 2 + 1) * 2.0 * R / n;
        const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g2x[i % 2];
        const double wrad = 0.5 * (hi - lo) * g2w[i % 2] * r * r;
        for (int j = 0; j < nt; ++j) {
            const double ct = xt[j];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            const double wphi = kTwoPi / nphi[j];
            for (int k = 0; k < nphi[j]; ++k) {
                // half-step azimuth offset keeps nodes off the coordinate planes
                const double phi = (k + 0.5) * wphi;
                q.nodes(row, 0) = r * st * std::cos(phi);
                q.nodes(row, 1) = r * st * std::sin(phi);
                q.nodes(row, 2) = r * ct;
                q.weights(row) = wrad * wt[j] * wphi;
                ++row;
            }
        }
    }

    q.cell_radius = (q.weights * (3.0 / (4.0 * kPi))).array().pow(1.0 / 3.0);

    // Moment calibration of the diagonal corrections: j_* is defined so that
    // the plain off-diagonal sum plus the correction integrates the singular
    // basis 1/s^2, 1/s, log s over the whole ball exactly (the ball integrals
    // have closed forms). A per-cell model was tried first and fails near the
    // boundary, where polar cells are anisotropic and the model hole swallows
    // neighboring nodes.
    q.j_inv2.resize(total);
    q.j_inv1.resize(total);
    q.j_log.resize(total);
    for (Eigen::Index i = 0; i < total; ++i) {
        const double a = q.nodes.row(i).norm();
        double s2 = 0.0, s1 = 0.0, sl = 0.0;
        for (Eigen::Index j = 0; j < total; ++j) {
            if (j == i) continue;
            const double dx = q.nodes(j, 0) - q.nodes(i, 0);
            const double dy = q.nodes(j, 1) - q.nodes(i, 1);
            const double dz = q.nodes(j, 2) - q.nodes(i, 2);
            const double ssq = dx * dx + dy * dy + dz * dz;
            const double w = q.weights(j);
            s2 += w / ssq;
            s1 += w / std::sqrt(ssq);
            sl += 0.5 * w * std::log(ssq);
        }
        q.j_inv2(i) = ball_inv2(R, a) - s2;
        q.j_inv1(i) = ball_inv1(R, a) - s1;
        q.j_log(i) = ball_log(R, a) - sl;
    }

    q.coarse = n < 12;
    if (q.coarse)
        std::cerr << "build_quadrature: n = " << n
                  << " radial nodes is coarse for R = " << R << "\n";
    return q;
}

} // namespace halfres

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "halfres/fourier_grid.hpp"
#include "halfres/free_resolvent.hpp"
#include "halfres/potential.hpp"
#include "halfres/types.hpp"

using halfres::cd;
using halfres::FourierGrid;
using halfres::kPi;
using halfres::kTwoPi;

namespace {

double l2_norm(const std::vector<cd>& f) {
    double acc = 0.0;
    for (const cd& x : f) acc += std::norm(x);
    return std::sqrt(acc);
}

double l2_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
    return std::sqrt(acc);
}

// truncated gaussian bump sampled on the grid, supported in |x| <= cutoff
std::vector<cd> gaussian_bump(const FourierGrid& g, double width, double cutoff,
                              cd scale = cd(1.0, 0.0)) {
    std::vector<cd> f(g.size());
    for (int i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        for (int j = 0; j < g.n; ++j) {
            const double y = g.coord(j);
            for (int k = 0; k < g.n; ++k) {
                const double z = g.coord(k);
                const double r2 = x * x + y * y + z * z;
                f[g.index(i, j, k)] = (r2 <= cutoff * cutoff)
                                          ? scale * std::exp(-r2 / (2.0 * width * width))
                                          : cd(0.0, 0.0);
            }
        }
    }
    return f;
}

} // namespace

TEST_CASE("single fourier mode is multiplied pointwise") {
    const FourierGrid g = halfres::make_fourier_grid(32, 6.4);
    const int k0[3] = {3, -2, 5};
    const double xi[3] = {kTwoPi * k0[0] / g.box, kTwoPi * k0[1] / g.box,
                          kTwoPi * k0[2] / g.box};
    const double mag = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);

    std::vector<cd> f(g.size());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k)
                f[g.index(i, j, k)] = std::exp(
                    cd(0.0, xi[0] * g.coord(i) + xi[1] * g.coord(j) + xi[2] * g.coord(k)));

    const cd z(0.3, 0.8);
    const std::vector<cd> u = halfres::apply_resolvent_fourier(g, z, f);
    const cd want_factor = 1.0 / (mag - z);
    double worst = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m)
        worst = std::max(worst, std::abs(u[m] - want_factor * f[m]));
    CHECK(worst < 1e-12 * std::abs(want_factor));

    const std::vector<cd> hf = halfres::apply_half_laplacian(g, f);
    worst = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m)
        worst = std::max(worst, std::abs(hf[m] - mag * f[m]));
    CHECK(worst < 1e-12 * mag);
}

TEST_CASE("resolvent inverts the discrete operator") {
    const FourierGrid g = halfres::make_fourier_grid(48, 9.6);
    const std::vector<cd> f = gaussian_bump(g, 0.5, 1.2, cd(0.7, -0.4));
    const cd z(0.9, 0.6);
    const std::vector<cd> u = halfres::apply_resolvent_fourier(g, z, f);
    std::vector<cd> back = halfres::apply_half_laplacian(g, u);
    for (std::size_t m = 0; m < back.size(); ++m) back[m] -= z * u[m];
    CHECK(l2_diff(back, f) / l2_norm(f) < 1e-10);
}

TEST_CASE("convolution theorem on a shifted delta") {
    // kernel = delta at displacement (h, 0, 0) scaled by 1/h^3 convolves into
    // a one-cell translation; checks layout and normalization conventions
    const FourierGrid g = halfres::make_fourier_grid(16, 3.2);
    const double cell = g.h() * g.h() * g.h();
    std::vector<cd> kernel(g.size(), cd(0.0, 0.0));
    kernel[g.index(g.n / 2 + 1, g.n / 2, g.n / 2)] = 1.0 / cell;

    std::vector<cd> f(g.size());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k)
                f[g.index(i, j, k)] =
                    cd(std::sin(0.9 * g.coord(i)) + 0.3 * g.coord(j),
                       std::cos(1.1 * g.coord(k)));

    const std::vector<cd> got = halfres::convolve_grid(g, kernel, f);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                const cd want = f[g.index((i + g.n - 1) % g.n, j, k)];
                worst = std::max(worst, std::abs(got[g.index(i, j, k)] - want));
            }
    CHECK(worst < 1e-12);
}

TEST_CASE("kernel convolution matches the multiplier oracle") {
    // the build-gating cross-check: tabulated outgoing kernel convolved with
    // a bump reproduces the Fourier-side resolvent at z = 1 + 1i on 128^3
    const FourierGrid g = halfres::make_fourier_grid(128, 12.8);
    const cd z(1.0, 1.0);
    const halfres::SheetPoint zp =
        halfres::make_sheet_point(std::abs(z), std::arg(z));

    const std::vector<cd> f = gaussian_bump(g, 0.5, 1.6);
    const std::vector<cd> table = halfres::tabulate_outgoing_kernel(g, zp);
    const std::vector<cd> via_kernel = halfres::convolve_grid(g, table, f);
    const std::vector<cd> via_multiplier = halfres::apply_resolvent_fourier(g, z, f);

    const double rel = l2_diff(via_kernel, via_multiplier) / l2_norm(via_multiplier);
    CHECK(rel < 1e-3);
    MESSAGE("kernel vs multiplier relative l2: ", rel);
}

TEST_CASE("bound state oracle finds a negative level") {
    const halfres::Potential v = halfres::make_ball_step(cd(-5.0, 0.0), 1.0);
    const FourierGrid coarse = halfres::make_fourier_grid(32, 12.8);
    const FourierGrid fine = halfres::make_fourier_grid(48, 12.8);
    const double e_coarse = halfres::lowest_eigenvalue_fourier(coarse, v, 80);
    const double e_fine = halfres::lowest_eigenvalue_fourier(fine, v, 80);
    CHECK(e_coarse < -0.5);
    CHECK(e_fine < -0.5);
    CHECK(std::abs(e_coarse - e_fine) / std::abs(e_fine) < 5e-2);
    MESSAGE("well depth 5 ground state: ", e_coarse, " -> ", e_fine);

    // krylov depth is converged well below the grid difference
    const double e_shallow = halfres::lowest_eigenvalue_fourier(fine, v, 60);
    CHECK(std::abs(e_shallow - e_fine) < 1e-6 * std::abs(e_fine));
}

TEST_CASE("grid and argument validation") {
    CHECK_THROWS_AS(halfres::make_fourier_grid(15, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(halfres::make_fourier_grid(2, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(halfres::make_fourier_grid(16, 0.0), std::domain_error);

    const FourierGrid g = halfres::make_fourier_grid(16, 4.0);
    std::vector<cd> f(g.size(), cd(1.0, 0.0));
    CHECK_THROWS_AS(halfres::apply_resolvent_fourier(g, cd(1.0, 0.0), f),
                    std::domain_error);
    CHECK_THROWS_AS(halfres::apply_resolvent_fourier(g, cd(1.0, -0.2), f),
                    std::domain_error);
    std::vector<cd> wrong(g.size() - 1);
    CHECK_THROWS_AS(halfres::apply_resolvent_fourier(g, cd(1.0, 0.5), wrong),
                    std::invalid_argument);
    CHECK_THROWS_AS(halfres::apply_half_laplacian(g, wrong), std::invalid_argument);

    const halfres::Potential complex_v =
        halfres::make_ball_step(cd(-1.0, 0.5), 1.0);
    CHECK_THROWS_AS(halfres::lowest_eigenvalue_fourier(g, complex_v, 20),
                    std::invalid_argument);
}

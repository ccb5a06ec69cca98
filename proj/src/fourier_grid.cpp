#include "halfres/fourier_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <fftw3.h>

#include "halfres/free_resolvent.hpp"
#include "halfres/gauss.hpp"

namespace halfres {

namespace {

void fft3_inplace(int n, std::vector<cd>& data, int sign) {
    fftw_plan plan = fftw_plan_dft_3d(
        n, n, n, reinterpret_cast<fftw_complex*>(data.data()),
        reinterpret_cast<fftw_complex*>(data.data()), sign, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fourier_grid: fftw plan failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

void check_sizes(const FourierGrid& grid, const std::vector<cd>& f, const char* who) {
    if (f.size() != grid.size())
        throw std::invalid_argument(std::string(who) + ": grid function has wrong size");
}

std::vector<double> axis_freqs(const FourierGrid& grid) {
    std::vector<double> xi(grid.n);
    for (int k = 0; k < grid.n; ++k) xi[k] = grid.freq(k);
    return xi;
}

// out = sqrt(-Laplace) f + V f on the grid, real arithmetic
void apply_hamiltonian(const FourierGrid& grid, const std::vector<double>& vgrid,
                       const Eigen::VectorXd& f, Eigen::VectorXd& out,
                       std::vector<cd>& scratch) {
    const std::size_t total = grid.size();
    for (std::size_t m = 0; m < total; ++m) scratch[m] = cd(f[m], 0.0);
    fft3_inplace(grid.n, scratch, FFTW_FORWARD);
    const std::vector<double> xi = axis_freqs(grid);
    std::size_t m = 0;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            for (int k = 0; k < grid.n; ++k, ++m)
                scratch[m] *= std::sqrt(xi[i] * xi[i] + xi[j] * xi[j] + xi[k] * xi[k]);
    fft3_inplace(grid.n, scratch, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t q = 0; q < total; ++q)
        out[q] = scratch[q].real() * scale + vgrid[q] * f[q];
}

} // namespace

FourierGrid make_fourier_grid(int n, double box) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("make_fourier_grid: n must be even and >= 4");
    if (!(box > 0.0) || !std::isfinite(box))
        throw std::domain_error("make_fourier_grid: box side must be positive");
    FourierGrid g;
    g.n = n;
    g.box = box;
    return g;
}

std::vector<cd> sample_potential(const FourierGrid& grid, const Potential& v) {
    std::vector<cd> out(grid.size());
    std::size_t m = 0;
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.coord(i);
        for (int j = 0; j < grid.n; ++j) {
            const double y = grid.coord(j);
            for (int k = 0; k < grid.n; ++k, ++m) out[m] = v(x, y, grid.coord(k));
        }
    }
    return out;
}

std::vector<cd> apply_resolvent_fourier(const FourierGrid& grid, cd z,
                                        const std::vector<cd>& f) {
    if (!(z.imag() > 0.0))
        throw std::domain_error("apply_resolvent_fourier: needs Im z > 0");
    check_sizes(grid, f, "apply_resolvent_fourier");
    std::vector<cd> data = f;
    fft3_inplace(grid.n, data, FFTW_FORWARD);
    const std::vector<double> xi = axis_freqs(grid);
    const double scale = 1.0 / static_cast<double>(grid.size());
    std::size_t m = 0;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            for (int k = 0; k < grid.n; ++k, ++m) {
                const double mag =
                    std::sqrt(xi[i] * xi[i] + xi[j] * xi[j] + xi[k] * xi[k]);
                data[m] *= scale / (mag - z);
            }
    fft3_inplace(grid.n, data, FFTW_BACKWARD);
    return data;
}

std::vector<cd> apply_half_laplacian(const FourierGrid& grid, const std::vector<cd>& f) {
    check_sizes(grid, f, "apply_half_laplacian");
    std::vector<cd> data = f;
    fft3_inplace(grid.n, data, FFTW_FORWARD);
    const std::vector<double> xi = axis_freqs(grid);
    const double scale = 1.0 / static_cast<double>(grid.size());
    std::size_t m = 0;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            for (int k = 0; k < grid.n; ++k, ++m)
                data[m] *= scale * std::sqrt(xi[i] * xi[i] + xi[j] * xi[j] + xi[k] * xi[k]);
    fft3_inplace(grid.n, data, FFTW_BACKWARD);
    return data;
}

std::vector<cd> convolve_grid(const FourierGrid& grid, const std::vector<cd>& kernel,
                              const std::vector<cd>& f) {
    check_sizes(grid, kernel, "convolve_grid");
    check_sizes(grid, f, "convolve_grid");
    const int n = grid.n;
    // move the kernel from centered layout (displacement coord(i)) to the
    // wraparound layout the discrete convolution theorem expects
    std::vector<cd> shifted(grid.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                shifted[grid.index(i, j, k)] =
                    kernel[grid.index((i + n / 2) % n, (j + n / 2) % n, (k + n / 2) % n)];
    fft3_inplace(n, shifted, FFTW_FORWARD);
    std::vector<cd> data = f;
    fft3_inplace(n, data, FFTW_FORWARD);
    const double cell = grid.h() * grid.h() * grid.h();
    const double scale = cell / static_cast<double>(grid.size());
    for (std::size_t m = 0; m < data.size(); ++m) data[m] *= scale * shifted[m];
    fft3_inplace(n, data, FFTW_BACKWARD);
    return data;
}

namespace {

// integrals of 1/r^2, 1/r, and log r over the centered unit cube, reduced to
// smooth face integrals through the chord length along each direction
struct CubeConstants {
    double inv2, inv1, logc;
};

CubeConstants cube_constants() {
    static const CubeConstants c = [] {
        std::vector<double> gx, gw;
        gauss_legendre(64, gx, gw);
        double inv2 = 0.0, inv1 = 0.0, logc = 0.0;
        for (std::size_t i = 0; i < gx.size(); ++i)
            for (std::size_t j = 0; j < gx.size(); ++j) {
                const double u = gx[i], v = gx[j];
                const double q = 1.0 + u * u + v * v;
                const double w = gw[i] * gw[j];
                // chord from the center through face point: l = sqrt(q)/2
                const double l = 0.5 * std::sqrt(q);
                inv2 += w / q;                       // l / q^{3/2}
                inv1 += w * (l * l / 2.0) / std::pow(q, 1.5);
                logc += w * (l * l * l / 9.0) * (3.0 * std::log(l) - 1.0) /
                        std::pow(q, 1.5);
            }
        return CubeConstants{3.0 * inv2, 6.0 * inv1, 6.0 * logc};
    }();
    return c;
}

} // namespace

std::vector<cd> tabulate_outgoing_kernel(const FourierGrid& grid, const SheetPoint& z,
                                         int avg_radius_cells) {
    const int n = grid.n;
    const int half = n / 2;
    const double h = grid.h();
    const cd zc = z.value();
    std::vector<cd> table(grid.size());

    // Every entry is a cell average of the kernel plus its first shell of
    // periodic images. Cell averages rather than point samples keep the
    // alias sum of the slowly decaying symbol convergent; the sinc division
    // at the end turns the averages back into symbol samples.
    //
    // Away from the singular cells the average is the midpoint value plus
    // the h^2/24 Laplacian correction, and the Laplacian is closed form:
    // splitting xi^2/(|xi|-z) = |xi| + z + z^2/(|xi|-z) and transforming
    // |xi| away from the origin gives lap K = 1/(pi^2 r^4) - z^2 K. The
    // same 1/r^4 term is the algebraic far tail of K, the price of the
    // conical point of the symbol at frequency zero.
    auto far_avg = [&](double r) {
        const cd kv = outgoing_kernel(3, z, r).value;
        const cd lap = 1.0 / (kPi * kPi * r * r * r * r) - zc * zc * kv;
        return kv + (h * h / 24.0) * lap;
    };

    // The multiplier route is periodic by construction, so the table sums
    // the kernel over periodic images. One shell captures the part that
    // varies across the box; the truncated remainder is slowly varying and
    // is restored by the mass calibration below. Images deep inside the
    // exponential decay region are skipped for speed.
    const double kappa = zc.imag();
    const double skip_dist = kappa > 0.0
                                 ? grid.box / 2.0 + 18.0 / kappa
                                 : std::numeric_limits<double>::infinity();
    auto image_sum = [&](double x, double y, double w) {
        cd acc = 0.0;
        for (int mx = -1; mx <= 1; ++mx)
            for (int my = -1; my <= 1; ++my)
                for (int mz = -1; mz <= 1; ++mz) {
                    if (mx == 0 && my == 0 && mz == 0) continue;
                    const double ix = x + mx * grid.box;
                    const double iy = y + my * grid.box;
                    const double iz = w + mz * grid.box;
                    const double ri = std::sqrt(ix * ix + iy * iy + iz * iz);
                    if (ri > skip_dist) continue;
                    acc += far_avg(ri);
                }
        return acc;
    };

    // exact average of the singular model over the origin cell, using the
    // unit-cube integrals of each singular monomial
    const SingularModel model = singular_model(3, z);
    const double cell = h * h * h;
    const CubeConstants cc = cube_constants();
    const cd origin_avg = (model.inv_power[0] * (cc.inv2 * h) +
                           model.inv_power[1] * (cc.inv1 * h * h) +
                           model.log_coef * cell * (std::log(h) + cc.logc) +
                           model.r0_limit * cell) /
                          cell;

    // The entry at (x, y, w) depends on the coordinates only through the
    // unordered triple (|x|, |y|, |w|), images included, so one canonical
    // wedge with a >= b >= c covers the grid at a small fraction of the
    // kernel evaluations.
    std::vector<cd> wedge(static_cast<std::size_t>(half + 1) * (half + 1) *
                          (half + 1));
    auto wedge_at = [&](int a, int b, int c) -> cd& {
        return wedge[(static_cast<std::size_t>(a) * (half + 1) + b) *
                         (half + 1) +
                     c];
    };

    std::vector<double> gx, gw;
    gauss_legendre(8, gx, gw);
    const double avg_limit = avg_radius_cells * h;
    for (int a = 0; a <= half; ++a)
        for (int b = 0; b <= a; ++b)
            for (int c = 0; c <= b; ++c) {
                const double x = a * h, y = b * h, w = c * h;
                const double r = std::sqrt(x * x + y * y + w * w);
                cd val;
                if (r == 0.0) {
                    val = origin_avg;
                } else if (r <= avg_limit) {
                    // tensor Gauss average over the cell; the integrand is
                    // smooth in the cell since the origin lies outside it
                    cd acc = 0.0;
                    for (std::size_t a1 = 0; a1 < gx.size(); ++a1)
                        for (std::size_t a2 = 0; a2 < gx.size(); ++a2)
                            for (std::size_t a3 = 0; a3 < gx.size(); ++a3) {
                                const double sx = x + 0.5 * h * gx[a1];
                                const double sy = y + 0.5 * h * gx[a2];
                                const double sz = w + 0.5 * h * gx[a3];
                                const double rs =
                                    std::sqrt(sx * sx + sy * sy + sz * sz);
                                acc += gw[a1] * gw[a2] * gw[a3] *
                                       outgoing_kernel(3, z, rs).value;
                            }
                    val = acc / 8.0;
                } else {
                    val = far_avg(r);
                }
                val += image_sum(x, y, w);
                int p[3] = {c, b, a};
                do {
                    wedge_at(p[0], p[1], p[2]) = val;
                } while (std::next_permutation(p, p + 3));
            }

    for (int i = 0; i < n; ++i) {
        const int a = std::abs(i - half);
        for (int j = 0; j < n; ++j) {
            const int b = std::abs(j - half);
            for (int k = 0; k < n; ++k)
                table[grid.index(i, j, k)] = wedge_at(a, b, std::abs(k - half));
        }
    }

    // Undo the cell averaging in frequency: each lattice mode picked up one
    // cube sinc factor per axis. Dividing it out leaves the principal term
    // of the discrete symbol exactly on the multiplier while the alias
    // images stay damped by the sinc ratio, strongly so near frequency
    // zero. The factor never vanishes on the grid since |t| <= pi/2.
    fft3_inplace(n, table, FFTW_FORWARD);
    std::vector<double> sinc_axis(n);
    for (int i = 0; i < n; ++i) {
        const int f = i < half ? i : i - n;
        const double t = kPi * f / n;
        sinc_axis[i] = f == 0 ? 1.0 : std::sin(t) / t;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                table[grid.index(i, j, k)] /=
                    sinc_axis[i] * sinc_axis[j] * sinc_axis[k];
    fft3_inplace(n, table, FFTW_BACKWARD);
    const double inv_n3 = 1.0 / (static_cast<double>(n) * n * n);
    for (cd& t : table) t *= inv_n3;

    // Calibrate the total mass to the symbol value at frequency zero, -1/z.
    // The algebraic 1/(z r)^4 tail makes the image sum truncated at one
    // shell miss a slowly varying long-range remainder that no affordable
    // number of shells recovers. That remainder is nearly constant across
    // the box, so it belongs to the zero-frequency lattice mode alone:
    // spreading the mass defect uniformly restores that mode and leaves
    // every other mode untouched.
    cd mass = 0.0;
    for (const cd& t : table) mass += t;
    mass *= h * h * h;
    const cd spread = (-1.0 / z.value() - mass) / (grid.box * grid.box * grid.box);
    for (cd& t : table) t += spread;
    return table;
}

double lowest_eigenvalue_fourier(const FourierGrid& grid, const Potential& v,
                                 int krylov_dim) {
    if (krylov_dim < 2) throw std::invalid_argument("lowest_eigenvalue_fourier: krylov_dim < 2");
    std::vector<cd> vg_c = sample_potential(grid, v);
    const std::size_t total = grid.size();
    std::vector<double> vgrid(total);
    for (std::size_t m = 0; m < total; ++m) {
        if (std::abs(vg_c[m].imag()) > 0.0)
            throw std::invalid_argument("lowest_eigenvalue_fourier: needs a real potential");
        vgrid[m] = vg_c[m].real();
    }
    vg_c.clear();
    vg_c.shrink_to_fit();

    // Lanczos with full reorthogonalization; the operator is real symmetric
    const Eigen::Index nvec = static_cast<Eigen::Index>(total);
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(krylov_dim);
    Eigen::VectorXd alpha(krylov_dim), beta(krylov_dim);
    std::vector<cd> scratch(total);

    std::mt19937_64 rng(20240817);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd q0(nvec);
    for (Eigen::Index i = 0; i < nvec; ++i) q0[i] = gauss(rng);
    q0.normalize();
    basis.push_back(q0);

    Eigen::VectorXd w(nvec);
    int steps = 0;
    for (int j = 0; j < krylov_dim; ++j) {
        apply_hamiltonian(grid, vgrid, basis[j], w, scratch);
        alpha[j] = w.dot(basis[j]);
        w -= alpha[j] * basis[j];
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        for (int i = 0; i <= j; ++i) w -= w.dot(basis[i]) * basis[i];
        steps = j + 1;
        beta[j] = w.norm();
        if (beta[j] < 1e-12 || j + 1 == krylov_dim) break;
        basis.push_back(w / beta[j]);
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
        tri(j, j) = alpha[j];
        if (j + 1 < steps) tri(j, j + 1) = tri(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
    return eig.eigenvalues().minCoeff();
}

} // namespace halfres

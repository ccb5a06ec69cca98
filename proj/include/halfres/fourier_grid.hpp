#pragma once

#include <cstddef>
#include <vector>

#include "halfres/potential.hpp"
#include "halfres/types.hpp"

namespace halfres {

// Uniform periodic grid on a cube of side `box` centered at the origin,
// n points per axis. Grid functions are flat vectors of size n^3 indexed
// (i * n + j) * n + k; coordinates run x = (i - n/2) h with h = box / n.
struct FourierGrid {
    int n = 64;
    double box = 8.0;

    double h() const { return box / n; }
    double coord(int i) const { return (i - n / 2) * h(); }
    // signed frequency of FFT bin k (standard wraparound ordering)
    double freq(int k) const {
        const int signed_k = (2 * k < n) ? k : k - n;
        return kTwoPi * signed_k / box;
    }
    std::size_t size() const {
        return static_cast<std::size_t>(n) * n * n;
    }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }
};

FourierGrid make_fourier_grid(int n, double box);

// grid samples of the potential
std::vector<cd> sample_potential(const FourierGrid& grid, const Potential& v);

// inverse transform of f_hat(xi) / (|xi| - z); the physical-sheet oracle.
// Requires Im z > 0 (domain error otherwise).
std::vector<cd> apply_resolvent_fourier(const FourierGrid& grid, cd z,
                                        const std::vector<cd>& f);

// multiplier |xi| in Fourier space: the discrete sqrt(-Laplace)
std::vector<cd> apply_half_laplacian(const FourierGrid& grid,
                                     const std::vector<cd>& f);

// circular convolution with tabulated kernel values (kernel given as a grid
// function of the displacement, periodized); used by kernel cross-checks
std::vector<cd> convolve_grid(const FourierGrid& grid,
                              const std::vector<cd>& kernel,
                              const std::vector<cd>& f);

// Displacement-grid table of the outgoing kernel for convolution tests.
// Cells with |x| <= avg_radius_cells * h carry the 9^3 subcell average
// instead of the center value, and the origin cell carries the closed-form
// cell integral of the singular model; plain center sampling there is too
// crude for the 1e-3 cross-checks.
std::vector<cd> tabulate_outgoing_kernel(const FourierGrid& grid, const SheetPoint& z,
                                         int avg_radius_cells = 3);

// Lowest eigenvalue of sqrt(-Laplace) + V on the grid by Lanczos with full
// reorthogonalization; the independent spectral oracle for bound states.
// Requires a real-valued potential (invalid_argument otherwise).
double lowest_eigenvalue_fourier(const FourierGrid& grid, const Potential& v,
                                 int krylov_dim = 120);

} // namespace halfres

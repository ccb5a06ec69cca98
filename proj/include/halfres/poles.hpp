#pragma once

#include <array>
#include <vector>

#include "halfres/determinant.hpp"
#include "halfres/nystrom.hpp"

namespace halfres {

// Search region on the surface: an annular sector in (modulus, unwrapped
// argument). The disc below exclusion_radius is never searched; the
// determinant has a log(z) branch structure at z = 0 and the zero-energy
// question is handled by the dedicated obstruction probe instead.
struct RegionSpec {
    double r_min = 0.1;
    double r_max = 4.0;
    double arg_min = 0.0;
    double arg_max = kTwoPi;
    double exclusion_radius = 1e-3;
};

// validates: 0 < exclusion_radius <= r_min < r_max, arg_min < arg_max, all finite
RegionSpec make_region(double r_min, double r_max, double arg_min, double arg_max,
                       double exclusion_radius);

enum class PoleMethod { argument_principle, eigenvalue_newton };

struct PoleRecord {
    SheetPoint location;
    int multiplicity = 1;
    // |det| at the refined location relative to the median |det| over the
    // isolating contour (raw determinant magnitudes overflow doubles at large
    // node counts, the ratio is scale-free)
    double residual = 0.0;
    int contour_count = 0;  // winding of the isolating contour
    PoleMethod method = PoleMethod::argument_principle;
};

// Closed polyline on the surface in (log-modulus, argument) coordinates;
// corners connect by straight segments in that chart and the final corner
// closes back to the first.
struct SurfaceContour {
    std::vector<std::array<double, 2>> corners;
};

SurfaceContour rectangle_contour(double u0, double u1, double t0, double t1);

// One argument-principle evaluation: integral = (1/2 pi i) of the determinant
// log derivative around the contour, count its nearest integer. accepted
// requires gap <= 0.1 and every sample's log|det| within margin_floor nats of
// the contour median (a sample on top of a zero invalidates the quadrature).
struct WindingCount {
    cd integral = cd(0.0, 0.0);
    int count = 0;
    double gap = 0.0;
    double min_margin = 0.0;  // min over samples of log|det| - contour median
    bool accepted = false;
};

WindingCount winding_count(const SurfaceContour& contour, const Potential& v,
                           const Quadrature& q, int edge_order = 64,
                           double margin_floor = -25.0);

// Accepted zero count inside the contour, or throw runtime_error when the
// winding cannot be trusted (caller perturbs or subdivides); retries once at
// doubled edge order before giving up.
int count_zeros(const SurfaceContour& contour, const Potential& v, const Quadrature& q);

struct LocateOptions {
    int edge_order = 64;
    // evaluation budget in determinant factorizations; exhausted -> remaining
    // rectangles are reported unresolved
    long max_det_evals = 20000;
    // rectangles smaller than this in (log-modulus, arg) are abandoned
    double subdivision_floor = 1e-6;
};

struct LocateResult {
    std::vector<PoleRecord> poles;
    // (u0, u1, t0, t1) rectangles the search could not settle
    std::vector<std::array<double, 4>> unresolved;
    long det_evals = 0;
};

// Recursive rectangle subdivision in (log-modulus, arg): count zeros by the
// argument principle, split while a rectangle holds more than one zero and is
// larger than tol (below tol a multiple count is treated as one zero of that
// multiplicity), then refine by Newton on the determinant log derivative and
// certify each pole with an isolating contour. Deterministic for fixed
// inputs; results sorted by (arg_total, modulus).
LocateResult locate_poles(const RegionSpec& region, const Potential& v, const Quadrature& q,
                          double tol, const LocateOptions& options = {});

// Independent refinement path: inverse iteration for the eigenvalue of K
// nearest -1 and Newton on mu(z) + 1 = 0 with the eigenpair derivative
// dmu/dz = (y* K' x)/(y* x). Certifies with the same isolating contour as the
// argument-principle path but shares none of its iteration mechanics.
PoleRecord refine_pole_eigen(const SheetPoint& seed, const Potential& v, const Quadrature& q,
                             double tol = 1e-10);

// Counting function N(r, a): poles with modulus <= r and |arg| <= a, with
// multiplicity. The pole list must come from a region covering the queried
// sector down to its exclusion floor; otherwise throws invalid_argument
// naming the uncovered part.
int counting_function(double r, double a, const std::vector<PoleRecord>& poles,
                      const RegionSpec& covered);

} // namespace halfres

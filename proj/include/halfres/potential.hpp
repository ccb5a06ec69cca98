#pragma once

#include <array>
#include <string>
#include <vector>

#include "halfres/types.hpp"

namespace halfres {

enum class PotentialKind { BallStep, TruncatedGaussian, GridFile };

// Bounded complex potential with compact support in B(0, support_radius).
// The value is exactly zero outside the support ball for every kind.
struct Potential {
    PotentialKind kind = PotentialKind::BallStep;
    cd amplitude = cd(1.0, 0.0);
    double support_radius = 1.0;
    double smoothness = 0.0;  // taper width; 0 means a sharp cutoff
    double sup_norm = 1.0;    // recorded bound on |V|

    // samples for kind == GridFile (nearest-neighbor sampler)
    std::vector<std::array<double, 3>> grid_points;
    std::vector<cd> grid_values;

    cd operator()(const std::array<double, 3>& x) const;
    cd operator()(double x0, double x1, double x2) const;
};

// amplitude on B(0, radius), zero outside
Potential make_ball_step(cd amplitude, double radius);

// amplitude * exp(-|x|^2 / (2 width^2)) on B(0, radius), zero outside
Potential make_truncated_gaussian(cd amplitude, double radius, double width);

// text format: header "halfres-potential v1 R=<radius> n=<count>", then
// <count> rows "x y z re im"
Potential load_potential_grid(const std::string& path);
void save_potential_grid(const Potential& potential, const std::string& path);

} // namespace halfres

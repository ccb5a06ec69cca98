#include "halfres/potential.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace halfres {

namespace {

void require_radius(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::domain_error("potential: support radius must be positive and finite");
}

} // namespace

cd Potential::operator()(const std::array<double, 3>& x) const {
    return (*this)(x[0], x[1], x[2]);
}

cd Potential::operator()(double x0, double x1, double x2) const {
    const double rsq = x0 * x0 + x1 * x1 + x2 * x2;
    if (rsq > support_radius * support_radius) return cd(0.0, 0.0);
    switch (kind) {
    case PotentialKind::BallStep:
        return amplitude;
    case PotentialKind::TruncatedGaussian:
        return amplitude * std::exp(-rsq / (2.0 * smoothness * smoothness));
    case PotentialKind::GridFile: {
        if (grid_points.empty()) return cd(0.0, 0.0);
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid_points.size(); ++i) {
            const auto& p = grid_points[i];
            const double dx = p[0] - x0, dy = p[1] - x1, dz = p[2] - x2;
            const double dist = dx * dx + dy * dy + dz * dz;
            if (dist < best_dist) {
                best_dist = dist;
                best = i;
            }
        }
        return grid_values[best];
    }
    }
    return cd(0.0, 0.0);
}

Potential make_ball_step(cd amplitude, double radius) {
    require_radius(radius);
    Potential v;
    v.kind = PotentialKind::BallStep;
    v.amplitude = amplitude;
    v.support_radius = radius;
    v.smoothness = 0.0;
    v.sup_norm = std::abs(amplitude);
    return v;
}

Potential make_truncated_gaussian(cd amplitude, double radius, double width) {
    require_radius(radius);
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::domain_error("potential: gaussian width must be positive and finite");
    Potential v;
    v.kind = PotentialKind::TruncatedGaussian;
    v.amplitude = amplitude;
    v.support_radius = radius;
    v.smoothness = width;
    v.sup_norm = std::abs(amplitude);
    return v;
}

Potential load_potential_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_potential_grid: cannot open " + path);
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("load_potential_grid: empty file " + path);

    std::istringstream hs(header);
    std::string magic, version, rfield, nfield;
    hs >> magic >> version >> rfield >> nfield;
    if (magic != "halfres-potential" || version != "v1" ||
        rfield.rfind("R=", 0) != 0 || nfield.rfind("n=", 0) != 0)
        throw std::runtime_error("load_potential_grid: bad header in " + path);

    double radius = 0.0;
    std::size_t count = 0;
    try {
        radius = std::stod(rfield.substr(2));
        count = static_cast<std::size_t>(std::stoull(nfield.substr(2)));
    } catch (const std::exception&) {
        throw std::runtime_error("load_potential_grid: bad header fields in " + path);
    }
    require_radius(radius);

    Potential v;
    v.kind = PotentialKind::GridFile;
    v.support_radius = radius;
    v.smoothness = 0.0;
    v.grid_points.reserve(count);
    v.grid_values.reserve(count);
    double sup = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double x, y, z, re, im;
        if (!(in >> x >> y >> z >> re >> im))
            throw std::runtime_error("load_potential_grid: truncated data in " + path);
        v.grid_points.push_back({x, y, z});
        v.grid_values.emplace_back(re, im);
        sup = std::max(sup, std::abs(cd(re, im)));
    }
    v.amplitude = cd(1.0, 0.0);
    v.sup_norm = sup;
    return v;
}

void save_potential_grid(const Potential& potential, const std::string& path) {
    if (potential.kind != PotentialKind::GridFile)
        throw std::invalid_argument("save_potential_grid: only grid potentials are serializable");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_potential_grid: cannot open " + path);
    out.precision(17);
    out << "halfres-potential v1 R=" << potential.support_radius
        << " n=" << potential.grid_points.size() << "\n";
    for (std::size_t i = 0; i < potential.grid_points.size(); ++i) {
        const auto& p = potential.grid_points[i];
        out << p[0] << " " << p[1] << " " << p[2] << " "
            << potential.grid_values[i].real() << " "
            << potential.grid_values[i].imag() << "\n";
    }
    if (!out) throw std::runtime_error("save_potential_grid: write failed for " + path);
}

} // namespace halfres

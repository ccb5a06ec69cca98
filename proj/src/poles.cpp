#include "halfres/poles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "halfres/gauss.hpp"

namespace halfres {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// corner in the (log-modulus, arg) chart
using ChartPoint = std::array<double, 2>;

SheetPoint chart_point(double u, double t) { return make_sheet_point(std::exp(u), t); }

double median_of(std::vector<double> vals) {
    const size_t mid = vals.size() / 2;
    std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
    return vals[mid];
}

struct EdgeVal {
    cd integral = cd(0.0, 0.0);  // contour integral of dlogdet along the edge
    std::vector<double> logabs;  // log|det| at the samples
};

struct BudgetExhausted {};

// Shared state of one search: quadrature caches, the directed-edge integral
// cache (sibling rectangles share interior edges), and the evaluation budget.
// A det_sample with derivative costs two units (two assemblies), without one.
struct EvalContext {
    EvalContext(const Potential& pv, const Quadrature& pq) : v(pv), q(pq) {}
    const Potential& v;
    const Quadrature& q;
    long budget = std::numeric_limits<long>::max();
    long evals = 0;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> rules;
    std::map<std::array<long long, 5>, EdgeVal> edges;

    const std::pair<std::vector<double>, std::vector<double>>& rule(int order) {
        auto it = rules.find(order);
        if (it == rules.end()) {
            std::pair<std::vector<double>, std::vector<double>> r;
            gauss_legendre(order, r.first, r.second);
            it = rules.emplace(order, std::move(r)).first;
        }
        return it->second;
    }

    void charge(long units) {
        evals += units;
        if (evals > budget) throw BudgetExhausted{};
    }
};

long long quant(double x) { return std::llround(x * 1e10); }

EdgeVal integrate_edge(EvalContext& ctx, const ChartPoint& a, const ChartPoint& b,
                       int order) {
    const bool flip = std::make_pair(b[0], b[1]) < std::make_pair(a[0], a[1]);
    const ChartPoint& lo = flip ? b : a;
    const ChartPoint& hi = flip ? a : b;
    const std::array<long long, 5> key = {quant(lo[0]), quant(lo[1]), quant(hi[0]),
                                          quant(hi[1]), order};
    auto it = ctx.edges.find(key);
    if (it == ctx.edges.end()) {
        const auto& [gx, gw] = ctx.rule(order);
        EdgeVal val;
        val.logabs.reserve(order);
        const double du = hi[0] - lo[0];
        const double dt = hi[1] - lo[1];
        for (int i = 0; i < order; ++i) {
            ctx.charge(2);
            const double s = 0.5 * (gx[i] + 1.0);
            const SheetPoint z = chart_point(lo[0] + s * du, lo[1] + s * dt);
            const DetSample ds = det_sample(z, ctx.v, ctx.q, true);
            val.logabs.push_back(ds.det.exact_zero ? -kInf : ds.det.log.real());
            // dz along the chart segment: z * (du + i dt) ds
            val.integral += 0.5 * gw[i] * ds.logderiv * z.value() * cd(du, dt);
        }
        it = ctx.edges.emplace(key, std::move(val)).first;
    }
    EdgeVal out = it->second;
    if (flip) out.integral = -out.integral;
    return out;
}

WindingCount winding_of(EvalContext& ctx, const std::vector<ChartPoint>& corners,
                        int order, double margin_floor) {
    cd total = cd(0.0, 0.0);
    std::vector<double> logabs;
    for (size_t i = 0; i < corners.size(); ++i) {
        const EdgeVal ev =
            integrate_edge(ctx, corners[i], corners[(i + 1) % corners.size()], order);
        total += ev.integral;
        logabs.insert(logabs.end(), ev.logabs.begin(), ev.logabs.end());
    }
    WindingCount wc;
    wc.integral = total / cd(0.0, kTwoPi);
    wc.count = static_cast<int>(std::lround(wc.integral.real()));
    wc.gap = std::abs(wc.integral - cd(static_cast<double>(wc.count), 0.0));
    const double med = median_of(logabs);
    wc.min_margin = *std::min_element(logabs.begin(), logabs.end()) - med;
    wc.accepted = wc.gap <= 0.1 && wc.min_margin >= margin_floor;
    return wc;
}

std::vector<ChartPoint> rect_corners(double u0, double u1, double t0, double t1) {
    return {{u0, t0}, {u1, t0}, {u1, t1}, {u0, t1}};
}

struct Rect {
    double u0, u1, t0, t1;
    bool jitter = false;  // split off-center after a rejected winding
};

// certification: winding around an isolating square plus the residual of the
// refined point relative to the contour median
struct Certificate {
    int count = 0;
    double residual = kInf;
    bool ok = false;
};

Certificate certify_point(EvalContext& ctx, const SheetPoint& z, double delta,
                          int order, double margin_floor) {
    const double u = std::log(z.modulus);
    const double t = z.arg_total;
    const auto corners = rect_corners(u - delta, u + delta, t - delta, t + delta);
    Certificate cert;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const int ord = order << attempt;
        cd total = cd(0.0, 0.0);
        std::vector<double> logabs;
        for (size_t i = 0; i < 4; ++i) {
            const EdgeVal ev = integrate_edge(ctx, corners[i], corners[(i + 1) % 4], ord);
            total += ev.integral;
            logabs.insert(logabs.end(), ev.logabs.begin(), ev.logabs.end());
        }
        const cd winding = total / cd(0.0, kTwoPi);
        const int count = static_cast<int>(std::lround(winding.real()));
        const double gap = std::abs(winding - cd(static_cast<double>(count), 0.0));
        const double med = median_of(logabs);
        const double margin = *std::min_element(logabs.begin(), logabs.end()) - med;
        if (gap > 0.1 || margin < margin_floor) continue;
        ctx.charge(1);
        const DetSample at_zero = det_sample(z, ctx.v, ctx.q, false);
        cert.count = count;
        cert.residual =
            at_zero.det.exact_zero ? 0.0 : std::exp(at_zero.det.log.real() - med);
        cert.ok = count >= 1;
        return cert;
    }
    return cert;
}

struct NewtonOutcome {
    SheetPoint z = SheetPoint{1.0, 0.0};
    bool converged = false;
    double final_step_rel = kInf;
};

// Newton on the determinant via its log derivative: a zero of order m has
// dlogdet ~ m/(z - z*), so the multiplicity-aware step is -m/dlogdet.
NewtonOutcome newton_refine(EvalContext& ctx, const Rect& rect, int mult_hint) {
    NewtonOutcome out;
    const double size = std::max(rect.u1 - rect.u0, rect.t1 - rect.t0);
    const double slack = 0.5 * size;
    SheetPoint z = chart_point(0.5 * (rect.u0 + rect.u1), 0.5 * (rect.t0 + rect.t1));
    for (int it = 0; it < 40; ++it) {
        ctx.charge(2);
        const DetSample ds = det_sample(z, ctx.v, ctx.q, true);
        if (ds.det.exact_zero) {
            out.z = z;
            out.converged = true;
            out.final_step_rel = 0.0;
            return out;
        }
        if (ds.logderiv == cd(0.0, 0.0)) break;
        cd step = -static_cast<double>(mult_hint) / ds.logderiv;
        const double max_step = 0.5 * size * z.modulus;
        if (std::abs(step) > max_step) step *= max_step / std::abs(step);
        const cd znew = z.value() + step;
        const double dt = std::arg(znew / z.value());
        z = make_sheet_point(std::abs(znew), z.arg_total + dt);
        out.final_step_rel = std::abs(step) / z.modulus;
        // stay near the owning rectangle; a walkaway means the zero is not
        // where the count suggested (cluster near an edge), so resubdivide
        if (std::log(z.modulus) < rect.u0 - slack || std::log(z.modulus) > rect.u1 + slack ||
            z.arg_total < rect.t0 - slack || z.arg_total > rect.t1 + slack) {
            out.converged = false;
            return out;
        }
        if (out.final_step_rel < 1e-11) {
            out.z = z;
            out.converged = true;
            return out;
        }
    }
    out.z = z;
    return out;
}

} // namespace

RegionSpec make_region(double r_min, double r_max, double arg_min, double arg_max,
                       double exclusion_radius) {
    const bool finite = std::isfinite(r_min) && std::isfinite(r_max) &&
                        std::isfinite(arg_min) && std::isfinite(arg_max) &&
                        std::isfinite(exclusion_radius);
    if (!finite || !(exclusion_radius > 0.0) || r_min < exclusion_radius || !(r_min < r_max) ||
        !(arg_min < arg_max))
        throw std::invalid_argument(
            "make_region: need 0 < exclusion_radius <= r_min < r_max and arg_min < arg_max");
    return RegionSpec{r_min, r_max, arg_min, arg_max, exclusion_radius};
}

SurfaceContour rectangle_contour(double u0, double u1, double t0, double t1) {
    if (!(u0 < u1) || !(t0 < t1))
        throw std::invalid_argument("rectangle_contour: degenerate rectangle");
    return SurfaceContour{{{u0, t0}, {u1, t0}, {u1, t1}, {u0, t1}}};
}

WindingCount winding_count(const SurfaceContour& contour, const Potential& v,
                           const Quadrature& q, int edge_order, double margin_floor) {
    if (contour.corners.size() < 3)
        throw std::invalid_argument("winding_count: contour needs at least 3 corners");
    EvalContext ctx{v, q};
    return winding_of(ctx, contour.corners, edge_order, margin_floor);
}

int count_zeros(const SurfaceContour& contour, const Potential& v, const Quadrature& q) {
    WindingCount wc = winding_count(contour, v, q, 64);
    if (!wc.accepted) wc = winding_count(contour, v, q, 128);
    if (!wc.accepted) {
        std::ostringstream msg;
        msg << "count_zeros: winding rejected (integral " << wc.integral.real() << "+"
            << wc.integral.imag() << "i, gap " << wc.gap << ", margin " << wc.min_margin
            << "); perturb or subdivide the contour";
        throw std::runtime_error(msg.str());
    }
    return wc.count;
}

LocateResult locate_poles(const RegionSpec& region, const Potential& v, const Quadrature& q,
                          double tol, const LocateOptions& options) {
    (void)make_region(region.r_min, region.r_max, region.arg_min, region.arg_max,
                      region.exclusion_radius);
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw std::invalid_argument("locate_poles: tol must be positive");

    EvalContext ctx{v, q};
    ctx.budget = options.max_det_evals;
    LocateResult result;
    std::vector<Rect> stack;
    stack.push_back(Rect{std::log(region.r_min), std::log(region.r_max), region.arg_min,
                         region.arg_max, false});

    auto push_children = [&](const Rect& r, bool jittered) {
        // deterministic off-center split lines step samples away from a zero
        // that sat on a midline and spoiled the winding quadrature
        const double fu = jittered ? 0.5 + 0.118 : 0.5;
        const double ft = jittered ? 0.5 - 0.118 : 0.5;
        const double um = r.u0 + fu * (r.u1 - r.u0);
        const double tm = r.t0 + ft * (r.t1 - r.t0);
        stack.push_back(Rect{r.u0, um, r.t0, tm, false});
        stack.push_back(Rect{um, r.u1, r.t0, tm, false});
        stack.push_back(Rect{r.u0, um, tm, r.t1, false});
        stack.push_back(Rect{um, r.u1, tm, r.t1, false});
    };

    while (!stack.empty()) {
        const Rect rect = stack.back();
        stack.pop_back();
        const double size = std::max(rect.u1 - rect.u0, rect.t1 - rect.t0);
        try {
            WindingCount wc = winding_of(ctx, rect_corners(rect.u0, rect.u1, rect.t0, rect.t1),
                                         options.edge_order, -25.0);
            if (!wc.accepted)
                wc = winding_of(ctx, rect_corners(rect.u0, rect.u1, rect.t0, rect.t1),
                                2 * options.edge_order, -25.0);
            if (!wc.accepted) {
                if (size <= options.subdivision_floor) {
                    result.unresolved.push_back({rect.u0, rect.u1, rect.t0, rect.t1});
                } else {
                    push_children(rect, true);
                }
                continue;
            }
            if (wc.count == 0) continue;
            // separate multiple zeros by subdivision; below tol a multiple
            // count is treated as one zero of that multiplicity
            if (wc.count > 1 && size > tol) {
                push_children(rect, false);
                continue;
            }
            const NewtonOutcome nw = newton_refine(ctx, rect, wc.count);
            const double eps = 1e-9 + 1e-12 * size;
            const bool inside = nw.converged &&
                                std::log(nw.z.modulus) >= rect.u0 - eps &&
                                std::log(nw.z.modulus) <= rect.u1 + eps &&
                                nw.z.arg_total >= rect.t0 - eps && nw.z.arg_total <= rect.t1 + eps;
            if (!inside) {
                if (size <= options.subdivision_floor) {
                    result.unresolved.push_back({rect.u0, rect.u1, rect.t0, rect.t1});
                } else {
                    push_children(rect, true);
                }
                continue;
            }
            const double delta =
                std::clamp(1e4 * nw.final_step_rel, 1e-7, std::max(1e-7, 0.45 * tol));
            const Certificate cert =
                certify_point(ctx, nw.z, delta, options.edge_order, -40.0);
            if (!cert.ok) {
                result.unresolved.push_back({rect.u0, rect.u1, rect.t0, rect.t1});
                continue;
            }
            PoleRecord rec;
            rec.location = nw.z;
            rec.multiplicity = cert.count;
            rec.contour_count = cert.count;
            rec.residual = cert.residual;
            rec.method = PoleMethod::argument_principle;
            result.poles.push_back(rec);
        } catch (const BudgetExhausted&) {
            result.unresolved.push_back({rect.u0, rect.u1, rect.t0, rect.t1});
            for (const Rect& r : stack) result.unresolved.push_back({r.u0, r.u1, r.t0, r.t1});
            stack.clear();
        }
    }

    // merge duplicate finds from adjacent rectangles: keep the sharper one;
    // the radius stays above the certification half-width (0.45 tol) so a
    // cluster certified together collapses to one record, and below the
    // separation at which two points certify apart, so neither is lost
    const double merge_dist = std::max(0.5 * tol, 1e-7);
    std::vector<PoleRecord> merged;
    for (const PoleRecord& rec : result.poles) {
        bool absorbed = false;
        for (PoleRecord& kept : merged) {
            const double du = std::log(rec.location.modulus / kept.location.modulus);
            const double dt = rec.location.arg_total - kept.location.arg_total;
            if (std::hypot(du, dt) < merge_dist) {
                if (rec.residual < kept.residual) kept = rec;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) merged.push_back(rec);
    }
    result.poles = std::move(merged);
    std::sort(result.poles.begin(), result.poles.end(),
              [](const PoleRecord& a, const PoleRecord& b) {
                  if (a.location.arg_total != b.location.arg_total)
                      return a.location.arg_total < b.location.arg_total;
                  return a.location.modulus < b.location.modulus;
              });
    result.det_evals = ctx.evals;
    return result;
}

PoleRecord refine_pole_eigen(const SheetPoint& seed, const Potential& v, const Quadrature& q,
                             double tol) {
    SheetPoint z = seed;
    double step_rel = kInf;
    for (int it = 0; it < 25; ++it) {
        const BSOperator op = assemble_bs(z, v, q);
        const Eigen::Index n = op.matrix.rows();
        Eigen::MatrixXcd a = op.matrix;
        a.diagonal().array() += 1.0;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        // inverse iteration toward the eigenvalue of K nearest -1, two-sided
        // for the eigenpair derivative
        Eigen::VectorXcd x = Eigen::VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n));
        Eigen::VectorXcd y = x;
        cd mu_prev = cd(0.0, 0.0);
        cd mu = cd(0.0, 0.0);
        for (int sweep = 0; sweep < 30; ++sweep) {
            x = lu.solve(x).normalized();
            y = lu.adjoint().solve(y).normalized();
            mu = y.dot(op.matrix * x) / y.dot(x);
            if (std::abs(mu - mu_prev) < 1e-14 * (1.0 + std::abs(mu)) && sweep > 1) break;
            mu_prev = mu;
        }
        const Eigen::MatrixXcd kprime = assemble_bs_dz(z, v, q);
        const cd dmu = y.dot(kprime * x) / y.dot(x);
        if (dmu == cd(0.0, 0.0)) break;
        const cd step = -(mu + 1.0) / dmu;
        const cd znew = z.value() + step;
        const double dt = std::arg(znew / z.value());
        z = make_sheet_point(std::abs(znew), z.arg_total + dt);
        step_rel = std::abs(step) / z.modulus;
        if (step_rel < tol) break;
    }
    EvalContext ctx(v, q);
    const double delta = std::clamp(1e4 * step_rel, 1e-7, 1e-3);
    // the point is already Newton-converged, so the isolating contour sees a
    // clean simple pole of dlogdet; a short rule with the doubling retry is
    // enough for gap <= 0.1
    const Certificate cert = certify_point(ctx, z, delta, 16, -40.0);
    PoleRecord rec;
    rec.location = z;
    rec.multiplicity = std::max(1, cert.count);
    rec.contour_count = cert.count;
    rec.residual = cert.residual;
    rec.method = PoleMethod::eigenvalue_newton;
    return rec;
}

int counting_function(double r, double a, const std::vector<PoleRecord>& poles,
                      const RegionSpec& covered) {
    if (!(r > 0.0) || !(a > 0.0) || !std::isfinite(r) || !std::isfinite(a))
        throw std::invalid_argument("counting_function: need positive finite r and a");
    std::ostringstream uncovered;
    if (covered.r_min > covered.exclusion_radius * (1.0 + 1e-12))
        uncovered << " moduli (" << covered.exclusion_radius << ", " << covered.r_min << ")";
    if (r > covered.r_max) uncovered << " moduli (" << covered.r_max << ", " << r << ")";
    if (covered.arg_min > -a) uncovered << " args (" << -a << ", " << covered.arg_min << ")";
    if (covered.arg_max < a) uncovered << " args (" << covered.arg_max << ", " << a << ")";
    const std::string missing = uncovered.str();
    if (!missing.empty())
        throw std::invalid_argument("counting_function: region does not cover" + missing);
    int count = 0;
    for (const PoleRecord& rec : poles) {
        if (rec.location.modulus <= r && std::abs(rec.location.arg_total) <= a)
            count += rec.multiplicity;
    }
    return count;
}

} // namespace halfres

#include "halfres/nystrom.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "halfres/free_resolvent.hpp"

namespace halfres {

namespace {

void check_inputs(const Potential& v, const Quadrature& q) {
    if (q.dimension != 3)
        throw std::invalid_argument("assemble_bs: quadrature must be three dimensional");
    if (v.support_radius > q.R * (1.0 + 1e-12))
        throw std::invalid_argument("assemble_bs: potential support exceeds quadrature ball");
    if (q.size() == 0) throw std::invalid_argument("assemble_bs: empty quadrature");
}

std::vector<cd> node_values(const Potential& v, const Quadrature& q) {
    std::vector<cd> vals(static_cast<std::size_t>(q.size()));
    for (Eigen::Index i = 0; i < q.size(); ++i)
        vals[static_cast<std::size_t>(i)] = v(q.nodes(i, 0), q.nodes(i, 1), q.nodes(i, 2));
    return vals;
}

// fill the symmetric table of kernel values K(|x_i - x_j|), then scale row i
// by V(x_i) and column j by w_j; the diagonal model is supplied per node
Eigen::MatrixXcd assemble_generic(const Potential& v, const Quadrature& q, int workers,
                                  const std::function<cd(double)>& kernel_fn,
                                  const std::function<cd(Eigen::Index)>& diag_fn,
                                  const char* who) {
    const Eigen::Index n = q.size();
    Eigen::MatrixXcd m(n, n);

    if (workers < 1) workers = 1;
    std::mutex error_lock;
    std::exception_ptr first_error;

    auto fill_rows = [&](int t) {
        try {
            for (Eigen::Index i = t; i < n; i += workers) {
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    const double dx = q.nodes(i, 0) - q.nodes(j, 0);
                    const double dy = q.nodes(i, 1) - q.nodes(j, 1);
                    const double dz = q.nodes(i, 2) - q.nodes(j, 2);
                    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
                    cd val;
                    try {
                        if (!(r > 0.0))
                            throw std::domain_error("coincident quadrature nodes");
                        val = kernel_fn(r);
                    } catch (const std::exception& e) {
                        throw std::runtime_error(std::string(who) + ": nodes " +
                                                 std::to_string(i) + ", " +
                                                 std::to_string(j) + ": " + e.what());
                    }
                    m(i, j) = val;
                    m(j, i) = val;
                }
                m(i, i) = diag_fn(i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> hold(error_lock);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (workers == 1) {
        fill_rows(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(fill_rows, t);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    const std::vector<cd> vi = node_values(v, q);
    for (Eigen::Index i = 0; i < n; ++i) {
        const cd row_factor = vi[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) *= row_factor * q.weights(j);
    }
    return m;
}

// closed-form cell integral of the singular model plus plain weight on the
// bounded limit, per node; this replaces w_i * kernel(0) on the diagonal
cd diagonal_model(const SingularModel& model, const Quadrature& q, Eigen::Index i) {
    return model.inv_power[0] * q.j_inv2(i) + model.inv_power[1] * q.j_inv1(i) +
           model.log_coef * q.j_log(i) + model.r0_limit * q.weights(i);
}

} // namespace

BSOperator assemble_bs(const SheetPoint& z, const Potential& v, const Quadrature& q,
                       int workers) {
    check_inputs(v, q);
    const SingularModel model = singular_model(3, z);
    BSOperator op;
    op.z = z;
    op.matrix = assemble_generic(
        v, q, workers, [&](double r) { return outgoing_kernel(3, z, r).value; },
        [&](Eigen::Index i) { return diagonal_model(model, q, i) / q.weights(i); },
        "assemble_bs");
    op.quadrature = std::make_shared<Quadrature>(q);
    op.potential = std::make_shared<Potential>(v);
    return op;
}

Eigen::MatrixXcd assemble_bs_dz(const SheetPoint& z, const Potential& v,
                                const Quadrature& q, int workers) {
    check_inputs(v, q);
    const SingularModel model = singular_model_dz(3, z);
    return assemble_generic(
        v, q, workers, [&](double r) { return outgoing_kernel_dz(3, z, r); },
        [&](Eigen::Index i) { return diagonal_model(model, q, i) / q.weights(i); },
        "assemble_bs_dz");
}

Eigen::MatrixXcd sheet_jump_matrix(const SheetPoint& z, const Potential& v,
                                   const Quadrature& q) {
    check_inputs(v, q);
    const cd zb = z.value();
    // r -> 0 limit of the unit jump; the jump kernel is entire in r
    const cd at_zero = cd(0, -1) * zb * zb / kPi;
    return assemble_generic(
        v, q, 1, [&](double r) { return sheet_jump(3, z, 1, r); },
        [&](Eigen::Index) { return at_zero; }, "sheet_jump_matrix");
}

} // namespace halfres

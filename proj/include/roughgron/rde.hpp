#pragma once

// Rough differential equations dy = f(y) dX solved by the second-order
// (Davie) expansion, with the remainder y^natural exposed for inspection.

#include "roughgron/errors.hpp"
#include "roughgron/rng.hpp"
#include "roughgron/rough_core.hpp"
#include "roughgron/variation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace roughgron {

/// f : R^N -> L(R^d, R^N) with its derivative. Column j of `f(y)` is the
/// vector field f_j; `jacobian(y, j)` is the N x N derivative of f_j at y.
struct VectorField {
    std::size_t state_dim = 1;
    std::size_t noise_dim = 1;
    std::string name;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> f;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, std::size_t)> jacobian;
};

namespace fields {

/// Scalar state (N = 1) driven by `d` components sharing one profile g:
/// f_j(y) = g(y) for every j.
inline VectorField scalar(std::string name, std::size_t d, std::function<double(double)> g,
                          std::function<double(double)> dg) {
    VectorField vf;
    vf.state_dim = 1;
    vf.noise_dim = d;
    vf.name = std::move(name);
    vf.f = [d, g](const Eigen::VectorXd& y) { return Eigen::MatrixXd::Constant(1, static_cast<Eigen::Index>(d), g(y[0])); };
    vf.jacobian = [dg](const Eigen::VectorXd& y, std::size_t) { return Eigen::MatrixXd::Constant(1, 1, dg(y[0])); };
    return vf;
}

inline VectorField constant(double c, std::size_t d = 1) {
    return scalar("constant", d, [c](double) { return c; }, [](double) { return 0.0; });
}

inline VectorField linear(double a = 1.0, std::size_t d = 1) {
    return scalar("linear", d, [a](double y) { return a * y; }, [a](double) { return a; });
}

inline VectorField sine(std::size_t d = 1) {
    return scalar("sin", d, [](double y) { return std::sin(y); }, [](double y) { return std::cos(y); });
}

/// Scalar field tabulated at strictly increasing nodes, interpolated by
/// cubic Hermite splines with centred-difference slopes (C^1), extended
/// linearly beyond the table.
inline VectorField tabulated(std::vector<double> nodes, std::vector<double> values, std::size_t d = 1) {
    detail::validate_times(nodes);
    if (values.size() != nodes.size()) {
        throw ParameterError("tabulated field needs one value per node");
    }
    const std::size_t n = nodes.size();
    std::vector<double> slopes(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = k == 0 ? 0 : k - 1;
        const std::size_t b = k + 1 == n ? k : k + 1;
        slopes[k] = (values[b] - values[a]) / (nodes[b] - nodes[a]);
    }
    struct Table {
        std::vector<double> x, v, m;
    };
    auto table = std::make_shared<const Table>(Table{std::move(nodes), std::move(values), std::move(slopes)});
    auto eval = [table](double y, bool derivative) {
        const auto& x = table->x;
        if (y <= x.front()) {
            return derivative ? table->m.front() : table->v.front() + table->m.front() * (y - x.front());
        }
        if (y >= x.back()) {
            return derivative ? table->m.back() : table->v.back() + table->m.back() * (y - x.back());
        }
        const std::size_t k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), y) - x.begin()) - 1;
        const double h = x[k + 1] - x[k];
        const double s = (y - x[k]) / h;
        const double v0 = table->v[k], v1 = table->v[k + 1], m0 = table->m[k] * h, m1 = table->m[k + 1] * h;
        if (!derivative) {
            const double s2 = s * s, s3 = s2 * s;
            return (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * v1 + (s3 - s2) * m1;
        }
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) * v0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * v1 + (3 * s2 - 2 * s) * m1) / h;
    };
    return scalar("custom-table", d, [eval](double y) { return eval(y, false); }, [eval](double y) { return eval(y, true); });
}

} // namespace fields

/// f_2(y) as an N x d^2 matrix: column i*d + j holds (D f_j)(y) f_i(y), the
/// derivative of f_j along f_i, which multiplies X2^{ij}.
inline Eigen::MatrixXd f2(const VectorField& vf, const Eigen::VectorXd& y) {
    const auto d = static_cast<Eigen::Index>(vf.noise_dim);
    const Eigen::MatrixXd fy = vf.f(y);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(vf.state_dim), d * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const Eigen::MatrixXd jac = vf.jacobian(y, static_cast<std::size_t>(j));
        for (Eigen::Index i = 0; i < d; ++i) {
            out.col(i * d + j) = jac * fy.col(i);
        }
    }
    return out;
}

/// f(y) X1_ij + f_2(y) X2_ij.
inline Eigen::VectorXd davie_increment(const VectorField& vf, const Eigen::VectorXd& y, const RoughPath& rp,
                                       std::size_t i, std::size_t j) {
    const std::size_t d = vf.noise_dim;
    Eigen::VectorXd inc = vf.f(y) * rp.level1(i, j);
    const Eigen::MatrixXd g2 = f2(vf, y);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            inc += g2.col(static_cast<Eigen::Index>(a * d + b)) * rp.level2(i, j, a, b);
        }
    }
    return inc;
}

struct FieldBounds {
    double sup_f = 0.0;
    double sup_df = 0.0;
    double sup_d2f = 0.0;
};

/// Sup-norms of f, f' and f'' over the box [lo, hi]^N from `samples`
/// uniform points; f'' by centred differences of the Jacobian.
inline FieldBounds estimate_bounds(const VectorField& vf, double lo, double hi, std::size_t samples = 10000,
                                   std::uint64_t seed = 7) {
    GaussianStream rng(seed);
    FieldBounds b;
    const double h = 1e-4;
    Eigen::VectorXd y(static_cast<Eigen::Index>(vf.state_dim));
    for (std::size_t s = 0; s < samples; ++s) {
        for (Eigen::Index c = 0; c < y.size(); ++c) {
            y[c] = lo + (hi - lo) * rng.uniform();
        }
        b.sup_f = std::max(b.sup_f, vf.f(y).norm());
        for (std::size_t j = 0; j < vf.noise_dim; ++j) {
            b.sup_df = std::max(b.sup_df, vf.jacobian(y, j).norm());
            for (Eigen::Index m = 0; m < y.size(); ++m) {
                Eigen::VectorXd yp = y, ym = y;
                yp[m] += h;
                ym[m] -= h;
                b.sup_d2f = std::max(b.sup_d2f, ((vf.jacobian(yp, j) - vf.jacobian(ym, j)) / (2 * h)).norm());
            }
        }
    }
    return b;
}

/// Worst relative mismatch between `jacobian` and centred differences of f
/// at `samples` random points of [lo, hi]^N, measured against 1 + |J|.
inline double derivative_mismatch(const VectorField& vf, double lo, double hi, std::size_t samples = 64,
                                  std::uint64_t seed = 11) {
    GaussianStream rng(seed);
    const double h = 1e-6;
    double worst = 0.0;
    Eigen::VectorXd y(static_cast<Eigen::Index>(vf.state_dim));
    for (std::size_t s = 0; s < samples; ++s) {
        for (Eigen::Index c = 0; c < y.size(); ++c) {
            y[c] = lo + (hi - lo) * rng.uniform();
        }
        for (std::size_t j = 0; j < vf.noise_dim; ++j) {
            const Eigen::MatrixXd jac = vf.jacobian(y, j);
            Eigen::MatrixXd fd(jac.rows(), jac.cols());
            for (Eigen::Index m = 0; m < y.size(); ++m) {
                Eigen::VectorXd yp = y, ym = y;
                yp[m] += h;
                ym[m] -= h;
                fd.col(m) = (vf.f(yp).col(static_cast<Eigen::Index>(j)) - vf.f(ym).col(static_cast<Eigen::Index>(j))) / (2 * h);
            }
            worst = std::max(worst, (fd - jac).norm() / (1.0 + jac.norm()));
        }
    }
    return worst;
}

struct RDESolution {
    std::vector<double> times;
    std::vector<std::size_t> indices; ///< positions of `times` in the driving rough path's grid
    std::vector<Eigen::VectorXd> y;
    bool truncated = false;
    std::string diagnostic;
};

namespace detail {

inline std::vector<std::size_t> resolve_subgrid(const RoughPath& rp, std::span<const std::size_t> subgrid) {
    std::vector<std::size_t> idx;
    if (subgrid.empty()) {
        idx.resize(rp.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            idx[k] = k;
        }
        return idx;
    }
    idx.assign(subgrid.begin(), subgrid.end());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= rp.size() || (k > 0 && idx[k] <= idx[k - 1])) {
            throw DomainError("sub-grid must be increasing positions of the rough path grid");
        }
    }
    if (idx.size() < 2) {
        throw ParameterError("sub-grid needs at least two points");
    }
    return idx;
}

} // namespace detail

/// Every `stride`-th grid position of `rp`, always keeping the last point.
inline std::vector<std::size_t> strided_subgrid(std::size_t grid_size, std::size_t stride) {
    if (stride == 0) {
        throw ParameterError("stride must be positive");
    }
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < grid_size; k += stride) {
        idx.push_back(k);
    }
    if (idx.back() != grid_size - 1) {
        idx.push_back(grid_size - 1);
    }
    return idx;
}

/// y_{k+1} = y_k + f(y_k) X1_{t_k t_{k+1}} + f_2(y_k) X2_{t_k t_{k+1}} on
/// `subgrid` (positions in rp's grid; empty means the full grid). Stops
/// with `truncated` set if the state leaves the box |y|_inf <= box_radius.
inline RDESolution solve_step2(const VectorField& vf, const RoughPath& rp, const Eigen::VectorXd& y_in,
                               std::span<const std::size_t> subgrid = {},
                               double box_radius = std::numeric_limits<double>::infinity()) {
    if (vf.noise_dim != rp.dim() || static_cast<std::size_t>(y_in.size()) != vf.state_dim) {
        throw ParameterError("vector field dimensions do not match driver or initial state");
    }
    RDESolution sol;
    sol.indices = detail::resolve_subgrid(rp, subgrid);
    sol.times.reserve(sol.indices.size());
    sol.y.reserve(sol.indices.size());
    sol.times.push_back(rp.times()[sol.indices[0]]);
    sol.y.push_back(y_in);
    for (std::size_t k = 0; k + 1 < sol.indices.size(); ++k) {
        Eigen::VectorXd next = sol.y.back() + davie_increment(vf, sol.y.back(), rp, sol.indices[k], sol.indices[k + 1]);
        if (!next.allFinite() || next.lpNorm<Eigen::Infinity>() > box_radius) {
            sol.truncated = true;
            sol.diagnostic = "state left the working box at t=" + std::to_string(rp.times()[sol.indices[k + 1]]);
            sol.indices.resize(k + 1);
            break;
        }
        sol.times.push_back(rp.times()[sol.indices[k + 1]]);
        sol.y.push_back(std::move(next));
    }
    return sol;
}

/// y^natural_st = delta y_st - f(y_s) X1_st - f_2(y_s) X2_st for solution
/// positions a <= b.
inline Eigen::VectorXd remainder(const RDESolution& sol, const VectorField& vf, const RoughPath& rp, std::size_t a,
                                 std::size_t b) {
    return sol.y[b] - sol.y[a] - davie_increment(vf, sol.y[a], rp, sol.indices[a], sol.indices[b]);
}

inline Eigen::VectorXd remainder_at(const RDESolution& sol, const VectorField& vf, const RoughPath& rp, double s,
                                    double t) {
    return remainder(sol, vf, rp, grid_index(sol.times, s), grid_index(sol.times, t));
}

struct ScalingRow {
    std::size_t depth;
    double sup_ratio;
    std::size_t pairs;
};

/// For each dyadic depth k = 1..min(max_depth, floor(log2 steps)), the sup
/// over the 2^k dyadic solution intervals of |y^natural_st| / omega(s,t)^{3/p},
/// with omega the rough path control (level 1 p-variation plus level 2
/// p/2-variation) over [s, t] on the driver's grid.
inline std::vector<ScalingRow> remainder_scaling_report(const RDESolution& sol, const VectorField& vf,
                                                        const RoughPath& rp, std::size_t max_depth = 6) {
    const std::size_t steps = sol.y.size() - 1;
    std::size_t depth_cap = 0;
    while ((std::size_t{1} << (depth_cap + 1)) <= steps) {
        ++depth_cap;
    }
    depth_cap = std::min(depth_cap, max_depth);
    const double expo = 3.0 / rp.p();
    std::vector<ScalingRow> rows;
    for (std::size_t depth = 1; depth <= depth_cap; ++depth) {
        const std::size_t parts = std::size_t{1} << depth;
        ScalingRow row{depth, 0.0, parts};
        for (std::size_t j = 0; j < parts; ++j) {
            const std::size_t a = j * steps / parts;
            const std::size_t b = (j + 1) * steps / parts;
            const Eigen::VectorXd inc = davie_increment(vf, sol.y[a], rp, sol.indices[a], sol.indices[b]);
            double rem = (sol.y[b] - sol.y[a] - inc).norm();
            // below the rounding level of the three terms the remainder is zero
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                                 (sol.y[a].norm() + sol.y[b].norm() + inc.norm());
            if (rem <= floor) {
                rem = 0.0;
            }
            const double omega = rough_path_control_on(rp, sol.indices[a], sol.indices[b]);
            if (omega == 0.0) {
                if (rem > 0.0) {
                    throw ConsistencyError("nonzero remainder on an interval where the control vanishes");
                }
                continue;
            }
            row.sup_ratio = std::max(row.sup_ratio, rem / std::pow(omega, expo));
        }
        rows.push_back(row);
    }
    return rows;
}

/// Classical RK4 for dy/dt = f(y) x'(t) with `substeps` stages per output
/// interval; `velocity(t)` returns x'(t) in R^d.
inline std::vector<Eigen::VectorXd> ode_oracle(const VectorField& vf,
                                               const std::function<Eigen::VectorXd(double)>& velocity,
                                               const Eigen::VectorXd& y_in, std::span<const double> times,
                                               std::size_t substeps) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(times.size());
    out.push_back(y_in);
    Eigen::VectorXd y = y_in;
    auto rhs = [&](double t, const Eigen::VectorXd& state) -> Eigen::VectorXd { return vf.f(state) * velocity(t); };
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double h = (times[k + 1] - times[k]) / static_cast<double>(substeps);
        for (std::size_t m = 0; m < substeps; ++m) {
            const double t = times[k] + static_cast<double>(m) * h;
            const Eigen::VectorXd k1 = rhs(t, y);
            const Eigen::VectorXd k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
            const Eigen::VectorXd k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
            const Eigen::VectorXd k4 = rhs(t + h, y + h * k3);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(y);
    }
    return out;
}

/// Same oracle for a sampled driver, read as its piecewise-linear
/// interpolant (constant velocity on each sample interval).
inline std::vector<Eigen::VectorXd> ode_oracle(const VectorField& vf, const SampledPath& driver,
                                               const Eigen::VectorXd& y_in, std::size_t substeps) {
    const auto times = driver.times();
    std::vector<Eigen::VectorXd> out;
    out.reserve(times.size());
    out.push_back(y_in);
    Eigen::VectorXd y = y_in;
    Eigen::VectorXd v(static_cast<Eigen::Index>(driver.dim()));
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double dt = times[k + 1] - times[k];
        for (std::size_t c = 0; c < driver.dim(); ++c) {
            v[static_cast<Eigen::Index>(c)] = (driver(k + 1, c) - driver(k, c)) / dt;
        }
        const double h = dt / static_cast<double>(substeps);
        for (std::size_t m = 0; m < substeps; ++m) {
            const Eigen::VectorXd k1 = vf.f(y) * v;
            const Eigen::VectorXd k2 = vf.f(y + 0.5 * h * k1) * v;
            const Eigen::VectorXd k3 = vf.f(y + 0.5 * h * k2) * v;
            const Eigen::VectorXd k4 = vf.f(y + h * k3) * v;
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(y);
    }
    return out;
}

} // namespace roughgron

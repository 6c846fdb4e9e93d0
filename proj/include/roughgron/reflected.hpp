#pragma once

// One-dimensional rough differential equations reflected at 0:
//   dy = f(y) dX + dm,  y >= 0,  m nondecreasing,  y dm = 0.

#include "roughgron/errors.hpp"
#include "roughgron/rde.hpp"
#include "roughgron/rough_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace roughgron {

struct ReflectedSolution {
    std::vector<double> times;
    std::vector<std::size_t> indices; ///< positions in the driver's grid
    std::vector<double> y;
    std::vector<double> m; ///< reflection measure m([0, t]), m_0 = 0
    std::string diagnostic;
};

struct SkorokhodResult {
    std::vector<double> y;
    std::vector<double> m;
};

/// m_t = max(0, sup_{s<=t} -xi_s), y_t = xi_t + m_t on the sample points.
inline SkorokhodResult skorokhod_map_1d(std::span<const double> xi) {
    if (xi.empty()) {
        throw ParameterError("skorokhod_map_1d needs a nonempty path");
    }
    if (xi.front() < 0.0) {
        throw DomainError("skorokhod_map_1d needs xi_0 >= 0");
    }
    SkorokhodResult out;
    out.y.resize(xi.size());
    out.m.resize(xi.size());
    double running = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) {
        running = std::max(running, -xi[k]);
        out.m[k] = running;
        out.y[k] = xi[k] + running;
    }
    return out;
}

namespace detail {

inline void require_scalar_field(const VectorField& vf, const RoughPath& rp) {
    if (vf.state_dim != 1) {
        throw ParameterError("reflected equations are one-dimensional (N = 1)");
    }
    if (vf.noise_dim != rp.dim()) {
        throw ParameterError("vector field noise dimension does not match the driver");
    }
}

inline double scalar_increment(const VectorField& vf, double y, const RoughPath& rp, std::size_t i, std::size_t j) {
    return davie_increment(vf, Eigen::VectorXd::Constant(1, y), rp, i, j)[0];
}

} // namespace detail

/// Projection scheme: z = y_k + f(y_k) X1 + f_2(y_k) X2, y_{k+1} = max(z, 0),
/// delta m = y_{k+1} - z.
inline ReflectedSolution solve_reflected_step2(const VectorField& vf, const RoughPath& rp, double y_in,
                                               std::span<const std::size_t> subgrid = {}) {
    detail::require_scalar_field(vf, rp);
    if (!(y_in > 0.0)) {
        throw DomainError("reflected equation needs y_in > 0");
    }
    ReflectedSolution sol;
    sol.indices = detail::resolve_subgrid(rp, subgrid);
    const std::size_t n = sol.indices.size();
    sol.times.resize(n);
    sol.y.resize(n);
    sol.m.resize(n);
    sol.y[0] = y_in;
    sol.m[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sol.times[k] = rp.times()[sol.indices[k]];
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double z = sol.y[k] + detail::scalar_increment(vf, sol.y[k], rp, sol.indices[k], sol.indices[k + 1]);
        sol.y[k + 1] = std::max(z, 0.0);
        sol.m[k + 1] = sol.m[k] + (sol.y[k + 1] - z);
    }
    return sol;
}

struct PenalizedSolution {
    std::vector<double> times;
    std::vector<std::size_t> indices;
    std::vector<double> y;
    std::vector<double> m; ///< accumulated penalty
    double epsilon = 0.0;
    bool stability_warning = false; ///< some step had h / epsilon > 1
};

/// Step-2 update plus the penalty (h / epsilon) max(-y_k, 0).
inline PenalizedSolution solve_reflected_penalized(const VectorField& vf, const RoughPath& rp, double y_in,
                                                   std::span<const std::size_t> subgrid, double epsilon) {
    detail::require_scalar_field(vf, rp);
    if (!(epsilon > 0.0)) {
        throw ParameterError("penalization needs epsilon > 0");
    }
    PenalizedSolution sol;
    sol.epsilon = epsilon;
    sol.indices = detail::resolve_subgrid(rp, subgrid);
    const std::size_t n = sol.indices.size();
    sol.times.resize(n);
    sol.y.resize(n);
    sol.m.assign(n, 0.0);
    sol.y[0] = y_in;
    for (std::size_t k = 0; k < n; ++k) {
        sol.times[k] = rp.times()[sol.indices[k]];
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = sol.times[k + 1] - sol.times[k];
        if (h > epsilon) {
            sol.stability_warning = true;
        }
        const double push = (h / epsilon) * std::max(-sol.y[k], 0.0);
        sol.y[k + 1] = sol.y[k] + detail::scalar_increment(vf, sol.y[k], rp, sol.indices[k], sol.indices[k + 1]) + push;
        sol.m[k + 1] = sol.m[k] + push;
    }
    return sol;
}

/// sum_k y_{t_k} (m_{t_{k+1}} - m_{t_k}): the left-point Riemann sum of y dm.
inline double complementarity_defect(const ReflectedSolution& sol) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < sol.y.size(); ++k) {
        acc += sol.y[k] * (sol.m[k + 1] - sol.m[k]);
    }
    return acc;
}

/// y^natural_st = delta y_st - f(y_s) X1_st - f_2(y_s) X2_st - delta m_st.
inline double reflected_remainder(const ReflectedSolution& sol, const VectorField& vf, const RoughPath& rp,
                                  std::size_t a, std::size_t b) {
    return sol.y[b] - sol.y[a] - detail::scalar_increment(vf, sol.y[a], rp, sol.indices[a], sol.indices[b]) -
           (sol.m[b] - sol.m[a]);
}

struct ProbeRow {
    double h;
    double epsilon;
    double sup_distance;
    bool stability_warning;
};

/// For each stride (a mesh of rp's grid), the sup distance between the
/// projection and penalized solutions with epsilon = epsilon_factor * sqrt(h),
/// h the largest step of that mesh.
inline std::vector<ProbeRow> uniqueness_probe(const VectorField& vf, const RoughPath& rp, double y_in,
                                              std::span<const std::size_t> strides, double epsilon_factor = 1.0) {
    std::vector<ProbeRow> rows;
    for (std::size_t stride : strides) {
        const std::vector<std::size_t> grid = strided_subgrid(rp.size(), stride);
        double h = 0.0;
        for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
            h = std::max(h, rp.times()[grid[k + 1]] - rp.times()[grid[k]]);
        }
        const double eps = epsilon_factor * std::sqrt(h);
        const ReflectedSolution proj = solve_reflected_step2(vf, rp, y_in, grid);
        const PenalizedSolution pen = solve_reflected_penalized(vf, rp, y_in, grid, eps);
        double dist = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            dist = std::max(dist, std::abs(proj.y[k] - pen.y[k]));
        }
        rows.push_back({h, eps, dist, pen.stability_warning});
    }
    return rows;
}

} // namespace roughgron

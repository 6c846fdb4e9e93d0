#pragma once

// Reference computations that share no code path with the library
// algorithms they are compared against: exhaustive enumeration, direct
// summation, closed forms.

#include "roughgron/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace roughgron::oracles {

/// p-variation sum over [0, n-1] by visiting every subset of interior
/// points. Exponential; n <= 24.
inline double enumerate_pvar_sum(std::span<const double> values, std::size_t dim, double p) {
    const std::size_t n = values.size() / dim;
    if (n < 2) {
        return 0.0;
    }
    if (n > 24) {
        throw ParameterError("enumeration oracle limited to 24 points");
    }
    const std::size_t interior = n - 2;
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << interior); ++mask) {
        double sum = 0.0;
        std::size_t prev = 0;
        for (std::size_t k = 1; k < n; ++k) {
            const bool keep = k == n - 1 || ((mask >> (k - 1)) & 1U) != 0;
            if (!keep) {
                continue;
            }
            double sq = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double v = values[k * dim + c] - values[prev * dim + c];
                sq += v * v;
            }
            sum += std::pow(std::sqrt(sq), p);
            prev = k;
        }
        best = std::max(best, sum);
    }
    return best;
}

/// Level 2 of the piecewise-linear path through `values` between sample
/// points i <= j, as the ordered double sum over segments
///   sum_{k < l} dx_k (x) dx_l + sum_k dx_k (x) dx_k / 2.
inline Eigen::MatrixXd piecewise_linear_area(std::span<const double> values, std::size_t dim, std::size_t i,
                                             std::size_t j) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    auto seg = [&](std::size_t k) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
        for (std::size_t c = 0; c < dim; ++c) {
            v[static_cast<Eigen::Index>(c)] = values[(k + 1) * dim + c] - values[k * dim + c];
        }
        return v;
    };
    for (std::size_t k = i; k < j; ++k) {
        const Eigen::VectorXd a = seg(k);
        out += 0.5 * a * a.transpose();
        for (std::size_t l = k + 1; l < j; ++l) {
            out += a * seg(l).transpose();
        }
    }
    return out;
}

/// Flow of dy = sin(y) dx in one dimension: tan(y/2) = tan(y0/2) e^x,
/// valid for y0 in (0, pi).
inline double sine_flow(double y0, double x) { return 2.0 * std::atan(std::tan(0.5 * y0) * std::exp(x)); }

/// Reflection of y_in + c x_t at 0 for an affine decreasing driver x_t = -r t:
/// max(y_in - c r t, 0).
inline double reflected_affine(double y_in, double c, double rate, double t) {
    return std::max(y_in - c * rate * t, 0.0);
}

/// Explicit Euler amplification of the Fourier mode k under the 3-point
/// periodic Laplacian: 1 - 4 nu dt / dx^2 sin^2(pi k dx / length).
inline double heat_mode_factor(double nu, double dt, double dx, double length, int mode) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(mode) * dx / length);
    return 1.0 - 4.0 * nu * dt / (dx * dx) * s * s;
}

} // namespace roughgron::oracles

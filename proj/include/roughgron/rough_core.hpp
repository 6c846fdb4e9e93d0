#pragma once

// Sampled paths, two-index maps and geometric p-rough paths (level 1 and
// level 2) on a finite time grid.

#include "roughgron/errors.hpp"
#include "roughgron/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace roughgron {

namespace detail {

/// Neumaier compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

inline void validate_times(std::span<const double> times) {
    if (times.size() < 2) {
        throw ParameterError("a time grid needs at least 2 points");
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k])) {
            throw ParameterError("time grid contains a non-finite value");
        }
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw ParameterError("time grid must be strictly increasing");
        }
    }
}

} // namespace detail

/// Position of `t` in a sorted grid. Matches within 1e-12 relative to
/// max(1, |t|); anything else is off-grid and raises DomainError.
inline std::size_t grid_index(std::span<const double> times, double t) {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    const double tol = 1e-12 * std::max(1.0, std::abs(t));
    if (it != times.end() && std::abs(*it - t) <= tol) {
        return static_cast<std::size_t>(it - times.begin());
    }
    if (it != times.begin() && std::abs(*(it - 1) - t) <= tol) {
        return static_cast<std::size_t>(it - times.begin()) - 1;
    }
    throw DomainError("time " + std::to_string(t) + " is not a grid point");
}

template <class V>
struct Increment {
    V value;
    double s;
    double t;
};

/// A d-dimensional signal sampled on a strictly increasing time grid.
class SampledPath {
public:
    SampledPath(std::vector<double> times, std::vector<double> values, std::size_t dim)
        : times_(std::move(times)), values_(std::move(values)), dim_(dim) {
        detail::validate_times(times_);
        if (dim_ == 0) {
            throw ParameterError("path dimension must be positive");
        }
        if (values_.size() != times_.size() * dim_) {
            throw ParameterError("path values do not match times x dimension");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw ParameterError("path contains a non-finite value");
            }
        }
    }

    /// Samples `fn(t, out)` at each time; `out` has length `dim`.
    template <class Fn>
    static SampledPath from_function(std::vector<double> times, std::size_t dim, Fn&& fn) {
        std::vector<double> values(times.size() * dim);
        for (std::size_t k = 0; k < times.size(); ++k) {
            fn(times[k], std::span<double>(values.data() + k * dim, dim));
        }
        return SampledPath(std::move(times), std::move(values), dim);
    }

    std::size_t size() const { return times_.size(); }
    std::size_t dim() const { return dim_; }
    std::span<const double> times() const { return times_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> value(std::size_t k) const { return {values_.data() + k * dim_, dim_}; }
    double operator()(std::size_t k, std::size_t c) const { return values_[k * dim_ + c]; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
    std::size_t dim_;
};

/// Uniform grid of `steps` intervals on [0, horizon].
inline std::vector<double> uniform_grid(std::size_t steps, double horizon) {
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        t[k] = horizon * static_cast<double>(k) / static_cast<double>(steps);
    }
    return t;
}

/// delta g_st = g_t - g_s for grid times s, t.
inline Increment<Eigen::VectorXd> delta_path(const SampledPath& g, double s, double t) {
    const std::size_t i = grid_index(g.times(), s);
    const std::size_t j = grid_index(g.times(), t);
    Eigen::VectorXd v(g.dim());
    for (std::size_t c = 0; c < g.dim(); ++c) {
        v[static_cast<Eigen::Index>(c)] = g(j, c) - g(i, c);
    }
    return {std::move(v), s, t};
}

/// delta g_sut = g_st - g_su - g_ut for a two-index map g(s, t).
template <class TwoIndex>
auto delta_2index(const TwoIndex& g, double s, double u, double t) {
    if (!(s <= u && u <= t)) {
        throw DomainError("delta_2index needs an ordered triple s <= u <= t");
    }
    auto gst = g(s, t);
    auto gsu = g(s, u);
    auto gut = g(u, t);
    return decltype(gst)(gst - gsu - gut);
}

template <class R>
concept RoughPathLike = requires(const R& r, std::size_t i, std::size_t j) {
    { r.times() } -> std::convertible_to<std::span<const double>>;
    { r.dim() } -> std::convertible_to<std::size_t>;
    { r.p() } -> std::convertible_to<double>;
    { r.level1(i, j) } -> std::convertible_to<Eigen::VectorXd>;
    { r.level2(i, j) } -> std::convertible_to<Eigen::MatrixXd>;
};

/// Level-1 and level-2 data of a rough path on a grid.
///
/// Storage is the signature against the first grid point, a_k = X1_{0 t_k}
/// and A_k = X2_{0 t_k}, with level 2 kept centred as B_k = A_k - a_k (x) a_k / 2
/// (the area part for geometric paths). Any pair is recovered through Chen's
/// relation,
///   X1_ij = a_j - a_i,
///   X2_ij = B_j - B_i + X1_ij (x) X1_ij / 2 + (X1_ij (x) a_i - a_i (x) X1_ij) / 2,
/// so the relation holds for every grid triple up to rounding, the symmetric
/// part of X2_ij is formed locally, and memory is O(n d^2).
class RoughPath {
public:
    /// Composes per-step increments (X1_{t_k t_{k+1}}, X2_{t_k t_{k+1}})
    /// left to right with compensated summation. `steps1` holds (n-1)*d
    /// values, `steps2` (n-1)*d*d row-major matrices.
    static RoughPath from_increments(std::vector<double> times, std::size_t dim, double p,
                                     std::span<const double> steps1, std::span<const double> steps2) {
        detail::validate_times(times);
        const std::size_t n = times.size();
        if (steps1.size() != (n - 1) * dim || steps2.size() != (n - 1) * dim * dim) {
            throw ParameterError("increment arrays do not match grid size and dimension");
        }
        std::vector<double> prefix1(n * dim, 0.0);
        std::vector<detail::CompensatedSum> acc(dim);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            for (std::size_t c = 0; c < dim; ++c) {
                acc[c].add(steps1[k * dim + c]);
                prefix1[(k + 1) * dim + c] = acc[c].value();
            }
        }
        return from_level1_prefix(std::move(times), dim, p, std::move(prefix1), steps2);
    }

    /// Level 1 given against the first point (n*d values), level 2 given as
    /// per-step matrices ((n-1)*d*d values) and composed left to right with
    /// compensated summation.
    static RoughPath from_level1_prefix(std::vector<double> times, std::size_t dim, double p,
                                        std::vector<double> prefix1, std::span<const double> steps2) {
        detail::validate_times(times);
        require_rough_p(p);
        const std::size_t n = times.size();
        const std::size_t d2 = dim * dim;
        if (prefix1.size() != n * dim || steps2.size() != (n - 1) * d2) {
            throw ParameterError("level arrays do not match grid size and dimension");
        }
        std::vector<double> centred(n * d2, 0.0);
        std::vector<detail::CompensatedSum> acc(d2);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            for (std::size_t a = 0; a < dim; ++a) {
                const double step_a = prefix1[(k + 1) * dim + a] - prefix1[k * dim + a];
                for (std::size_t b = 0; b < dim; ++b) {
                    // B_{k+1} = B_k + (a_k (x) dx - dx (x) a_k) / 2 + X2_k - dx (x) dx / 2
                    const double step_b = prefix1[(k + 1) * dim + b] - prefix1[k * dim + b];
                    auto& s = acc[a * dim + b];
                    s.add(0.5 * (prefix1[k * dim + a] * step_b - step_a * prefix1[k * dim + b]));
                    s.add(steps2[k * d2 + a * dim + b] - 0.5 * step_a * step_b);
                    centred[(k + 1) * d2 + a * dim + b] = s.value();
                }
            }
        }
        RoughPath rp;
        rp.times_ = std::move(times);
        rp.dim_ = dim;
        rp.p_ = p;
        rp.prefix1_ = std::move(prefix1);
        rp.centred2_ = std::move(centred);
        return rp;
    }

    /// Takes the signature against the first point directly.
    static RoughPath from_prefix(std::vector<double> times, std::size_t dim, double p, std::vector<double> prefix1,
                                 std::vector<double> prefix2) {
        detail::validate_times(times);
        require_rough_p(p);
        if (prefix1.size() != times.size() * dim || prefix2.size() != times.size() * dim * dim) {
            throw ParameterError("prefix arrays do not match grid size and dimension");
        }
        const std::size_t d2 = dim * dim;
        for (std::size_t k = 0; k < times.size(); ++k) {
            for (std::size_t a = 0; a < dim; ++a) {
                for (std::size_t b = 0; b < dim; ++b) {
                    prefix2[k * d2 + a * dim + b] -= 0.5 * prefix1[k * dim + a] * prefix1[k * dim + b];
                }
            }
        }
        RoughPath rp;
        rp.times_ = std::move(times);
        rp.dim_ = dim;
        rp.p_ = p;
        rp.prefix1_ = std::move(prefix1);
        rp.centred2_ = std::move(prefix2);
        return rp;
    }

    std::size_t size() const { return times_.size(); }
    std::size_t dim() const { return dim_; }
    double p() const { return p_; }
    std::span<const double> times() const { return times_; }
    std::size_t index_of(double t) const { return grid_index(times_, t); }

    double level1(std::size_t i, std::size_t j, std::size_t c) const {
        return prefix1_[j * dim_ + c] - prefix1_[i * dim_ + c];
    }
    double level2(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const {
        const std::size_t d2 = dim_ * dim_;
        const double xa = level1(i, j, a);
        const double xb = level1(i, j, b);
        return (centred2_[j * d2 + a * dim_ + b] - centred2_[i * d2 + a * dim_ + b]) + 0.5 * xa * xb +
               0.5 * (xa * prefix1_[i * dim_ + b] - prefix1_[i * dim_ + a] * xb);
    }

    Eigen::VectorXd level1(std::size_t i, std::size_t j) const {
        Eigen::VectorXd v(dim_);
        for (std::size_t c = 0; c < dim_; ++c) {
            v[static_cast<Eigen::Index>(c)] = level1(i, j, c);
        }
        return v;
    }
    Eigen::MatrixXd level2(std::size_t i, std::size_t j) const {
        Eigen::MatrixXd m(dim_, dim_);
        for (std::size_t a = 0; a < dim_; ++a) {
            for (std::size_t b = 0; b < dim_; ++b) {
                m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = level2(i, j, a, b);
            }
        }
        return m;
    }

    /// Euclidean norm of X1_ij without allocating.
    double level1_norm(std::size_t i, std::size_t j) const {
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) {
            const double v = level1(i, j, c);
            s += v * v;
        }
        return std::sqrt(s);
    }
    /// Frobenius norm of X2_ij without allocating.
    double level2_norm(std::size_t i, std::size_t j) const {
        double s = 0.0;
        for (std::size_t a = 0; a < dim_; ++a) {
            for (std::size_t b = 0; b < dim_; ++b) {
                const double v = level2(i, j, a, b);
                s += v * v;
            }
        }
        return std::sqrt(s);
    }

    /// Rough path on the sub-grid `indices` (strictly increasing). Level-2
    /// values are the ones of this path, so area accumulated between the
    /// retained points is kept.
    RoughPath restrict(std::span<const std::size_t> indices) const {
        std::vector<double> t;
        std::vector<double> p1;
        std::vector<double> p2;
        const std::size_t d2 = dim_ * dim_;
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const std::size_t idx = indices[k];
            if (idx >= size() || (k > 0 && idx <= indices[k - 1])) {
                throw DomainError("sub-grid indices must be increasing and in range");
            }
            t.push_back(times_[idx]);
            // Re-base at the first retained point.
            for (std::size_t c = 0; c < dim_; ++c) {
                p1.push_back(level1(indices[0], idx, c));
            }
            for (std::size_t e = 0; e < d2; ++e) {
                p2.push_back(level2(indices[0], idx, e / dim_, e % dim_));
            }
        }
        return from_prefix(std::move(t), dim_, p_, std::move(p1), std::move(p2));
    }

private:
    RoughPath() = default;

    std::vector<double> times_;
    std::size_t dim_ = 0;
    double p_ = 2.0;
    std::vector<double> prefix1_;
    std::vector<double> centred2_;
};

/// Rough path given by arbitrary level-1 and level-2 evaluators on grid
/// indices. Nothing is assumed about Chen's relation; used to probe the
/// defect functions with hand-built or corrupted data.
class FunctionalRoughPath {
public:
    using Level1Fn = std::function<Eigen::VectorXd(std::size_t, std::size_t)>;
    using Level2Fn = std::function<Eigen::MatrixXd(std::size_t, std::size_t)>;

    FunctionalRoughPath(std::vector<double> times, std::size_t dim, double p, Level1Fn l1, Level2Fn l2)
        : times_(std::move(times)), dim_(dim), p_(p), l1_(std::move(l1)), l2_(std::move(l2)) {
        detail::validate_times(times_);
        require_rough_p(p_);
    }

    std::size_t size() const { return times_.size(); }
    std::size_t dim() const { return dim_; }
    double p() const { return p_; }
    std::span<const double> times() const { return times_; }
    Eigen::VectorXd level1(std::size_t i, std::size_t j) const { return l1_(i, j); }
    Eigen::MatrixXd level2(std::size_t i, std::size_t j) const { return l2_(i, j); }

private:
    std::vector<double> times_;
    std::size_t dim_;
    double p_;
    Level1Fn l1_;
    Level2Fn l2_;
};

/// Exact signature of the piecewise-linear interpolant of `x`: one linear
/// segment contributes (dx, dx (x) dx / 2), segments compose by Chen.
inline RoughPath lift_piecewise_linear(const SampledPath& x, double p) {
    require_rough_p(p);
    const std::size_t n = x.size();
    const std::size_t d = x.dim();
    std::vector<double> prefix1(n * d);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            prefix1[k * d + c] = x(k, c) - x(0, c);
        }
    }
    std::vector<double> steps2((n - 1) * d * d);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        for (std::size_t a = 0; a < d; ++a) {
            const double da = prefix1[(k + 1) * d + a] - prefix1[k * d + a];
            for (std::size_t b = 0; b < d; ++b) {
                const double db = prefix1[(k + 1) * d + b] - prefix1[k * d + b];
                steps2[(k * d + a) * d + b] = 0.5 * da * db;
            }
        }
    }
    std::vector<double> times(x.times().begin(), x.times().end());
    return RoughPath::from_level1_prefix(std::move(times), d, p, std::move(prefix1), steps2);
}

/// Brownian sample on the uniform grid of `steps` intervals of [0, horizon]
/// with its piecewise-linear (Stratonovich-consistent) lift. Increments are
/// drawn step-major, coordinate-minor from GaussianStream(seed).
inline std::pair<SampledPath, RoughPath> brownian_sample_lift(std::uint64_t seed, std::size_t steps, std::size_t dim,
                                                              double horizon, double p) {
    if (steps < 2) {
        throw ParameterError("brownian_sample_lift needs at least 2 steps");
    }
    if (dim == 0 || !(horizon > 0.0)) {
        throw ParameterError("brownian_sample_lift needs dim > 0 and horizon > 0");
    }
    require_rough_p(p);
    GaussianStream gauss(seed);
    const double sd = std::sqrt(horizon / static_cast<double>(steps));
    std::vector<double> values((steps + 1) * dim, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t c = 0; c < dim; ++c) {
            values[(k + 1) * dim + c] = values[k * dim + c] + sd * gauss.normal();
        }
    }
    SampledPath path(uniform_grid(steps, horizon), std::move(values), dim);
    RoughPath rp = lift_piecewise_linear(path, p);
    return {std::move(path), std::move(rp)};
}

/// Frobenius norm of delta X2_sut - X1_su (x) X1_ut at grid indices.
template <RoughPathLike R>
double chen_defect_at(const R& rp, std::size_t s, std::size_t u, std::size_t t) {
    if (!(s <= u && u <= t)) {
        throw DomainError("chen_defect needs an ordered triple s <= u <= t");
    }
    const Eigen::MatrixXd d2 = rp.level2(s, t) - rp.level2(s, u) - rp.level2(u, t);
    return (d2 - rp.level1(s, u) * rp.level1(u, t).transpose()).norm();
}

template <RoughPathLike R>
double chen_defect(const R& rp, double s, double u, double t) {
    return chen_defect_at(rp, grid_index(rp.times(), s), grid_index(rp.times(), u), grid_index(rp.times(), t));
}

/// Frobenius norm of Sym(X2_st) - X1_st (x) X1_st / 2 at grid indices.
template <RoughPathLike R>
double geometricity_defect_at(const R& rp, std::size_t s, std::size_t t) {
    const Eigen::MatrixXd x2 = rp.level2(s, t);
    const Eigen::VectorXd x1 = rp.level1(s, t);
    const Eigen::MatrixXd sym = 0.5 * (x2 + x2.transpose());
    return (sym - 0.5 * x1 * x1.transpose()).norm();
}

template <RoughPathLike R>
double geometricity_defect(const R& rp, double s, double t) {
    return geometricity_defect_at(rp, grid_index(rp.times(), s), grid_index(rp.times(), t));
}

/// Size of the terms entering Chen's relation on (s, u, t), used to make
/// its defect relative: 1 + |X1_su| |X1_ut| + |X2_su| + |X2_ut| + |X2_st|.
template <RoughPathLike R>
double chen_scale(const R& rp, std::size_t s, std::size_t u, std::size_t t) {
    return 1.0 + rp.level1(s, u).norm() * rp.level1(u, t).norm() + rp.level2(s, u).norm() + rp.level2(u, t).norm() +
           rp.level2(s, t).norm();
}

/// Same for the geometricity defect on (s, t): 1 + |X1_st|^2 + |X2_st|.
template <RoughPathLike R>
double geometricity_scale(const R& rp, std::size_t s, std::size_t t) {
    const double x1 = rp.level1(s, t).norm();
    return 1.0 + x1 * x1 + rp.level2(s, t).norm();
}

} // namespace roughgron

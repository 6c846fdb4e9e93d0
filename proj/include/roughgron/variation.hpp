#pragma once

// p-variation of sampled paths and two-index maps, the controls they induce,
// and interval decompositions at a control threshold.

#include "roughgron/errors.hpp"
#include "roughgron/rough_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace roughgron {

/// best[j - i0] = sup over partitions i0 = k_0 < ... < k_m = j of
/// sum weight(k_l, k_{l+1}), for every j in [i0, i_end]. `weight` returns the
/// already-powered edge weight. O((i_end - i0)^2).
template <class Weight>
std::vector<double> partition_sup_row(std::size_t i0, std::size_t i_end, Weight&& weight) {
    std::vector<double> best(i_end - i0 + 1, 0.0);
    for (std::size_t j = i0 + 1; j <= i_end; ++j) {
        double b = -std::numeric_limits<double>::infinity();
        for (std::size_t i = i0; i < j; ++i) {
            b = std::max(b, best[i - i0] + weight(i, j));
        }
        best[j - i0] = b;
    }
    return best;
}

template <class Weight>
double partition_sup(std::size_t i0, std::size_t i1, Weight&& weight) {
    if (i1 <= i0) {
        return 0.0;
    }
    return partition_sup_row(i0, i1, std::forward<Weight>(weight)).back();
}

inline void require_variation_exponent(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw ParameterError("variation exponent must be >= 1, got " + std::to_string(p));
    }
}

namespace detail {

inline double increment_norm(std::span<const double> values, std::size_t dim, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
        const double v = values[j * dim + c] - values[i * dim + c];
        s += v * v;
    }
    return std::sqrt(s);
}

} // namespace detail

/// p-variation seminorm of a path over grid indices [i0, i1], the supremum
/// taken over partitions made of grid points.
inline double pvar_path_at(std::span<const double> values, std::size_t dim, double p, std::size_t i0,
                           std::size_t i1) {
    require_variation_exponent(p);
    const double sum = partition_sup(i0, i1, [&](std::size_t i, std::size_t j) {
        return std::pow(detail::increment_norm(values, dim, i, j), p);
    });
    return std::pow(sum, 1.0 / p);
}

inline double pvar_path(const SampledPath& g, double p, double s, double t) {
    const std::size_t i0 = grid_index(g.times(), s);
    const std::size_t i1 = grid_index(g.times(), t);
    if (i1 < i0) {
        throw DomainError("pvar_path needs s <= t");
    }
    return pvar_path_at(g.values(), g.dim(), p, i0, i1);
}

/// q-variation of a two-index map given through its norm |g_ij|; the values
/// enter as edge weights directly rather than as path differences.
template <class Norm>
double pvar_2index_at(Norm&& norm, double q, std::size_t i0, std::size_t i1) {
    require_variation_exponent(q);
    const double sum = partition_sup(i0, i1, [&](std::size_t i, std::size_t j) { return std::pow(norm(i, j), q); });
    return std::pow(sum, 1.0 / q);
}

/// Lazily filled triangular table of partition suprema. Each row
/// (fixed left end) is computed once by a single DP pass, which yields the
/// supremum for every right end at the same cost. Rows are guarded by
/// std::call_once, so concurrent readers see identical values.
class PvarTable {
public:
    using Weight = std::function<double(std::size_t, std::size_t)>;

    /// `weight(i, j)` is the already-powered edge weight of the pair.
    PvarTable(std::size_t n, Weight weight)
        : n_(n), weight_(std::move(weight)), rows_(n), flags_(std::make_unique<std::once_flag[]>(n)) {}

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const {
        if (j <= i) {
            return 0.0;
        }
        std::call_once(flags_[i], [&] { rows_[i] = partition_sup_row(i, n_ - 1, weight_); });
        return rows_[i][j - i];
    }

private:
    std::size_t n_;
    Weight weight_;
    mutable std::vector<std::vector<double>> rows_;
    std::unique_ptr<std::once_flag[]> flags_;
};

/// A nonnegative function of ordered grid pairs, expected to be
/// superadditive. Evaluation is by grid index; `at` takes times.
class Control {
public:
    using Evaluator = std::function<double(std::size_t, std::size_t)>;

    Control(std::vector<double> grid, Evaluator evaluator, std::string label)
        : grid_(std::make_shared<const std::vector<double>>(std::move(grid))),
          evaluator_(std::move(evaluator)),
          label_(std::move(label)) {
        detail::validate_times(*grid_);
    }

    double operator()(std::size_t i, std::size_t j) const { return j <= i ? 0.0 : evaluator_(i, j); }
    double at(double s, double t) const { return (*this)(grid_index(*grid_, s), grid_index(*grid_, t)); }

    std::span<const double> grid() const { return *grid_; }
    std::size_t size() const { return grid_->size(); }
    const std::string& label() const { return label_; }

    /// Closed-form control given as a function of times.
    static Control from_times(std::vector<double> grid, std::function<double(double, double)> fn, std::string label) {
        auto shared = std::make_shared<const std::vector<double>>(grid);
        return Control(std::move(grid),
                       [shared, fn = std::move(fn)](std::size_t i, std::size_t j) { return fn((*shared)[i], (*shared)[j]); },
                       std::move(label));
    }

    static Control zero(std::vector<double> grid) {
        return Control(std::move(grid), [](std::size_t, std::size_t) { return 0.0; }, "zero");
    }

    friend Control operator+(const Control& a, const Control& b) {
        if (a.size() != b.size()) {
            throw ParameterError("cannot add controls on different grids");
        }
        return Control(std::vector<double>(a.grid().begin(), a.grid().end()),
                       [a, b](std::size_t i, std::size_t j) { return a(i, j) + b(i, j); },
                       a.label() + "+" + b.label());
    }

private:
    std::shared_ptr<const std::vector<double>> grid_;
    Evaluator evaluator_;
    std::string label_;
};

/// omega(s,t) = ||g||^p_{p-var,[s,t]} with the DP table behind it.
inline Control control_from_pvar(const SampledPath& g, double p) {
    require_variation_exponent(p);
    auto values = std::make_shared<const std::vector<double>>(g.values().begin(), g.values().end());
    const std::size_t dim = g.dim();
    auto table = std::make_shared<PvarTable>(g.size(), [values, dim, p](std::size_t i, std::size_t j) {
        return std::pow(detail::increment_norm(*values, dim, i, j), p);
    });
    return Control(std::vector<double>(g.times().begin(), g.times().end()),
                   [table](std::size_t i, std::size_t j) { return (*table)(i, j); }, "pvar-path");
}

/// omega(s,t) = ||g||^q_{q-var,[s,t]} for a two-index map with norm |g_ij|.
inline Control control_from_pvar_2index(std::vector<double> grid, std::function<double(std::size_t, std::size_t)> norm,
                                        double q, std::string label = "pvar-2index") {
    require_variation_exponent(q);
    auto table = std::make_shared<PvarTable>(grid.size(), [norm = std::move(norm), q](std::size_t i, std::size_t j) {
        return std::pow(norm(i, j), q);
    });
    return Control(std::move(grid), [table](std::size_t i, std::size_t j) { return (*table)(i, j); }, std::move(label));
}

/// Control of a rough path: ||X1||^p_{p-var} + ||X2||^{p/2}_{p/2-var}.
inline Control rough_path_control(const RoughPath& rp) {
    auto shared = std::make_shared<const RoughPath>(rp);
    std::vector<double> grid(rp.times().begin(), rp.times().end());
    Control c1 = control_from_pvar_2index(
        grid, [shared](std::size_t i, std::size_t j) { return shared->level1_norm(i, j); }, rp.p(), "X1");
    Control c2 = control_from_pvar_2index(
        grid, [shared](std::size_t i, std::size_t j) { return shared->level2_norm(i, j); }, rp.p() / 2.0, "X2");
    return c1 + c2;
}

/// Same quantity over [i0, i1] alone, without building row tables.
inline double rough_path_control_on(const RoughPath& rp, std::size_t i0, std::size_t i1) {
    const double p = rp.p();
    const double w1 = partition_sup(i0, i1, [&](std::size_t i, std::size_t j) { return std::pow(rp.level1_norm(i, j), p); });
    const double w2 =
        partition_sup(i0, i1, [&](std::size_t i, std::size_t j) { return std::pow(rp.level2_norm(i, j), p / 2.0); });
    return w1 + w2;
}

struct SuperadditivityReport {
    double worst_defect = -std::numeric_limits<double>::infinity(); ///< max omega(s,u)+omega(u,t)-omega(s,t)
    double worst_relative = -std::numeric_limits<double>::infinity(); ///< same divided by 1 + omega(s,t)
    std::size_t s = 0, u = 0, t = 0;                                  ///< triple attaining worst_defect
};

/// Scans every grid triple s < u < t. O(n^3) evaluations.
inline SuperadditivityReport check_superadditive(const Control& omega) {
    SuperadditivityReport rep;
    const std::size_t n = omega.size();
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 2; t < n; ++t) {
            const double wst = omega(s, t);
            for (std::size_t u = s + 1; u < t; ++u) {
                const double def = omega(s, u) + omega(u, t) - wst;
                if (def > rep.worst_defect) {
                    rep.worst_defect = def;
                    rep.s = s;
                    rep.u = u;
                    rep.t = t;
                }
                rep.worst_relative = std::max(rep.worst_relative, def / (1.0 + wst));
            }
        }
    }
    if (n < 3) {
        rep.worst_defect = 0.0;
        rep.worst_relative = 0.0;
    }
    return rep;
}

inline bool is_superadditive(const Control& omega, double rel_tol = 1e-10) {
    return check_superadditive(omega).worst_relative <= rel_tol;
}

/// Largest value on consecutive grid pairs: the observable proxy for
/// regularity (omega(s,t) -> 0 as |t - s| -> 0).
inline double finest_scale(const Control& omega) {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < omega.size(); ++k) {
        m = std::max(m, omega(k, k + 1));
    }
    return m;
}

struct PartitionInterval {
    std::size_t begin;
    std::size_t end;
    bool degenerate; ///< a single grid step already exceeds the threshold
};

/// Greedy decomposition of the grid into maximal consecutive intervals with
/// omega <= L. Comparisons allow a relative slack of `rel_slack` so that a
/// value equal to L up to rounding counts as within the threshold.
inline std::vector<PartitionInterval> greedy_partition(const Control& omega, double L, double rel_slack = 1e-12) {
    if (!(L > 0.0)) {
        throw ParameterError("greedy_partition needs L > 0");
    }
    const double threshold = L * (1.0 + rel_slack);
    std::vector<PartitionInterval> out;
    const std::size_t last = omega.size() - 1;
    std::size_t tau = 0;
    while (tau < last) {
        if (omega(tau, tau + 1) > threshold) {
            out.push_back({tau, tau + 1, true});
            ++tau;
            continue;
        }
        std::size_t j = tau + 1;
        while (j < last && omega(tau, j + 1) <= threshold) {
            ++j;
        }
        out.push_back({tau, j, false});
        tau = j;
    }
    return out;
}

} // namespace roughgron

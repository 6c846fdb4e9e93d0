#pragma once

// Heat equation with rough transport noise on a periodic 1-D grid,
//   du = nu Lap u dt + V . grad u dX,
// discretised through an unbounded rough driver (A1, A2) built from a rough
// path, with the u^2 energy remainder and the Gronwall energy certificate.

#include "roughgron/errors.hpp"
#include "roughgron/gronwall.hpp"
#include "roughgron/rde.hpp"
#include "roughgron/rough_core.hpp"
#include "roughgron/variation.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace roughgron {

using SparseOp = Eigen::SparseMatrix<double>;

/// Uniform periodic grid on [0, length) with its discrete scale of norms.
struct PeriodicGrid {
    std::size_t nx;
    double length;
    double dx;

    explicit PeriodicGrid(std::size_t points, double len = 1.0) : nx(points), length(len), dx(len / static_cast<double>(points)) {
        if (points < 3 || !(len > 0.0)) {
            throw ParameterError("periodic grid needs at least 3 points and positive length");
        }
    }

    std::vector<double> nodes() const {
        std::vector<double> x(nx);
        for (std::size_t i = 0; i < nx; ++i) {
            x[i] = static_cast<double>(i) * dx;
        }
        return x;
    }

    std::size_t next(std::size_t i) const { return i + 1 == nx ? 0 : i + 1; }
    std::size_t prev(std::size_t i) const { return i == 0 ? nx - 1 : i - 1; }
};

namespace grid_ops {

/// (u_{i+1} - u_{i-1}) / (2 dx)
inline SparseOp central_difference(const PeriodicGrid& g) {
    std::vector<Eigen::Triplet<double>> trip;
    const double c = 1.0 / (2.0 * g.dx);
    for (std::size_t i = 0; i < g.nx; ++i) {
        trip.emplace_back(static_cast<int>(i), static_cast<int>(g.next(i)), c);
        trip.emplace_back(static_cast<int>(i), static_cast<int>(g.prev(i)), -c);
    }
    SparseOp op(static_cast<Eigen::Index>(g.nx), static_cast<Eigen::Index>(g.nx));
    op.setFromTriplets(trip.begin(), trip.end());
    return op;
}

inline Eigen::VectorXd forward_difference(const PeriodicGrid& g, const Eigen::VectorXd& u) {
    Eigen::VectorXd out(u.size());
    for (std::size_t i = 0; i < g.nx; ++i) {
        out[static_cast<Eigen::Index>(i)] =
            (u[static_cast<Eigen::Index>(g.next(i))] - u[static_cast<Eigen::Index>(i)]) / g.dx;
    }
    return out;
}

/// Three-point periodic Laplacian.
inline Eigen::VectorXd laplacian(const PeriodicGrid& g, const Eigen::VectorXd& u) {
    Eigen::VectorXd out(u.size());
    const double inv = 1.0 / (g.dx * g.dx);
    for (std::size_t i = 0; i < g.nx; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out[k] = (u[static_cast<Eigen::Index>(g.prev(i))] - 2.0 * u[k] + u[static_cast<Eigen::Index>(g.next(i))]) * inv;
    }
    return out;
}

/// sum_i a_i b_i dx
inline double inner(const PeriodicGrid& g, const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(b) * g.dx; }

inline double l2_squared(const PeriodicGrid& g, const Eigen::VectorXd& u) { return inner(g, u, u); }

/// ||D+ u||^2_{L2}, the discrete Dirichlet energy.
inline double gradient_energy(const PeriodicGrid& g, const Eigen::VectorXd& u) {
    const Eigen::VectorXd du = forward_difference(g, u);
    return inner(g, du, du);
}

/// Level-n norm of the scale: max_{m <= n} ||D+^m u||_inf (discrete W^{n,inf}).
inline double scale_norm(const PeriodicGrid& g, const Eigen::VectorXd& u, std::size_t level) {
    Eigen::VectorXd w = u;
    double best = w.lpNorm<Eigen::Infinity>();
    for (std::size_t m = 1; m <= level; ++m) {
        w = forward_difference(g, w);
        best = std::max(best, w.lpNorm<Eigen::Infinity>());
    }
    return best;
}

inline double l2_norm(const PeriodicGrid& g, const Eigen::VectorXd& u) { return std::sqrt(l2_squared(g, u)); }

} // namespace grid_ops

/// The discretised transport driver
///   A1_st = X1^k_st M_k,   A2_st = X2^{jk}_st M_k M_j,   M_k = diag(V^k) D,
/// with D the central difference. Chen's relation for (A1, A2) is inherited
/// from the rough path. Operator bounds on the discrete scale use the
/// Leibniz rule for forward differences, see `adjoint_bound`.
class GridDriver {
public:
    GridDriver(PeriodicGrid grid, std::vector<Eigen::VectorXd> fields, RoughPath rp)
        : grid_(grid), fields_(std::move(fields)), rp_(std::make_shared<const RoughPath>(std::move(rp))) {
        const std::size_t d = rp_->dim();
        if (fields_.size() != d) {
            throw ParameterError("need one transport field per rough path component");
        }
        for (const auto& v : fields_) {
            if (static_cast<std::size_t>(v.size()) != grid_.nx) {
                throw ParameterError("transport field length does not match the grid");
            }
        }
        const SparseOp D = grid_ops::central_difference(grid_);
        for (const auto& v : fields_) {
            SparseOp diag(D.rows(), D.cols());
            std::vector<Eigen::Triplet<double>> trip;
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                trip.emplace_back(static_cast<int>(i), static_cast<int>(i), v[i]);
            }
            diag.setFromTriplets(trip.begin(), trip.end());
            M_.push_back(SparseOp(diag * D));
        }
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t j = 0; j < d; ++j) {
                MM_.push_back(SparseOp(M_[k] * M_[j]));
            }
        }
        for (std::size_t k = 0; k < d; ++k) {
            std::array<double, 3> c{};
            for (std::size_t level = 0; level < 3; ++level) {
                c[level] = compute_adjoint_bound(fields_[k], level);
            }
            bounds_.push_back(c);
        }
    }

    const PeriodicGrid& grid() const { return grid_; }
    const RoughPath& rough_path() const { return *rp_; }
    std::size_t dim() const { return rp_->dim(); }
    const SparseOp& transport(std::size_t k) const { return M_[k]; }

    SparseOp A1(std::size_t i, std::size_t j) const {
        SparseOp out(M_[0].rows(), M_[0].cols());
        for (std::size_t k = 0; k < dim(); ++k) {
            out += rp_->level1(i, j, k) * M_[k];
        }
        return out;
    }

    SparseOp A2(std::size_t i, std::size_t j) const {
        SparseOp out(M_[0].rows(), M_[0].cols());
        const std::size_t d = dim();
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                // X2^{ab} multiplies M_b M_a
                out += rp_->level2(i, j, a, b) * MM_[b * d + a];
            }
        }
        return out;
    }

    Eigen::VectorXd apply_A1(std::size_t i, std::size_t j, const Eigen::VectorXd& u) const {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(u.size());
        for (std::size_t k = 0; k < dim(); ++k) {
            out += rp_->level1(i, j, k) * (M_[k] * u);
        }
        return out;
    }

    Eigen::VectorXd apply_A2(std::size_t i, std::size_t j, const Eigen::VectorXd& u) const {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(u.size());
        const std::size_t d = dim();
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                out += rp_->level2(i, j, a, b) * (MM_[b * d + a] * u);
            }
        }
        return out;
    }

    /// Upper bound for ||M_k^T||_{E_{n+1} -> E_n} on the discrete scale
    /// ||phi||_n = max_{m<=n} ||D+^m phi||_inf:
    ///   max_{m<=n} sum_{j=0}^{m+1} binom(m+1, j) ||D+^j V^k||_inf.
    double adjoint_bound(std::size_t k, std::size_t level) const { return bounds_.at(k).at(level); }

    enum class Term { A1Level0, A1Level2, A2Level0, A2Level1 };

    struct NormTerms {
        std::array<double, 4> value{}; ///< powered bounds, indexed by Term
        double max() const { return *std::max_element(value.begin(), value.end()); }
        Term binding() const {
            return static_cast<Term>(std::max_element(value.begin(), value.end()) - value.begin());
        }
    };

    /// Powered operator-norm bounds of (A1_ij, A2_ij) at every listed level:
    /// ||A1||^p for n in {0, 2} and ||A2||^{p/2} for n in {0, 1}.
    NormTerms norm_terms(std::size_t i, std::size_t j) const {
        const std::size_t d = dim();
        const double p = rp_->p();
        NormTerms t;
        const std::array<std::size_t, 2> l1{0, 2};
        for (std::size_t m = 0; m < 2; ++m) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                s += std::abs(rp_->level1(i, j, k)) * bounds_[k][l1[m]];
            }
            t.value[m] = std::pow(s, p);
        }
        for (std::size_t n = 0; n < 2; ++n) {
            double s = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) {
                    // (M_b M_a)^T = M_a^T M_b^T : E_{n+2} -> E_{n+1} -> E_n
                    s += std::abs(rp_->level2(i, j, a, b)) * bounds_[a][n] * bounds_[b][n + 1];
                }
            }
            t.value[2 + n] = std::pow(s, p / 2.0);
        }
        return t;
    }

private:
    double compute_adjoint_bound(const Eigen::VectorXd& v, std::size_t level) const {
        std::vector<double> deriv_sup;
        Eigen::VectorXd w = v;
        for (std::size_t j = 0; j <= level + 1; ++j) {
            deriv_sup.push_back(w.lpNorm<Eigen::Infinity>());
            w = grid_ops::forward_difference(grid_, w);
        }
        double best = 0.0;
        for (std::size_t m = 0; m <= level; ++m) {
            double s = 0.0;
            double binom = 1.0;
            for (std::size_t j = 0; j <= m + 1; ++j) {
                s += binom * deriv_sup[j];
                binom = binom * static_cast<double>(m + 1 - j) / static_cast<double>(j + 1);
            }
            best = std::max(best, s);
        }
        return best;
    }

    PeriodicGrid grid_;
    std::vector<Eigen::VectorXd> fields_;
    std::shared_ptr<const RoughPath> rp_;
    std::vector<SparseOp> M_;
    std::vector<SparseOp> MM_;
    std::vector<std::array<double, 3>> bounds_;
};

inline const char* term_name(GridDriver::Term t) {
    switch (t) {
    case GridDriver::Term::A1Level0:
        return "A1 E0->E1";
    case GridDriver::Term::A1Level2:
        return "A1 E2->E3";
    case GridDriver::Term::A2Level0:
        return "A2 E0->E2";
    case GridDriver::Term::A2Level1:
        return "A2 E1->E3";
    }
    return "?";
}

/// Transport driver from per-component fields V^k sampled on the grid.
inline GridDriver build_transport_driver(const PeriodicGrid& grid, std::vector<Eigen::VectorXd> fields, RoughPath rp) {
    return GridDriver(grid, std::move(fields), std::move(rp));
}

/// Frobenius norm of delta A2_sut - A1_ut A1_su at driver grid indices.
inline double driver_chen_defect(const GridDriver& gd, std::size_t s, std::size_t u, std::size_t t) {
    const SparseOp lhs = gd.A2(s, t) - gd.A2(s, u) - gd.A2(u, t);
    const SparseOp rhs = gd.A1(u, t) * gd.A1(s, u);
    return SparseOp(lhs - rhs).norm();
}

/// Frobenius norm of delta A1_sut.
inline double driver_additivity_defect(const GridDriver& gd, std::size_t s, std::size_t u, std::size_t t) {
    return SparseOp(gd.A1(s, t) - gd.A1(s, u) - gd.A1(u, t)).norm();
}

/// omega_A on the sub-grid `indices` of the driver's time grid (empty means
/// the full grid): the partition supremum of the powered operator bounds
/// over partitions made of sub-grid points.
inline Control driver_control(const GridDriver& gd, std::span<const std::size_t> indices = {}) {
    auto idx = std::make_shared<const std::vector<std::size_t>>(detail::resolve_subgrid(gd.rough_path(), indices));
    std::vector<double> times;
    for (std::size_t k : *idx) {
        times.push_back(gd.rough_path().times()[k]);
    }
    auto driver = std::make_shared<const GridDriver>(gd);
    auto table = std::make_shared<PvarTable>(idx->size(), [driver, idx](std::size_t i, std::size_t j) {
        return driver->norm_terms((*idx)[i], (*idx)[j]).max();
    });
    return Control(std::move(times), [table](std::size_t i, std::size_t j) { return (*table)(i, j); }, "omega_A");
}

/// omega_A over driver indices [i0, i1] on the full grid, without a table.
inline double driver_control_on(const GridDriver& gd, std::size_t i0, std::size_t i1) {
    return partition_sup(i0, i1, [&](std::size_t i, std::size_t j) { return gd.norm_terms(i, j).max(); });
}

struct StepOptions {
    bool force = false; ///< step even if the diffusive CFL condition fails
};

/// u + nu dt Lap u + A1_st u + A2_st u; the remainder is dropped.
inline Eigen::VectorXd step_heat(const Eigen::VectorXd& u, const GridDriver& gd, double nu, double dt, std::size_t s,
                                 std::size_t t, StepOptions opt = {}) {
    const PeriodicGrid& g = gd.grid();
    if (nu > 0.0 && dt > g.dx * g.dx / (2.0 * nu) && !opt.force) {
        throw ParameterError("diffusive CFL condition dt <= dx^2 / (2 nu) violated");
    }
    Eigen::VectorXd next = u + (nu * dt) * grid_ops::laplacian(g, u);
    next += gd.apply_A1(s, t, u);
    next += gd.apply_A2(s, t, u);
    return next;
}

struct RPDETrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> u;
    std::vector<double> l2_squared;
    std::vector<double> gradient_energy;
    std::vector<double> G; ///< ||u_t||^2 + 2 int_0^t ||grad u||^2 (trapezoid)
    double nu = 1.0;
    double max_transport_courant = 0.0; ///< max_k |X1 step| max|V| / dx, stability diagnostic
};

/// Runs step_heat over every step of the driver's time grid.
inline RPDETrajectory solve_heat(const GridDriver& gd, const Eigen::VectorXd& u0, double nu, StepOptions opt = {}) {
    const PeriodicGrid& g = gd.grid();
    const RoughPath& rp = gd.rough_path();
    if (static_cast<std::size_t>(u0.size()) != g.nx) {
        throw ParameterError("initial datum length does not match the grid");
    }
    double vmax = 0.0;
    for (std::size_t k = 0; k < gd.dim(); ++k) {
        vmax = std::max(vmax, gd.adjoint_bound(k, 0));
    }
    RPDETrajectory traj;
    traj.nu = nu;
    traj.times.assign(rp.times().begin(), rp.times().end());
    traj.u.reserve(rp.size());
    traj.u.push_back(u0);
    for (std::size_t k = 0; k + 1 < rp.size(); ++k) {
        const double dt = rp.times()[k + 1] - rp.times()[k];
        traj.max_transport_courant = std::max(traj.max_transport_courant, rp.level1_norm(k, k + 1) * vmax / g.dx);
        traj.u.push_back(step_heat(traj.u.back(), gd, nu, dt, k, k + 1, opt));
    }
    double integral = 0.0;
    for (std::size_t k = 0; k < traj.u.size(); ++k) {
        traj.l2_squared.push_back(grid_ops::l2_squared(g, traj.u[k]));
        traj.gradient_energy.push_back(grid_ops::gradient_energy(g, traj.u[k]));
        if (k > 0) {
            integral += 0.5 * (traj.times[k] - traj.times[k - 1]) * (traj.gradient_energy[k - 1] + traj.gradient_energy[k]);
        }
        traj.G.push_back(traj.l2_squared[k] + 2.0 * nu * integral);
    }
    return traj;
}

namespace detail {

/// <|D+u|^2, phi> + <u D+u, D+phi>, the integrand of the drift part of the
/// u^2 equation tested against phi.
inline double u2_drift_density(const PeriodicGrid& g, const Eigen::VectorXd& u, const Eigen::VectorXd& phi,
                               const Eigen::VectorXd& dphi) {
    const Eigen::VectorXd du = grid_ops::forward_difference(g, u);
    return grid_ops::inner(g, du.cwiseProduct(du), phi) + grid_ops::inner(g, u.cwiseProduct(du), dphi);
}

} // namespace detail

/// u^{2,natural}_st(phi) = delta <u^2, phi>_st + 2 nu int_s^t (<|grad u|^2, phi> + <u grad u, grad phi>) dr
///                         - <A1_st u_s^2, phi> - <A2_st u_s^2, phi>,
/// time integrals by the trapezoid rule on the solver grid.
inline double u_squared_remainder(const RPDETrajectory& traj, const GridDriver& gd, const Eigen::VectorXd& phi,
                                  std::size_t s, std::size_t t) {
    const PeriodicGrid& g = gd.grid();
    const Eigen::VectorXd dphi = grid_ops::forward_difference(g, phi);
    const Eigen::VectorXd us2 = traj.u[s].cwiseProduct(traj.u[s]);
    const Eigen::VectorXd ut2 = traj.u[t].cwiseProduct(traj.u[t]);
    double integral = 0.0;
    double prev = detail::u2_drift_density(g, traj.u[s], phi, dphi);
    for (std::size_t k = s + 1; k <= t; ++k) {
        const double cur = detail::u2_drift_density(g, traj.u[k], phi, dphi);
        integral += 0.5 * (traj.times[k] - traj.times[k - 1]) * (prev + cur);
        prev = cur;
    }
    const Eigen::VectorXd rough = gd.apply_A1(s, t, us2) + gd.apply_A2(s, t, us2);
    return grid_ops::inner(g, ut2 - us2, phi) + 2.0 * traj.nu * integral - grid_ops::inner(g, rough, phi);
}

/// omega_mu(s,t) = int ||grad u||^2 + (int ||grad u||^2)^{1/2} (int ||u||^2)^{1/2}.
inline double drift_control(const RPDETrajectory& traj, std::size_t s, std::size_t t) {
    double grad = 0.0;
    double mass = 0.0;
    for (std::size_t k = s + 1; k <= t; ++k) {
        const double h = traj.times[k] - traj.times[k - 1];
        grad += 0.5 * h * (traj.gradient_energy[k - 1] + traj.gradient_energy[k]);
        mass += 0.5 * h * (traj.l2_squared[k - 1] + traj.l2_squared[k]);
    }
    return grad + std::sqrt(grad) * std::sqrt(mass);
}

struct U2ScalingRow {
    std::size_t depth;
    double sup_remainder;
    double sup_ratio; ///< |u2 remainder| / (sup ||u^2||_{L1} omega_A^{3/p} + omega_mu omega_A^{(3-p)/p})
};

/// Dyadic table of the u^2 remainder against the a priori scale.
inline std::vector<U2ScalingRow> u_squared_scaling_report(const RPDETrajectory& traj, const GridDriver& gd,
                                                          const Eigen::VectorXd& phi, std::size_t max_depth = 6) {
    const double p = gd.rough_path().p();
    const std::size_t steps = traj.u.size() - 1;
    std::vector<U2ScalingRow> rows;
    for (std::size_t depth = 1; depth <= max_depth && (std::size_t{1} << depth) <= steps; ++depth) {
        const std::size_t parts = std::size_t{1} << depth;
        U2ScalingRow row{depth, 0.0, 0.0};
        for (std::size_t j = 0; j < parts; ++j) {
            const std::size_t a = j * steps / parts;
            const std::size_t b = (j + 1) * steps / parts;
            const double rem = std::abs(u_squared_remainder(traj, gd, phi, a, b));
            double mass = 0.0;
            for (std::size_t k = a; k <= b; ++k) {
                mass = std::max(mass, traj.u[k].cwiseAbs2().sum() * gd.grid().dx);
            }
            const double wa = driver_control_on(gd, a, b);
            const double scale = mass * std::pow(wa, 3.0 / p) + drift_control(traj, a, b) * std::pow(wa, (3.0 - p) / p);
            row.sup_remainder = std::max(row.sup_remainder, rem);
            if (scale > 0.0) {
                row.sup_ratio = std::max(row.sup_ratio, rem / scale);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

inline double energy_kappa(double p) { return std::min(p, p / (3.0 - p)); }

/// omega_1 = omega_A^{kappa/p} + |t-s|^kappa omega_A^{(3-p)kappa/p} + omega_A^{(3-p)kappa/p}.
inline Control energy_omega1(const Control& omega_A, double p) {
    const double kappa = energy_kappa(p);
    return Control(std::vector<double>(omega_A.grid().begin(), omega_A.grid().end()),
                   [omega_A, p, kappa](std::size_t i, std::size_t j) {
                       const double w = omega_A(i, j);
                       const double len = omega_A.grid()[j] - omega_A.grid()[i];
                       const double tail = std::pow(w, (3.0 - p) * kappa / p);
                       return std::pow(w, kappa / p) + std::pow(len, kappa) * tail + tail;
                   },
                   "omega_1");
}

struct EnergyCheckOptions {
    std::optional<double> C;        ///< Gronwall constant; fitted on this run when absent
    std::optional<double> L;        ///< smallness threshold; chosen for >= 4 greedy intervals when absent
    std::size_t max_observations = 257;
    std::optional<double> tolerance;
    double min_C = 1e-12;
};

struct EnergyReport {
    GronwallCertificate certificate;
    double observed_sup_G = 0.0;
    double G0 = 0.0;
    double C = 0.0;
    double L = 0.0;
    double kappa = 0.0;
    bool C_fitted = false;
    bool holds = false;
    double omega_A_total = 0.0;
    double omega1_total = 0.0;
    std::size_t observations = 0;
    std::size_t greedy_intervals = 0;
    std::string binding_term;
};

namespace detail {

inline double fit_gronwall_constant(const std::vector<double>& G, const Control& omega1, double L, double kappa,
                                    double floor) {
    double C = floor;
    double running = 0.0;
    std::vector<double> sup(G.size());
    for (std::size_t k = 0; k < G.size(); ++k) {
        running = std::max(running, G[k]);
        sup[k] = running;
    }
    for (std::size_t s = 0; s < G.size(); ++s) {
        for (std::size_t t = s + 1; t < G.size(); ++t) {
            const double w = omega1(s, t);
            const double dG = G[t] - G[s];
            if (w > L || w == 0.0 || dG <= 0.0 || sup[t] == 0.0) {
                continue;
            }
            C = std::max(C, dG / (sup[t] * std::pow(w, 1.0 / kappa)));
        }
    }
    return C;
}

} // namespace detail

/// Assembles G, omega_1 (from omega_A), omega_2 = 0 and kappa = min(p, p/(3-p))
/// on an observation sub-grid of at most `max_observations` points and runs
/// the Gronwall certificate.
inline EnergyReport energy_bound_check(const RPDETrajectory& traj, const GridDriver& gd,
                                       const EnergyCheckOptions& opt = {}) {
    const double p = gd.rough_path().p();
    const std::size_t n = traj.G.size();
    const std::size_t stride = std::max<std::size_t>(1, (n - 1 + opt.max_observations - 2) / (opt.max_observations - 1));
    const std::vector<std::size_t> obs = strided_subgrid(n, stride);
    const Control omega_A = driver_control(gd, obs);
    const Control omega1 = energy_omega1(omega_A, p);

    EnergyReport rep;
    rep.kappa = energy_kappa(p);
    rep.observations = obs.size();
    std::vector<double> G;
    for (std::size_t k : obs) {
        G.push_back(traj.G[k]);
    }
    rep.G0 = G.front();
    rep.observed_sup_G = *std::max_element(G.begin(), G.end());
    rep.omega_A_total = omega_A(0, obs.size() - 1);
    rep.omega1_total = omega1(0, obs.size() - 1);
    rep.binding_term = term_name(gd.norm_terms(obs.front(), obs.back()).binding());

    if (opt.L) {
        rep.L = *opt.L;
    } else if (rep.omega1_total > 0.0) {
        rep.L = rep.omega1_total / 4.0;
        while (greedy_partition(omega1, rep.L).size() < 4) {
            rep.L /= 2.0;
        }
    } else {
        rep.L = 1.0;
    }
    rep.greedy_intervals = greedy_partition(omega1, rep.L).size();

    if (opt.C) {
        rep.C = *opt.C;
    } else {
        rep.C = detail::fit_gronwall_constant(G, omega1, rep.L, rep.kappa, opt.min_C);
        rep.C_fitted = true;
    }
    GronwallInput in{G, omega1, Control::zero(std::vector<double>(omega1.grid().begin(), omega1.grid().end())), rep.C,
                     rep.L, rep.kappa};
    const double tol = opt.tolerance.value_or(default_gronwall_tolerance(in));
    const GronwallVerdict v = gronwall_verify(in, G.size() - 1, tol);
    rep.certificate = v.certificate;
    rep.holds = v.holds;
    return rep;
}

/// Initial data and transport fields by name.
namespace heat_profiles {

inline Eigen::VectorXd sine(const PeriodicGrid& g) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(g.nx));
    for (std::size_t i = 0; i < g.nx; ++i) {
        u[static_cast<Eigen::Index>(i)] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) * g.dx / g.length);
    }
    return u;
}

/// Smooth compactly supported bump centred at length/2, radius length/4.
inline Eigen::VectorXd bump(const PeriodicGrid& g) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.nx));
    const double c = 0.5 * g.length;
    const double r = 0.25 * g.length;
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double z = (static_cast<double>(i) * g.dx - c) / r;
        if (std::abs(z) < 1.0) {
            u[static_cast<Eigen::Index>(i)] = std::exp(1.0 - 1.0 / (1.0 - z * z));
        }
    }
    return u;
}

inline Eigen::VectorXd constant(const PeriodicGrid& g, double v) {
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.nx), v);
}

} // namespace heat_profiles

} // namespace roughgron

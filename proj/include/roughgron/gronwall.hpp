#pragma once

// The rough Gronwall lemma as a computable certificate: check the increment
// hypothesis on all grid pairs and evaluate the explicit conclusion bound.

#include "roughgron/errors.hpp"
#include "roughgron/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

namespace roughgron {

/// alpha = min(1, 1 / (L (2 C e^2)^kappa)).
inline double gronwall_alpha(double C, double L, double kappa) {
    if (!(C > 0.0) || !(L > 0.0)) {
        throw ParameterError("Gronwall constants C and L must be positive");
    }
    if (!(kappa >= 1.0)) {
        throw ParameterError("Gronwall exponent kappa must be >= 1");
    }
    const double e2 = std::exp(2.0);
    return std::min(1.0, 1.0 / (L * std::pow(2.0 * C * e2, kappa)));
}

struct GronwallInput {
    std::vector<double> G; ///< nonnegative samples on the controls' grid
    Control omega1;        ///< regular control measuring smallness
    Control omega2;        ///< additive forcing control
    double C = 1.0;
    double L = 1.0;
    double kappa = 1.0;

    void validate() const {
        if (G.size() != omega1.size() || G.size() != omega2.size()) {
            throw ParameterError("G, omega1 and omega2 must live on the same grid");
        }
        for (double g : G) {
            if (!(g >= 0.0) || !std::isfinite(g)) {
                throw ParameterError("G must be finite and nonnegative");
            }
        }
        (void)gronwall_alpha(C, L, kappa);
    }

    double sup_G() const { return G.empty() ? 0.0 : *std::max_element(G.begin(), G.end()); }
};

struct HypothesisReport {
    double worst_defect = -std::numeric_limits<double>::infinity();
    std::size_t pairs_checked = 0;
    std::size_t pairs_skipped = 0; ///< pairs with omega1(s,t) > L, outside the lemma's scope
    std::size_t worst_s = 0, worst_t = 0;
};

/// max over grid pairs s < t with omega1(s,t) <= L of
///   delta G_st - C (sup_{r <= t} G_r) omega1(s,t)^{1/kappa} - omega2(s,t).
inline HypothesisReport check_hypothesis(const GronwallInput& in) {
    in.validate();
    const std::size_t n = in.G.size();
    std::vector<double> running_sup(n);
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        m = std::max(m, in.G[k]);
        running_sup[k] = m;
    }
    HypothesisReport rep;
    const double inv_kappa = 1.0 / in.kappa;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
            const double w1 = in.omega1(s, t);
            if (w1 > in.L) {
                ++rep.pairs_skipped;
                continue;
            }
            ++rep.pairs_checked;
            const double def = in.G[t] - in.G[s] - in.C * running_sup[t] * std::pow(w1, inv_kappa) - in.omega2(s, t);
            if (def > rep.worst_defect) {
                rep.worst_defect = def;
                rep.worst_s = s;
                rep.worst_t = t;
            }
        }
    }
    if (rep.pairs_checked == 0) {
        rep.worst_defect = 0.0;
    }
    return rep;
}

struct GronwallCertificate {
    double alpha = 1.0;
    double bound = 0.0;
    double hypothesis_worst_defect = 0.0;
    std::size_t binding_pairs_checked = 0;
    std::size_t pairs_skipped = 0;
    double tolerance = 0.0;
    bool applicable = false; ///< hypothesis held within tolerance
};

inline double default_gronwall_tolerance(const GronwallInput& in) { return 1e-9 * (1.0 + in.sup_G()); }

/// 2 exp(omega1(0,T)/(alpha L)) {G_0 + sup_{t<=T} omega2(0,t) exp(-omega1(0,t)/(alpha L))},
/// with T the grid point `horizon_index` and the inner sup over grid times.
inline double gronwall_bound_value(const GronwallInput& in, double alpha, std::size_t horizon_index) {
    const double scale = alpha * in.L;
    double forcing = 0.0;
    for (std::size_t t = 0; t <= horizon_index; ++t) {
        const double w2 = in.omega2(0, t);
        if (w2 > 0.0) {
            forcing = std::max(forcing, w2 * std::exp(-in.omega1(0, t) / scale));
        }
    }
    const double brace = in.G.front() + forcing;
    if (brace == 0.0) {
        return 0.0;
    }
    return 2.0 * std::exp(in.omega1(0, horizon_index) / scale) * brace;
}

inline GronwallCertificate gronwall_bound(const GronwallInput& in, std::size_t horizon_index, double tol) {
    const HypothesisReport hyp = check_hypothesis(in);
    if (horizon_index >= in.G.size()) {
        throw DomainError("Gronwall horizon lies beyond the grid");
    }
    GronwallCertificate cert;
    cert.alpha = gronwall_alpha(in.C, in.L, in.kappa);
    cert.bound = gronwall_bound_value(in, cert.alpha, horizon_index);
    cert.hypothesis_worst_defect = hyp.worst_defect;
    cert.binding_pairs_checked = hyp.pairs_checked;
    cert.pairs_skipped = hyp.pairs_skipped;
    cert.tolerance = tol;
    cert.applicable = hyp.worst_defect <= tol;
    return cert;
}

inline GronwallCertificate gronwall_bound(const GronwallInput& in) {
    return gronwall_bound(in, in.G.size() - 1, default_gronwall_tolerance(in));
}

struct GronwallVerdict {
    bool holds = false;
    double observed_sup = 0.0;
    GronwallCertificate certificate;
};

/// True iff the hypothesis holds and sup_{t <= T} G_t <= bound + tol.
inline GronwallVerdict gronwall_verify(const GronwallInput& in, std::size_t horizon_index, double tol) {
    GronwallVerdict v;
    v.certificate = gronwall_bound(in, horizon_index, tol);
    v.observed_sup = *std::max_element(in.G.begin(), in.G.begin() + static_cast<std::ptrdiff_t>(horizon_index) + 1);
    v.holds = v.certificate.applicable && v.observed_sup <= v.certificate.bound + tol;
    return v;
}

inline GronwallVerdict gronwall_verify(const GronwallInput& in) {
    return gronwall_verify(in, in.G.size() - 1, default_gronwall_tolerance(in));
}

/// Largest G path compatible with the hypothesis: each new value is the
/// maximum allowed by every pair (s, t) ending at it with omega1 <= L and
/// C omega1^{1/kappa} < 1, starting from G_0. Used to stress the bound with
/// inputs that saturate the hypothesis.
inline std::vector<double> saturating_gronwall_path(const Control& omega1, const Control& omega2, double C, double L,
                                                    double kappa, double G0) {
    const std::size_t n = omega1.size();
    std::vector<double> G(n, G0);
    for (std::size_t t = 1; t < n; ++t) {
        double next = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < t; ++s) {
            const double w1 = omega1(s, t);
            if (w1 > L) {
                continue;
            }
            const double slack = 1.0 - C * std::pow(w1, 1.0 / kappa);
            if (slack <= 0.0) {
                continue;
            }
            next = std::min(next, (G[s] + omega2(s, t)) / slack);
        }
        if (!std::isfinite(next)) {
            throw ParameterError("saturating path unbounded: a grid step violates C omega1^{1/kappa} < 1");
        }
        G[t] = next;
    }
    return G;
}

} // namespace roughgron

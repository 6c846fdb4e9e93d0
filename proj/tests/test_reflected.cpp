#include "roughgron/oracles.hpp"
#include "roughgron/reflected.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace roughgron;

namespace {

RoughPath affine_driver(std::size_t steps, double rate, double horizon = 1.0) {
    const std::vector<double> t = uniform_grid(steps, horizon);
    std::vector<double> x(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        x[k] = rate * t[k];
    }
    return lift_piecewise_linear(SampledPath(t, x, 1), 2.5);
}

} // namespace

TEST(Skorokhod, LinearDescent) {
    const std::vector<double> t = uniform_grid(20, 1.0);
    std::vector<double> xi(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        xi[k] = 1.0 - 2.0 * t[k];
    }
    const auto r = skorokhod_map_1d(xi);
    for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_NEAR(r.m[k], std::max(2.0 * t[k] - 1.0, 0.0), 1e-15);
        EXPECT_NEAR(r.y[k], oracles::reflected_affine(1.0, 1.0, 2.0, t[k]), 1e-15);
    }
}

TEST(Skorokhod, PositivePathAndSineArch) {
    const std::vector<double> pos{0.5, 1.0, 0.2, 3.0};
    const auto r = skorokhod_map_1d(pos);
    EXPECT_EQ(r.y, pos);
    EXPECT_EQ(r.m, std::vector<double>(4, 0.0));

    const std::vector<double> t = uniform_grid(40, std::acos(-1.0) / 2.0);
    std::vector<double> xi(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        xi[k] = -std::sin(t[k]);
    }
    const auto s = skorokhod_map_1d(xi);
    for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_NEAR(s.y[k], 0.0, 1e-15);
        EXPECT_NEAR(s.m[k], std::sin(t[k]), 1e-15);
    }
    const std::vector<double> neg{-0.1, 1.0};
    EXPECT_THROW(skorokhod_map_1d(neg), DomainError);
}

TEST(Projection, NoDynamics) {
    const auto [path, rp] = brownian_sample_lift(2, 64, 1, 1.0, 2.5);
    const ReflectedSolution sol = solve_reflected_step2(fields::constant(0.0), rp, 0.7);
    for (std::size_t k = 0; k < sol.y.size(); ++k) {
        EXPECT_EQ(sol.y[k], 0.7);
        EXPECT_EQ(sol.m[k], 0.0);
    }
}

TEST(Projection, IncreasingDriverNeverReflects) {
    const RoughPath rp = affine_driver(50, 1.5);
    const ReflectedSolution sol = solve_reflected_step2(fields::constant(1.0), rp, 0.2);
    const RDESolution free = solve_step2(fields::constant(1.0), rp, Eigen::VectorXd::Constant(1, 0.2));
    for (std::size_t k = 0; k < sol.y.size(); ++k) {
        EXPECT_EQ(sol.y[k], free.y[k][0]);
        EXPECT_EQ(sol.m[k], 0.0);
    }
}

TEST(Projection, AffineOracleAndInvariants) {
    for (std::size_t n : {30u, 60u, 120u}) {
        const RoughPath rp = affine_driver(n, -2.0);
        const ReflectedSolution sol = solve_reflected_step2(fields::constant(1.0), rp, 1.0);
        const double h = 1.0 / static_cast<double>(n);
        EXPECT_EQ(sol.m.front(), 0.0);
        for (std::size_t k = 0; k < sol.y.size(); ++k) {
            EXPECT_GE(sol.y[k], -1e-12);
            EXPECT_NEAR(sol.y[k], oracles::reflected_affine(1.0, 1.0, 2.0, sol.times[k]), 1e-12);
            if (k > 0) {
                EXPECT_GE(sol.m[k] - sol.m[k - 1], -1e-12);
            }
        }
        EXPECT_NEAR(sol.m.back(), 1.0, 1e-12);
        EXPECT_LE(complementarity_defect(sol), h * (sol.m.back() - sol.m.front()) + 1e-15);
        for (std::size_t k = 0; k + 1 < sol.y.size(); ++k) {
            EXPECT_NEAR(reflected_remainder(sol, fields::constant(1.0), rp, k, k + 1), 0.0, 1e-14);
        }
    }
}

TEST(Complementarity, ZeroMeasureAndInjectedViolation) {
    ReflectedSolution sol;
    sol.y = {1.0, 1.0, 1.0};
    sol.m = {0.0, 0.0, 0.0};
    EXPECT_EQ(complementarity_defect(sol), 0.0);
    sol.m = {0.0, 0.25, 0.25};
    EXPECT_EQ(complementarity_defect(sol), 0.25);
}

TEST(Penalized, Examples) {
    const auto [path, rp] = brownian_sample_lift(4, 64, 1, 1.0, 2.5);
    const PenalizedSolution still = solve_reflected_penalized(fields::constant(0.0), rp, 0.3, {}, 0.1);
    for (double y : still.y) {
        EXPECT_EQ(y, 0.3);
    }
    const VectorField vf = fields::sine();
    const PenalizedSolution inert = solve_reflected_penalized(vf, rp, 1.0, {}, 1e6);
    const RDESolution free = solve_step2(vf, rp, Eigen::VectorXd::Constant(1, 1.0));
    for (std::size_t k = 0; k < inert.y.size(); ++k) {
        ASSERT_GT(free.y[k][0], 0.0);
        EXPECT_EQ(inert.y[k], free.y[k][0]);
        EXPECT_EQ(inert.m[k], 0.0);
    }
    EXPECT_FALSE(inert.stability_warning);
    EXPECT_TRUE(solve_reflected_penalized(vf, rp, 1.0, {}, 1e-3).stability_warning);
    EXPECT_THROW(solve_reflected_penalized(vf, rp, 1.0, {}, 0.0), ParameterError);
}

TEST(Penalized, ApproachesOracleAlongSqrtH) {
    double prev = 1e9;
    for (std::size_t n : {64u, 256u, 1024u, 4096u}) {
        const RoughPath rp = affine_driver(n, -2.0);
        const double h = 1.0 / static_cast<double>(n);
        const PenalizedSolution sol = solve_reflected_penalized(fields::constant(1.0), rp, 1.0, {}, std::sqrt(h));
        double err = 0.0;
        for (std::size_t k = 0; k < sol.y.size(); ++k) {
            err = std::max(err, std::abs(sol.y[k] - oracles::reflected_affine(1.0, 1.0, 2.0, sol.times[k])));
            if (k > 0) {
                EXPECT_GE(sol.m[k], sol.m[k - 1]);
            }
        }
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 0.05);
}

TEST(Probe, NoDynamicsGivesZero) {
    const auto [path, rp] = brownian_sample_lift(1, 64, 1, 1.0, 2.5);
    const std::vector<std::size_t> strides{8, 4, 2, 1};
    for (const auto& row : uniqueness_probe(fields::constant(0.0), rp, 0.5, strides)) {
        EXPECT_EQ(row.sup_distance, 0.0);
    }
}

TEST(Probe, AffineDistancesShrink) {
    const RoughPath rp = affine_driver(1024, -2.0, 1.0);
    const std::vector<std::size_t> strides{64, 32, 16, 8, 4, 2, 1};
    const auto rows = uniqueness_probe(fields::constant(1.0), rp, 1.0, strides);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        EXPECT_LT(rows[k].sup_distance, rows[k - 1].sup_distance);
        EXPECT_DOUBLE_EQ(rows[k].h, rows[k - 1].h / 2.0);
    }
    // empirical order between 0.5 and 1
    const double order = std::log2(rows.front().sup_distance / rows.back().sup_distance) / 6.0;
    EXPECT_GT(order, 0.45);
    EXPECT_LT(order, 1.05);
}

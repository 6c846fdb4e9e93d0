#include "roughgron/oracles.hpp"
#include "roughgron/rng.hpp"
#include "roughgron/rough_core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace roughgron;

namespace {

SampledPath random_path(std::uint64_t seed, std::size_t n, std::size_t dim, double scale) {
    GaussianStream g(seed);
    std::vector<double> v(n * dim, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t c = 0; c < dim; ++c) {
            v[k * dim + c] = v[(k - 1) * dim + c] + scale * g.normal();
        }
    }
    return SampledPath(uniform_grid(n - 1, 1.0), std::move(v), dim);
}

RoughPath pure_area(std::size_t n) {
    // X1 = 0, X2_st = a (t - s) with a antisymmetric
    const std::vector<double> t = uniform_grid(n - 1, 1.0);
    std::vector<double> p1(n * 2, 0.0), p2(n * 4, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        p2[k * 4 + 1] = 3.0 * t[k];
        p2[k * 4 + 2] = -3.0 * t[k];
    }
    return RoughPath::from_prefix(t, 2, 2.5, p1, p2);
}

} // namespace

TEST(SampledPath, RejectsInvalidGrids) {
    EXPECT_THROW(SampledPath({0.0}, {1.0}, 1), ParameterError);
    EXPECT_THROW(SampledPath({0.0, 0.0}, {1.0, 2.0}, 1), ParameterError);
    EXPECT_THROW(SampledPath({0.0, 1.0}, {1.0}, 1), ParameterError);
    EXPECT_THROW(SampledPath({0.0, 1.0}, {1.0, NAN}, 1), ParameterError);
}

TEST(DeltaPath, Examples) {
    const SampledPath id({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, 1);
    EXPECT_EQ(delta_path(id, 0.0, 1.0).value[0], 1.0);
    const SampledPath constant({0.0, 0.5, 1.0}, {2.0, 2.0, 2.0}, 1);
    EXPECT_EQ(delta_path(constant, 0.0, 0.5).value[0], 0.0);
    EXPECT_EQ(delta_path(constant, 0.5, 1.0).value[0], 0.0);
    const SampledPath tent({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}, 1);
    EXPECT_EQ(delta_path(tent, 0.0, 1.0).value[0], 0.0);
    EXPECT_THROW(delta_path(tent, 0.0, 0.3), DomainError);
}

TEST(Delta2Index, Examples) {
    auto square = [](double s, double t) { return (t - s) * (t - s); };
    EXPECT_NEAR(delta_2index(square, 0.1, 0.4, 0.9), 2.0 * 0.3 * 0.5, 1e-15);
    auto zero = [](double, double) { return 0.0; };
    EXPECT_EQ(delta_2index(zero, 0.0, 0.5, 1.0), 0.0);
    auto h = [](double t) { return std::sin(3.0 * t); };
    auto dh = [&](double s, double t) { return h(t) - h(s); };
    EXPECT_NEAR(delta_2index(dh, 0.2, 0.3, 0.8), 0.0, 1e-15);
    EXPECT_THROW(delta_2index(zero, 0.5, 0.2, 1.0), DomainError);
}

TEST(Lift, SingleSegmentIdentity) {
    const RoughPath rp = lift_piecewise_linear(SampledPath({0.0, 1.0}, {0.0, 1.0}, 1), 2.5);
    EXPECT_EQ(rp.level1(0, 1, 0), 1.0);
    EXPECT_EQ(rp.level2(0, 1, 0, 0), 0.5);
}

TEST(Lift, TwoSegmentsCorner) {
    const RoughPath rp = lift_piecewise_linear(SampledPath({0.0, 1.0, 2.0}, {0.0, 0.0, 1.0, 0.0, 1.0, 1.0}, 2), 2.5);
    const Eigen::MatrixXd x2 = rp.level2(0, 2);
    EXPECT_NEAR(x2(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(x2(0, 1), 1.0, 1e-15);
    EXPECT_NEAR(x2(1, 0), 0.0, 1e-15);
    EXPECT_NEAR(x2(1, 1), 0.5, 1e-15);
}

TEST(Lift, ParabolaAreaConverges) {
    double prev = 1.0;
    for (std::size_t n : {16u, 64u, 256u, 1024u}) {
        const auto path = SampledPath::from_function(uniform_grid(n, 1.0), 2, [](double t, std::span<double> out) {
            out[0] = t;
            out[1] = t * t;
        });
        const RoughPath rp = lift_piecewise_linear(path, 2.5);
        const double err = std::abs(rp.level2(0, n, 0, 1) - 2.0 / 3.0) + std::abs(rp.level2(0, n, 1, 0) - 1.0 / 3.0);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-6);
}

TEST(Lift, MatchesDirectDoubleSum) {
    const SampledPath x = random_path(11, 30, 3, 0.4);
    const RoughPath rp = lift_piecewise_linear(x, 2.3);
    for (auto [i, j] : {std::pair{0u, 29u}, std::pair{3u, 17u}, std::pair{10u, 11u}, std::pair{5u, 5u}}) {
        const Eigen::MatrixXd oracle = oracles::piecewise_linear_area(x.values(), 3, i, j);
        EXPECT_LT((rp.level2(i, j) - oracle).norm(), 1e-13 * (1.0 + oracle.norm())) << i << "," << j;
    }
}

TEST(Lift, RejectsExponentOutsideRange) {
    const SampledPath x({0.0, 1.0}, {0.0, 1.0}, 1);
    EXPECT_THROW(lift_piecewise_linear(x, 3.0), ParameterError);
    EXPECT_THROW(lift_piecewise_linear(x, 1.9), ParameterError);
}

TEST(Lift, InvariantsOnEveryTriple) {
    for (std::size_t dim : {1u, 2u, 3u}) {
        const RoughPath rp = lift_piecewise_linear(random_path(20 + dim, 40, dim, 1.0), 2.5);
        for (std::size_t s = 0; s < rp.size(); ++s) {
            for (std::size_t t = s; t < rp.size(); ++t) {
                EXPECT_LE(geometricity_defect_at(rp, s, t), 1e-12 * geometricity_scale(rp, s, t));
                for (std::size_t u = s; u <= t; u += 3) {
                    EXPECT_LE(chen_defect_at(rp, s, u, t), 1e-12 * chen_scale(rp, s, u, t));
                    const double add = (rp.level1(s, t) - rp.level1(s, u) - rp.level1(u, t)).norm();
                    EXPECT_LE(add, 1e-13 * (1.0 + rp.level1(s, t).norm()));
                }
            }
        }
    }
}

TEST(Lift, RefinementByMidpointsKeepsSignature) {
    const SampledPath coarse = random_path(5, 33, 2, 0.7);
    std::vector<double> t, v;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        t.push_back(coarse.times()[k]);
        v.insert(v.end(), coarse.value(k).begin(), coarse.value(k).end());
        if (k + 1 < coarse.size()) {
            t.push_back(0.5 * (coarse.times()[k] + coarse.times()[k + 1]));
            for (std::size_t c = 0; c < 2; ++c) {
                v.push_back(0.5 * (coarse(k, c) + coarse(k + 1, c)));
            }
        }
    }
    const RoughPath a = lift_piecewise_linear(coarse, 2.5);
    const RoughPath b = lift_piecewise_linear(SampledPath(t, v, 2), 2.5);
    for (std::size_t i = 0; i < coarse.size(); i += 4) {
        for (std::size_t j = i; j < coarse.size(); j += 5) {
            EXPECT_LT((a.level1(i, j) - b.level1(2 * i, 2 * j)).norm(), 1e-12);
            EXPECT_LT((a.level2(i, j) - b.level2(2 * i, 2 * j)).norm(), 1e-12);
        }
    }
}

TEST(Lift, RestrictKeepsPairs) {
    const RoughPath rp = lift_piecewise_linear(random_path(8, 21, 2, 1.0), 2.5);
    const std::vector<std::size_t> idx{2, 5, 11, 20};
    const RoughPath sub = rp.restrict(idx);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = i; j < idx.size(); ++j) {
            EXPECT_LT((sub.level2(i, j) - rp.level2(idx[i], idx[j])).norm(), 1e-13);
        }
    }
    const std::vector<std::size_t> bad{3, 3};
    EXPECT_THROW(rp.restrict(bad), DomainError);
}

TEST(Brownian, DeterministicAndGeometricInOneDimension) {
    const auto [pa, a] = brownian_sample_lift(42, 100, 1, 2.0, 2.5);
    const auto [pb, b] = brownian_sample_lift(42, 100, 1, 2.0, 2.5);
    ASSERT_EQ(pa.values().size(), pb.values().size());
    for (std::size_t k = 0; k < pa.values().size(); ++k) {
        EXPECT_EQ(pa.values()[k], pb.values()[k]);
    }
    for (std::size_t j = 1; j < a.size(); j += 7) {
        EXPECT_EQ(a.level2(0, j, 0, 0), b.level2(0, j, 0, 0));
        const double x1 = a.level1(3, j, 0);
        EXPECT_NEAR(a.level2(3, j, 0, 0), 0.5 * x1 * x1, 1e-14 * (1.0 + x1 * x1));
    }
    EXPECT_EQ(pa.times().back(), 2.0);
    EXPECT_THROW(brownian_sample_lift(1, 1, 1, 1.0, 2.5), ParameterError);
}

TEST(Brownian, EndpointMeanAndVarianceMonteCarlo) {
    const std::size_t runs = 10000;
    double sum = 0.0, sq = 0.0;
    for (std::size_t s = 0; s < runs; ++s) {
        const double x = brownian_sample_lift(s, 4, 1, 1.5, 2.5).second.level1(0, 4, 0);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / runs;
    const double var = sq / runs - mean * mean;
    EXPECT_LT(std::abs(mean), 4.0 * std::sqrt(1.5 / runs));
    // variance of the sample variance of N(0, 1.5): 2 * 1.5^2 / runs
    EXPECT_LT(std::abs(var - 1.5), 4.0 * std::sqrt(2.0 * 1.5 * 1.5 / runs));
}

TEST(ChenDefect, PureAreaAndCorruption) {
    const RoughPath area = pure_area(6);
    EXPECT_EQ(chen_defect_at(area, 0, 2, 5), 0.0);
    EXPECT_NEAR(area.level2(1, 4, 0, 1), 3.0 * 0.6, 1e-15);
    EXPECT_EQ(geometricity_defect_at(area, 1, 4), 0.0);

    const RoughPath rp = lift_piecewise_linear(random_path(3, 6, 2, 1.0), 2.5);
    const FunctionalRoughPath bad(
        std::vector<double>(rp.times().begin(), rp.times().end()), 2, 2.5,
        [&](std::size_t i, std::size_t j) { return Eigen::VectorXd(rp.level1(i, j)); },
        [&](std::size_t i, std::size_t j) {
            Eigen::MatrixXd m = rp.level2(i, j);
            if (i == 1 && j == 4) {
                m(0, 1) += 1e-3;
            }
            return m;
        });
    EXPECT_NEAR(chen_defect_at(bad, 1, 2, 4), 1e-3, 1e-12);
    EXPECT_NEAR(chen_defect_at(bad, 0, 1, 4), 1e-3, 1e-12);
    EXPECT_LT(chen_defect_at(bad, 0, 2, 5), 1e-14);
    EXPECT_THROW(chen_defect_at(bad, 3, 1, 4), DomainError);
    EXPECT_THROW(chen_defect(rp, 0.0, 0.33, 1.0), DomainError);
}

TEST(GeometricityDefect, UnhalvedSquare) {
    const FunctionalRoughPath unhalved(
        {0.0, 1.0}, 1, 2.5, [](std::size_t i, std::size_t j) { return Eigen::VectorXd::Constant(1, j > i ? 1.0 : 0.0); },
        [](std::size_t i, std::size_t j) { return Eigen::MatrixXd::Constant(1, 1, j > i ? 1.0 : 0.0); });
    EXPECT_DOUBLE_EQ(geometricity_defect(unhalved, 0.0, 1.0), 0.5);
}

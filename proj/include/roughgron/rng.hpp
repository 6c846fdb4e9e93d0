#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace roughgron {

/// Seeded Gaussian source with a fully specified bit stream.
///
/// Uniforms come from std::mt19937_64 (whose output sequence is fixed by the
/// standard) as (x >> 11) * 2^-53; normals are produced in pairs by the
/// Box-Muller transform z0 = r cos(2 pi u2), z1 = r sin(2 pi u2) with
/// r = sqrt(-2 log(1 - u1)). std::normal_distribution is avoided because its
/// algorithm differs between standard libraries.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace roughgron

#pragma once

#include <cstdint>
#include <random>

#include "finsler/geometry.hpp"

namespace finsler {

/// Deterministic random source. Uniform/normal variates are derived from the
/// raw mt19937_64 stream by fixed formulas so that sample plans reproduce
/// bit-for-bit across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal();

    /// Uniform point on the unit sphere in R^dim.
    RealVector sphere(int dim);

    /// Uniform point in the complex n-ball of the given radius.
    ComplexVector complex_ball(int n, double radius);

    /// Independent uniform draws from n disks of the given radius.
    ComplexVector complex_polydisk(int n, double radius);

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace finsler

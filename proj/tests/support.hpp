#pragma once

// Hand-rolled generators for the property tests. Fixed seeds keep every run
// reproducible.

#include <complex>
#include <random>

#include "rotlab/hyperbolic.hpp"

namespace testgen {

using namespace rotlab::hyp;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    // point at hyperbolic distance <= maxRadius from 0
    DiskPoint<double> point(double maxRadius = 4.0) {
        return DiskPoint<double>::from_polar(uniform(0, 2 * kPi<double>), uniform(0, maxRadius));
    }

    BoundaryPoint<double> boundary() { return BoundaryPoint<double>(uniform(0, 2 * kPi<double>)); }

    Isometry<double> isometry(double maxShift = 3.0) {
        return Isometry<double>::rotation(uniform(0, 2 * kPi<double>)) * Isometry<double>::translation(uniform(-maxShift, maxShift)) *
               Isometry<double>::rotation(uniform(0, 2 * kPi<double>));
    }

    Geodesic<double> geodesic() {
        const double a = uniform(0, 2 * kPi<double>);
        return Geodesic<double>::from_endpoints(BoundaryPoint<double>(a), BoundaryPoint<double>(a + uniform(0.2, 2 * kPi<double> - 0.2)));
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

} // namespace testgen

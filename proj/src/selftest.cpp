#include "rotlab/selftest.hpp"

#include <algorithm>
#include <random>

#include "rotlab/hyperbolic.hpp"

namespace rotlab {

using namespace hyp;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

} // namespace

GeometrySelftest run_geometry_selftest(std::size_t trials, std::uint64_t seed) {
    using P = DiskPoint<double>;
    std::mt19937_64 rng(seed);
    const auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    const auto point = [&](double maxRadius) { return P::from_polar(uniform(0, 2 * kPi<double>), uniform(0, maxRadius)); };

    GeometrySelftest out;
    out.trials = trials;
    for (std::size_t i = 0; i < trials; ++i) {
        // right triangle: foot of the perpendicular, origin of the geodesic, point
        const double a = uniform(0, 2 * kPi<double>);
        const auto g = Geodesic<double>::from_endpoints(BoundaryPoint<double>(a), BoundaryPoint<double>(a + uniform(0.2, 2 * kPi<double> - 0.2)));
        const double t = uniform(-4, 4), r = uniform(-4, 4);
        const double d = distance(g.origin(), g.from_fermi(t, r));
        const double py = rel_err(std::cosh(d), std::cosh(t) * std::cosh(r));
        out.pythagoras_max = std::max(out.pythagoras_max, py);
        out.rows.push_back({"pythagoras", i, py});

        // law of sines on a random triangle, skipping the degenerate ones
        const P x = point(3), y = point(3), z = point(3);
        const double xy = distance(x, y), yz = distance(y, z), zx = distance(z, x);
        const double X = vertex_angle(x, y, z), Y = vertex_angle(y, z, x), Z = vertex_angle(z, x, y);
        if (std::min({xy, yz, zx}) >= 1e-2 && std::min({X, Y, Z}) >= 1e-3) {
            const double rx = std::sinh(yz) / std::sin(X), ry = std::sinh(zx) / std::sin(Y), rz = std::sinh(xy) / std::sin(Z);
            const double s = std::max(rel_err(rx, ry), rel_err(ry, rz));
            out.sines_max = std::max(out.sines_max, s);
            out.rows.push_back({"sines", i, s});
        }

        const BoundaryPoint<double> xi(uniform(0, 2 * kPi<double>));
        const double excess = std::abs(busemann(xi, x) - busemann(xi, y)) - distance(x, y);
        if (excess > 1e-12) ++out.busemann_violations;
        out.rows.push_back({"busemann", i, std::max(excess, 0.0)});
    }
    return out;
}

} // namespace rotlab

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rotlab {

// Random-triangle checks of the disk model: hyperbolic Pythagoras in Fermi
// coordinates, the law of sines, and the 1-Lipschitz bound of Busemann
// functions.
struct IdentityResidual {
    std::string identity;  // "pythagoras", "sines" or "busemann"
    std::size_t trial;
    double residual;
};

struct GeometrySelftest {
    std::size_t trials = 0;
    double pythagoras_max = 0;  // relative error of cosh d = cosh t cosh r
    double sines_max = 0;       // relative spread of sinh(side) / sin(angle)
    int busemann_violations = 0;
    std::vector<IdentityResidual> rows;

    static constexpr double kPythagorasTol = 1e-9;
    static constexpr double kSinesTol = 1e-8;

    bool pass() const { return pythagoras_max <= kPythagorasTol && sines_max <= kSinesTol && busemann_violations == 0; }
};

GeometrySelftest run_geometry_selftest(std::size_t trials = 10000, std::uint64_t seed = 1);

} // namespace rotlab

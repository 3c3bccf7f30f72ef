#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace rotlab {

// A point of the flat torus R^2 / Z^2 together with a lift to the plane.
struct TorusPoint {
    double x = 0, y = 0;          // in [0, 1)
    double liftX = 0, liftY = 0;

    static TorusPoint from_lift(double X, double Y);
};

// V = (X, Y) with
//   X = alpha (1 - cos 2pi(x - y)) + (1 - alpha)(1 - cos 2pi y)
//   Y = alpha (1 - cos 2pi(x - y))
// a divergence-free field whose only zero is the origin.
struct OxtobyField {
    double alpha = (std::sqrt(5.0) - 1) / 2;

    std::pair<double, double> eval(double x, double y) const;
    std::pair<double, double> eval(const TorusPoint& p) const { return eval(p.liftX, p.liftY); }
    // X_x + Y_y, analytically
    double divergence(double x, double y) const;
};

struct RunningEstimate {
    double time;
    double v1, v2;
};

struct TorusRotation {
    double v1 = 0, v2 = 0;
    TorusPoint end;
    std::vector<RunningEstimate> series;  // one entry per unit of time
    // largest deviation of the running slope from its final value over the
    // last tenth of the time
    double tail_spread = 0;

    double slope() const { return v2 / v1; }
};

TorusPoint flow_step(const OxtobyField& F, const TorusPoint& p, double h);

TorusRotation torus_rotation_vector(const OxtobyField& F, const TorusPoint& seed, double T, double h = 1e-3);

struct CuttingSequence {
    std::string word;  // 'b' at crossings of vertical grid lines, 'a' at horizontal
    double b_density = 0;
};

// Symbols of the grid lines met by the ray of the given slope from start.
// A lattice point counts as a vertical then a horizontal crossing.
CuttingSequence cutting_sequence(double slope, std::size_t length, const TorusPoint& start = {});

// largest difference in b-counts among factors of the given length
int balance_defect(const std::string& word, std::size_t factorLength);

} // namespace rotlab

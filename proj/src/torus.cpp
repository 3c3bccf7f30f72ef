#include "rotlab/torus.hpp"

#include <algorithm>
#include <numbers>

#include "rotlab/error.hpp"

namespace rotlab {

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;

double frac(double v) {
    const double f = v - std::floor(v);
    return f >= 1 ? 0 : f;
}
} // namespace

TorusPoint TorusPoint::from_lift(double X, double Y) { return {frac(X), frac(Y), X, Y}; }

std::pair<double, double> OxtobyField::eval(double x, double y) const {
    const double u = 1 - std::cos(kTwoPi * (x - y));
    const double w = 1 - std::cos(kTwoPi * y);
    return {alpha * u + (1 - alpha) * w, alpha * u};
}

double OxtobyField::divergence(double x, double y) const {
    const double s = std::sin(kTwoPi * (x - y));
    return alpha * kTwoPi * s - alpha * kTwoPi * s;
}

TorusPoint flow_step(const OxtobyField& F, const TorusPoint& p, double h) {
    const double x = p.liftX, y = p.liftY;
    const auto [k1x, k1y] = F.eval(x, y);
    const auto [k2x, k2y] = F.eval(x + h / 2 * k1x, y + h / 2 * k1y);
    const auto [k3x, k3y] = F.eval(x + h / 2 * k2x, y + h / 2 * k2y);
    const auto [k4x, k4y] = F.eval(x + h * k3x, y + h * k3y);
    const double X = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
    const double Y = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    if (!std::isfinite(X) || !std::isfinite(Y)) throw Error(ErrorCode::StepBlowup, "torus flow left the finite range");
    return TorusPoint::from_lift(X, Y);
}

TorusRotation torus_rotation_vector(const OxtobyField& F, const TorusPoint& seed, double T, double h) {
    if (!(T > 0) || !(h > 0) || T / h > 1e8) throw Error(ErrorCode::ConfigInvalid, "torus integration needs 0 < T/h <= 1e8");
    const auto steps = static_cast<std::size_t>(std::llround(T / h));
    const std::size_t perUnit = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1 / h)));
    TorusRotation out;
    TorusPoint p = seed;
    for (std::size_t i = 1; i <= steps; ++i) {
        p = flow_step(F, p, h);
        if (i % perUnit == 0 || i == steps) {
            const double t = i * h;
            out.series.push_back({t, (p.liftX - seed.liftX) / t, (p.liftY - seed.liftY) / t});
        }
    }
    out.end = p;
    out.v1 = (p.liftX - seed.liftX) / T;
    out.v2 = (p.liftY - seed.liftY) / T;
    for (const auto& e : out.series) {
        if (e.time >= 0.9 * T && e.v1 != 0) out.tail_spread = std::max(out.tail_spread, std::abs(e.v2 / e.v1 - out.slope()));
    }
    return out;
}

CuttingSequence cutting_sequence(double slope, std::size_t length, const TorusPoint& start) {
    if (!std::isfinite(slope) || slope <= 0) throw Error(ErrorCode::DegenerateSlope, "cutting sequences need a finite positive slope");
    // the i-th vertical line after start and the j-th horizontal one are at
    // x = x0 + i + 1 - frac(x0) and x = x0 + (j + 1 - frac(y0)) / slope;
    // both are computed from the index so rounding does not accumulate
    const double fx = start.x, fy = start.y;
    CuttingSequence out;
    out.word.reserve(length);
    std::size_t i = 0, j = 0, b = 0;
    while (out.word.size() < length) {
        const double vx = static_cast<double>(i) + 1 - fx;
        const double hx = (static_cast<double>(j) + 1 - fy) / slope;
        if (vx <= hx) {
            out.word.push_back('b');
            ++b;
            ++i;
            if (vx == hx && out.word.size() < length) {
                out.word.push_back('a');
                ++j;
            } else if (vx == hx) {
                ++j;
            }
        } else {
            out.word.push_back('a');
            ++j;
        }
    }
    out.b_density = length ? static_cast<double>(b) / static_cast<double>(length) : 0;
    return out;
}

int balance_defect(const std::string& word, std::size_t factorLength) {
    if (factorLength == 0 || factorLength > word.size()) return 0;
    long count = std::count(word.begin(), word.begin() + static_cast<long>(factorLength), 'b');
    long lo = count, hi = count;
    for (std::size_t k = factorLength; k < word.size(); ++k) {
        count += (word[k] == 'b') - (word[k - factorLength] == 'b');
        lo = std::min(lo, count);
        hi = std::max(hi, count);
    }
    return static_cast<int>(hi - lo);
}

} // namespace rotlab

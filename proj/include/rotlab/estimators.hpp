#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "rotlab/dynamics.hpp"

namespace rotlab {

// One direction of a sampled orbit. points[n] lies in the fundamental domain
// and the lift of the n-th iterate is accumulated[n] . points[n]; the deck
// word of step n satisfies f(points[n]) = words[n] . points[n+1].
struct OrbitBranch {
    std::vector<Point> points;
    std::vector<Word> words;
    std::vector<Iso> accumulated;
    std::vector<double> L;
    std::vector<long long> homology;  // flattened partial sums, (steps + 1) x 2g

    std::size_t steps() const { return words.size(); }
    bool empty() const { return points.empty(); }
};

struct OrbitRecord {
    const SurfaceGroup* group = nullptr;
    Point seed;
    int genus = 0;
    OrbitBranch forward;
    OrbitBranch backward;  // iterates of the inverse, when requested

    std::size_t N() const { return forward.steps(); }
    HomologyVector homology_at(std::size_t n, bool backward_branch = false) const;
    // lift of the n-th iterate
    Lifted lift(std::size_t n, bool backward_branch = false) const;
};

struct OrbitOptions {
    bool backward = false;
    // reduce to the Dirichlet domain about another center
    const CenteredDomain* domain = nullptr;
};

OrbitRecord run_orbit(const Dynamics& f, const Point& seed, std::size_t N, const OrbitOptions& options = {});

inline constexpr double kSpeedFloor = 1e-3;
inline constexpr double kGapFloor = 1e-2;

struct SpeedEstimate {
    double forward = 0;
    double backward = 0;
    std::vector<double> series;  // L_n / n, entry 0 unused
    double tail_spread = 0;      // spread of L_n / n over the last decade
    double max_step = 0;         // largest one-step displacement
    int subadditivity_violations = 0;
};

SpeedEstimate rotation_speed(const OrbitRecord& rec);

struct BoundaryLimits {
    Boundary alpha;
    Boundary omega;
    double convergence_gap = 0;
    std::vector<double> directions;  // angle of the n-th forward lift
};

BoundaryLimits boundary_limits(const OrbitRecord& rec, double speedFloor = kSpeedFloor);

// Unresolved: the endpoint estimates are still moving by more than the gap
// floor, typically a slow orbit whose lifts have not travelled far yet.
enum class TrackingStatus { Tracked, NoSpeed, CoincidentLimits, Unresolved };
std::string status_name(TrackingStatus s);

struct TrackingEstimate {
    TrackingStatus status = TrackingStatus::NoSpeed;
    double theta_forward = 0;
    double theta_backward = 0;
    Boundary alpha;
    Boundary omega;
    Geodesic geodesic;  // origin at the foot of the seed
    // Drift of the endpoint directions over the last decade, extrapolated as
    // a geometric tail: drift / (1 - e^{-dL}) with dL the distance gained.
    double endpoint_uncertainty = 0;
    // (1/n) d(f^n x, gamma(n theta)); entry 0 unused
    std::vector<double> residuals;
    // Per iterate n, the estimated geodesic seen from the frame of points[n]:
    // its endpoints, the signed distance of points[n] to it, and the arclength
    // T_n of the foot of f^n x from the origin.
    std::vector<double> frame_alpha;
    std::vector<double> frame_omega;
    std::vector<double> frame_r;
    std::vector<double> T;
};

TrackingEstimate tracking_geodesic(const OrbitRecord& rec, double speedFloor = kSpeedFloor, double gapFloor = kGapFloor);

struct HomologyRotation {
    HomologyVector vector;
    std::vector<std::vector<double>> partials;  // running averages, sampled
};

HomologyRotation homology_rotation(const OrbitRecord& rec, std::size_t samples = 200);

struct TimeCocycle {
    double mean = 0;
    std::vector<double> increments;
};

TimeCocycle time_cocycle_mean(const OrbitRecord& rec, const TrackingEstimate& est);

struct GridSpec {
    int cells = 32;    // per side of the square around the domain
    int sectors = 24;  // tangent directions
    double spacing = 0.02;  // arclength between samples of the geodesic
};

struct EmpiricalMeasure {
    std::map<std::tuple<int, int, int>, double> bins;
    double total() const;
};

double total_variation(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// bin of a unit tangent vector at a point of the domain
std::tuple<int, int, int> measure_bin(const SurfaceGroup& G, const GridSpec& grid, const Point& p, double angle);

EmpiricalMeasure equidistribute(const SurfaceGroup& G, const OrbitRecord& rec, const TrackingEstimate& est, const GridSpec& grid = {});

// mean over the last decade of n against the first, for sublinear trends
struct DecadeTrend {
    double first = 0;
    double last = 0;
    bool decreasing = false;
};

DecadeTrend decade_trend(const std::vector<double>& series);

} // namespace rotlab

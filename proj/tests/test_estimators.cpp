#include <doctest.h>

#include <set>

#include "rotlab/estimators.hpp"
#include "support.hpp"

using namespace rotlab;
using hyp::kPi;

namespace {

const SurfaceGroup& genus2() {
    static const SurfaceGroup G = build_group(2);
    return G;
}

const Scenario& single_push() {
    static const Scenario s = make_scenario("single-push", genus2());
    return s;
}

const Dynamics& single_push_map() {
    static const Dynamics f = single_push().build(genus2());
    return f;
}

const Dynamics& identity_map() {
    static const Dynamics f(genus2(), {EquivariantMap(genus2(), {})});
    return f;
}

const OrbitRecord& core_orbit() {
    static const OrbitRecord rec = run_orbit(single_push_map(), single_push().samples[0].seed, 2000, {true, nullptr});
    return rec;
}

const OrbitRecord& offset_orbit() {
    static const OrbitRecord rec = run_orbit(single_push_map(), single_push().samples[1].seed, 10000, {true, nullptr});
    return rec;
}

double norm(const HomologyVector& v) {
    double s = 0;
    for (const auto& c : v.coords()) s += std::pow(c.convert_to<double>(), 2);
    return std::sqrt(s);
}

double step_length() { return single_push().maps[0][0].speed; }

} // namespace

TEST_CASE("identity dynamics") {
    const OrbitRecord rec = run_orbit(identity_map(), Point(0.2, -0.1), 200, {true, nullptr});
    for (double L : rec.forward.L) CHECK(L == 0);
    const SpeedEstimate s = rotation_speed(rec);
    CHECK(s.forward == 0);
    CHECK(s.backward == 0);
    CHECK_THROWS_AS(boundary_limits(rec), Error);
    CHECK(tracking_geodesic(rec).status == TrackingStatus::NoSpeed);
    CHECK(homology_rotation(rec).vector.is_zero());
}

TEST_CASE("a seed outside every band is a fixed point") {
    const OrbitRecord rec = run_orbit(single_push_map(), Point(), 300, {false, nullptr});
    for (double L : rec.forward.L) CHECK(L == 0);
    for (const Point& p : rec.forward.points) CHECK(p.z() == Point().z());
}

TEST_CASE("orbit record invariants") {
    const OrbitRecord& rec = core_orbit();
    CHECK(rec.forward.L[0] == 0);
    for (double L : rec.forward.L) CHECK(L >= 0);
    // the accumulated deck map reproduces directly iterated lifts
    Point raw = rec.seed;
    for (std::size_t n = 1; n <= 12; ++n) {
        raw = single_push_map()(raw);
        CHECK(hyp::distance(rec.forward.accumulated[n].apply(rec.forward.points[n]), raw) <= 1e-7);
    }
    CHECK_THROWS_AS(run_orbit(single_push_map(), rec.seed, 20000000), Error);
}

TEST_CASE("core orbit of the single push") {
    const OrbitRecord& rec = core_orbit();
    const double ell = step_length();
    for (std::size_t n = 0; n <= 100; ++n) CHECK(std::abs(rec.forward.L[n] - n * ell) <= 1e-4);

    const SpeedEstimate s = rotation_speed(rec);
    CHECK(s.forward == doctest::Approx(ell).epsilon(0.01));
    CHECK(s.backward == doctest::Approx(s.forward).epsilon(0.01));
    CHECK(s.subadditivity_violations == 0);

    const auto axis = hyp::axis_of(genus2().generator(1)).geodesic;
    const BoundaryLimits lim = boundary_limits(rec);
    CHECK(hyp::angular_distance(lim.alpha.theta(), axis.alpha().theta()) <= 1e-3);
    CHECK(hyp::angular_distance(lim.omega.theta(), axis.omega().theta()) <= 1e-3);

    // angular increments eventually sit below sinh(b) / sinh(a n); stored
    // angles resolve no better than a few ulps
    const double a = s.forward / 2, b = s.max_step;
    const double resolution = 8 * std::numeric_limits<double>::epsilon();
    int above = 0;
    for (std::size_t n = rec.N() / 10; n < rec.N(); ++n) {
        const double dtheta = hyp::angular_distance(lim.directions[n], lim.directions[n + 1]);
        if (std::sin(dtheta) > std::max(std::sinh(b) / std::sinh(a * n), resolution)) ++above;
    }
    CHECK(above == 0);

    const TrackingEstimate est = tracking_geodesic(rec);
    REQUIRE(est.status == TrackingStatus::Tracked);
    CHECK(hyp::angular_distance(est.alpha.theta(), axis.alpha().theta()) <= 1e-3);
    CHECK(hyp::angular_distance(est.omega.theta(), axis.omega().theta()) <= 1e-3);
    for (std::size_t n = 1; n < est.residuals.size(); ++n) CHECK(est.residuals[n] <= 1e-3);
    // the origin of the geodesic is the foot of the seed
    CHECK(std::abs(est.geodesic.fermi(rec.seed).t) <= 1e-9);

    const HomologyRotation h = homology_rotation(rec);
    CHECK(h.vector == HomologyVector::from_ints({1, 0, 0, 0}) / Rational(8));

    const TimeCocycle T = time_cocycle_mean(rec, est);
    CHECK(T.mean == doctest::Approx(s.forward).epsilon(1e-9));
    for (double dt : T.increments) CHECK(dt <= s.max_step + 1e-9);
}

TEST_CASE("offset orbit tracks the axis sublinearly") {
    const OrbitRecord& rec = offset_orbit();
    const SpeedEstimate s = rotation_speed(rec);
    const TrackingEstimate est = tracking_geodesic(rec);
    REQUIRE(est.status == TrackingStatus::Tracked);
    CHECK(est.residuals.back() <= 5e-2);
    CHECK(decade_trend(est.residuals).decreasing);
    const TimeCocycle T = time_cocycle_mean(rec, est);
    CHECK(std::abs(T.mean - s.forward) <= 0.02 * s.forward);
    for (double dt : T.increments) CHECK(dt <= s.max_step + 1e-9);
}

TEST_CASE("equidistribution") {
    const SurfaceGroup& G = genus2();
    const GridSpec grid;
    const TrackingEstimate core = tracking_geodesic(core_orbit());
    const EmpiricalMeasure m = equidistribute(G, core_orbit(), core, grid);
    CHECK(m.total() == doctest::Approx(1).epsilon(1e-12));
    for (const auto& [bin, mass] : m.bins) CHECK(mass >= 0);

    // bins met by the closed geodesic, sampled finely along the axis of a1
    const Geodesic axis = hyp::axis_of(G.generator(1)).geodesic;
    const double ell = G.generator(1).translation_length();
    std::set<std::tuple<int, int, int>> met;
    for (double t = 0; t < ell; t += 1e-4) {
        const Point z = axis.point_at(t);
        const Reduction r = reduce(G, z);
        const double angle = axis.tangent_angle(t) + std::arg(G.element(r.word).inverse().derivative(z.z()));
        met.insert(measure_bin(G, grid, r.p0, angle));
    }
    double off = 0;
    for (const auto& [bin, mass] : m.bins) {
        if (!met.count(bin)) off += mass;
    }
    CHECK(off < 1e-6);

    const TrackingEstimate offset = tracking_geodesic(offset_orbit());
    const EmpiricalMeasure m2 = equidistribute(G, offset_orbit(), offset, grid);
    CHECK(m2.total() == doctest::Approx(1).epsilon(1e-12));
    CHECK(total_variation(m, m2) <= 0.1);
    CHECK(total_variation(m, m) == 0);
}

TEST_CASE("total variation and trends") {
    EmpiricalMeasure a, b;
    a.bins[{0, 0, 0}] = 0.5;
    a.bins[{1, 0, 0}] = 0.5;
    b.bins[{1, 0, 0}] = 0.25;
    b.bins[{2, 0, 0}] = 0.75;
    CHECK(total_variation(a, b) == doctest::Approx(0.75));
    CHECK(total_variation(b, a) == doctest::Approx(0.75));

    std::vector<double> down(1001), up(1001);
    for (std::size_t n = 1; n <= 1000; ++n) {
        down[n] = 1.0 / n;
        up[n] = std::log(static_cast<double>(n));
    }
    CHECK(decade_trend(down).decreasing);
    CHECK_FALSE(decade_trend(up).decreasing);
}

TEST_CASE("homology of the trivial-homology push") {
    const Scenario s = make_scenario("trivial-homology-push", genus2());
    const Dynamics f = s.build(genus2());
    const OrbitRecord core = run_orbit(f, s.samples[0].seed, 800, {false, nullptr});
    CHECK(homology_rotation(core).vector.is_zero());
    const OrbitRecord offset = run_orbit(f, s.samples[1].seed, 2000, {false, nullptr});
    CHECK(norm(homology_rotation(offset).vector) <= 5e-2);
}

TEST_CASE("rotation vectors from two Dirichlet centers") {
    const SurfaceGroup& G = genus2();
    const CenteredDomain other(G, Point(0.15, -0.1));
    const Point seed = single_push().samples[1].seed;
    const OrbitRecord a = run_orbit(single_push_map(), seed, 2000, {false, nullptr});
    const OrbitRecord b = run_orbit(single_push_map(), seed, 2000, {false, &other});
    CHECK(norm(homology_rotation(a).vector - homology_rotation(b).vector) <= 1e-2);
    // Both records follow one orbit of the preferred lift. At step n they
    // differ by the deck map taking one domain representative to the other,
    // a bounded element, so the integer partial sums stay a bounded distance
    // apart (at most one face pairing on each side, plus the seed's word).
    const Word w = other.reduce(seed).word;
    long long worst = 0;
    for (std::size_t n = 0; n <= 2000; ++n) {
        const HomologyVector d = a.homology_at(n) - b.homology_at(n);
        for (const auto& c : d.coords()) worst = std::max(worst, abs(c).convert_to<long long>());
    }
    CHECK(worst <= 2 + static_cast<long long>(w.size()));
}

TEST_CASE("scale-factored lifts stay finite far out") {
    const SurfaceGroup& G = genus2();
    const Dynamics f(G, {EquivariantMap(G, {PushSpec{Word{1}, 0.5}})});
    const auto axis = hyp::axis_of(G.generator(1)).geodesic;
    Point seed;
    for (double t = -1.2; t <= 1.2; t += 0.01) {
        if (reduce(G, axis.point_at(t)).word.empty()) {
            seed = axis.point_at(t);
            break;
        }
    }
    // e^{L} overflows doubles near L = 709, that is n = 1420 at this speed
    const OrbitRecord rec = run_orbit(f, seed, 4000, {false, nullptr});
    const SpeedEstimate s = rotation_speed(rec);
    for (std::size_t n = 1; n <= rec.N(); ++n) {
        REQUIRE(std::isfinite(rec.forward.L[n]));
        CHECK(rec.forward.L[n] >= rec.forward.L[n - 1] - s.max_step);
    }
    CHECK(s.forward == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("speed is bounded below by the homology rotation") {
    const SurfaceGroup& G = genus2();
    double c = INFINITY;
    for (const std::string name : {"single-push", "disjoint-pushes", "criss-cross"}) {
        const Scenario s = make_scenario(name, G);
        const Dynamics f = s.build(G);
        for (const auto& sample : s.samples) {
            const OrbitRecord rec = run_orbit(f, sample.seed, 400, {false, nullptr});
            const double h = norm(homology_rotation(rec).vector);
            const double theta = rotation_speed(rec).forward;
            if (h > 0) c = std::min(c, theta / h);
            else CHECK(theta >= 0);
        }
    }
    CHECK(c > 0);
    CHECK(std::isfinite(c));
}

TEST_CASE("slow orbits stay unresolved until their endpoints settle") {
    const SurfaceGroup& G = genus2();
    const Dynamics f(G, {EquivariantMap(G, {PushSpec{Word{3}, 0.28}})});
    // near the edge of the band about the axis of a2: speed about 1e-3
    const double e = std::tanh(G.vertex_radius() / 2);
    const Point slow(-e / 4, -e / 4), fast(-e / 4, -e * 5 / 12);
    REQUIRE(reduce(G, slow).word.empty());
    REQUIRE(reduce(G, fast).word.empty());

    const TrackingEstimate early = tracking_geodesic(run_orbit(f, slow, 2000, {true, nullptr}));
    CHECK(early.theta_forward > kSpeedFloor);
    CHECK(early.status == TrackingStatus::Unresolved);
    CHECK(early.endpoint_uncertainty > kGapFloor);

    const TrackingEstimate late = tracking_geodesic(run_orbit(f, slow, 10000, {true, nullptr}));
    const TrackingEstimate ref = tracking_geodesic(run_orbit(f, fast, 2000, {true, nullptr}));
    REQUIRE(late.status == TrackingStatus::Tracked);
    REQUIRE(ref.status == TrackingStatus::Tracked);
    CHECK(ref.endpoint_uncertainty <= 1e-12);
    CHECK(hyp::angular_distance(late.alpha.theta(), ref.alpha.theta()) <= 1e-3);
    CHECK(hyp::angular_distance(late.omega.theta(), ref.omega.theta()) <= 1e-3);
}

#include "rotlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rotlab {

using hyp::kPi;

namespace {

// farther than this, a point is as good as its boundary direction
constexpr double kFarRadius = 30;

OrbitBranch run_branch(const Dynamics& f, const Point& p0, std::size_t N, bool forward, const CenteredDomain* domain) {
    const SurfaceGroup& G = f.group();
    const std::size_t dim = 2 * static_cast<std::size_t>(G.genus());
    OrbitBranch b;
    b.points.reserve(N + 1);
    b.words.reserve(N);
    b.accumulated.reserve(N + 1);
    b.L.reserve(N + 1);
    b.homology.assign((N + 1) * dim, 0);
    b.points.push_back(p0);
    b.accumulated.push_back(Iso());
    b.L.push_back(0);
    const Lifted base(p0);
    for (std::size_t n = 0; n < N; ++n) {
        Word a;
        Point next;
        try {
            const Lift l = forward ? f.forward(b.points[n]) : f.backward(b.points[n]);
            const Reduction r = domain ? domain->reduce(l.point) : reduce(G, l.point);
            a = l.word * r.word;
            next = r.p0;
        } catch (const Error& e) {
            throw Error(e.code(), std::string(forward ? "forward" : "backward") + " step " + std::to_string(n) + ": " + e.what());
        }
        const Iso acc = b.accumulated[n] * G.element(a);
        const auto counts = abelianize_counts(a, G.genus());
        for (std::size_t i = 0; i < dim; ++i) b.homology[(n + 1) * dim + i] = b.homology[n * dim + i] + counts[i];
        b.L.push_back(hyp::distance(base, acc.apply(Lifted(next))));
        b.points.push_back(next);
        b.words.push_back(std::move(a));
        b.accumulated.push_back(acc);
    }
    return b;
}

const OrbitBranch& branch(const OrbitRecord& rec, bool backward_branch) { return backward_branch ? rec.backward : rec.forward; }

// Endpoint reached from the frame of points[n] by the ray that the global
// estimate follows: from the far image of 0 through points[n].
Boundary exit_point(const Iso& acc, const Point& p) {
    const Lifted far = acc.inverse().apply(Lifted(Point()));
    const Lifted lp(p);
    const double d = hyp::distance(far, lp);
    if (d < 1e-9) throw Error(ErrorCode::NoEscape, "orbit did not leave its starting point");
    const hyp::Anchor<double> from = d > kFarRadius ? hyp::Anchor<double>(Boundary(far.direction())) : hyp::Anchor<double>(Point(far.z));
    return hyp::geodesic_of<double>(from, p).omega();
}

// cosh c = cosh a cosh b
double right_triangle_hypotenuse(double a, double b) {
    if (std::max(std::abs(a), std::abs(b)) > 20) return hyp::acosh_exp(hyp::log_cosh(a) + hyp::log_cosh(b));
    // cosh c - 1 written without cancellation
    const double sa = std::sinh(a / 2), sb = std::sinh(b / 2);
    const double half = sa * sa * std::cosh(b) + sb * sb;
    return 2 * std::asinh(std::sqrt(half));
}

} // namespace

HomologyVector OrbitRecord::homology_at(std::size_t n, bool backward_branch) const {
    const OrbitBranch& b = branch(*this, backward_branch);
    const std::size_t dim = 2 * static_cast<std::size_t>(genus);
    std::vector<long long> v(b.homology.begin() + static_cast<long>(n * dim), b.homology.begin() + static_cast<long>((n + 1) * dim));
    return HomologyVector::from_ints(v);
}

Lifted OrbitRecord::lift(std::size_t n, bool backward_branch) const {
    const OrbitBranch& b = branch(*this, backward_branch);
    return b.accumulated.at(n).apply(Lifted(b.points.at(n)));
}

OrbitRecord run_orbit(const Dynamics& f, const Point& seed, std::size_t N, const OrbitOptions& options) {
    if (N > 10000000) throw Error(ErrorCode::BudgetExceeded, "orbit length above 1e7");
    OrbitRecord rec;
    rec.group = &f.group();
    rec.genus = f.group().genus();
    rec.seed = options.domain ? options.domain->reduce(seed).p0 : reduce(f.group(), seed).p0;
    rec.forward = run_branch(f, rec.seed, N, true, options.domain);
    if (options.backward) rec.backward = run_branch(f, rec.seed, N, false, options.domain);
    return rec;
}

SpeedEstimate rotation_speed(const OrbitRecord& rec) {
    const std::size_t N = rec.N();
    if (N < 100) throw Error(ErrorCode::ConfigInvalid, "rotation speed needs at least 100 steps");
    const OrbitBranch& b = rec.forward;
    SpeedEstimate s;
    s.forward = b.L[N] / static_cast<double>(N);
    if (!rec.backward.empty() && rec.backward.steps() > 0) s.backward = rec.backward.L.back() / static_cast<double>(rec.backward.steps());
    s.series.assign(N + 1, 0);
    for (std::size_t n = 1; n <= N; ++n) s.series[n] = b.L[n] / static_cast<double>(n);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t n = std::max<std::size_t>(1, N / 10); n <= N; ++n) {
        lo = std::min(lo, s.series[n]);
        hi = std::max(hi, s.series[n]);
    }
    s.tail_spread = hi - lo;
    for (std::size_t n = 0; n < N; ++n) {
        const Point image = rec.group->element(b.words[n]).apply(b.points[n + 1]);
        s.max_step = std::max(s.max_step, hyp::distance(b.points[n], image));
    }
    // L_{m+n} <= L_m + n max L_1 by the triangle inequality
    const std::size_t stride = std::max<std::size_t>(1, N / 200);
    for (std::size_t m = 0; m <= N; m += stride) {
        for (std::size_t n = 1; m + n <= N; n *= 2) {
            if (b.L[m + n] > b.L[m] + static_cast<double>(n) * s.max_step + 1e-9) ++s.subadditivity_violations;
        }
    }
    return s;
}

BoundaryLimits boundary_limits(const OrbitRecord& rec, double speedFloor) {
    const std::size_t N = rec.N();
    if (N == 0 || rec.forward.L[N] / static_cast<double>(N) <= speedFloor) throw Error(ErrorCode::NoEscape, "rotation speed below the floor");
    if (rec.backward.steps() == 0) throw Error(ErrorCode::ConfigInvalid, "boundary limits need the backward orbit");
    const std::size_t M = rec.backward.steps();
    if (rec.backward.L[M] / static_cast<double>(M) <= speedFloor) throw Error(ErrorCode::NoEscape, "backward rotation speed below the floor");
    BoundaryLimits out;
    out.omega = Boundary(rec.lift(N).direction());
    out.alpha = Boundary(rec.lift(M, true).direction());
    out.directions.resize(N + 1);
    for (std::size_t n = 0; n <= N; ++n) out.directions[n] = rec.lift(n).direction();
    for (std::size_t n = N - N / 10; n <= N; ++n) out.convergence_gap = std::max(out.convergence_gap, hyp::angular_distance(out.directions[n], out.omega.theta()));
    for (std::size_t n = M - M / 10; n <= M; ++n)
        out.convergence_gap = std::max(out.convergence_gap, hyp::angular_distance(rec.lift(n, true).direction(), out.alpha.theta()));
    return out;
}

std::string status_name(TrackingStatus s) {
    switch (s) {
    case TrackingStatus::Tracked: return "Tracked";
    case TrackingStatus::NoSpeed: return "NoSpeed";
    case TrackingStatus::CoincidentLimits: return "CoincidentLimits";
    case TrackingStatus::Unresolved: return "Unresolved";
    }
    return "NoSpeed";
}

TrackingEstimate tracking_geodesic(const OrbitRecord& rec, double speedFloor, double gapFloor) {
    TrackingEstimate est;
    const std::size_t N = rec.N();
    const std::size_t M = rec.backward.steps();
    if (N == 0 || M == 0) return est;
    est.theta_forward = rec.forward.L[N] / static_cast<double>(N);
    est.theta_backward = rec.backward.L[M] / static_cast<double>(M);
    if (est.theta_forward <= speedFloor || est.theta_backward <= speedFloor) return est;

    const SurfaceGroup& G = *rec.group;
    const OrbitBranch& fw = rec.forward;
    const OrbitBranch& bw = rec.backward;

    // forward endpoint seen from each frame: omega_n = (g_n ... g_{N-1}) zeta
    const Boundary zeta = exit_point(fw.accumulated[N], fw.points[N]);
    est.frame_omega.assign(N + 1, 0);
    Iso P;
    est.frame_omega[N] = zeta.theta();
    for (std::size_t n = N; n-- > 0;) {
        P = G.element(fw.words[n]) * P;
        est.frame_omega[n] = P.apply(zeta).theta();
    }
    // backward endpoint: alpha_n = (g_{n-1}^-1 ... g_0^-1 B_M) xi
    const Boundary xi = exit_point(bw.accumulated[M], bw.points[M]);
    est.frame_alpha.assign(N + 1, 0);
    Iso H = bw.accumulated[M];
    for (std::size_t n = 0; n <= N; ++n) {
        if (n > 0) H = G.element(fw.words[n - 1]).inverse() * H;
        est.frame_alpha[n] = H.apply(xi).theta();
    }
    est.alpha = Boundary(est.frame_alpha[0]);
    est.omega = Boundary(est.frame_omega[0]);
    const auto tail = [&](std::size_t K, bool backward) {
        const OrbitBranch& b = backward ? bw : fw;
        const double last = rec.lift(K, backward).direction();
        double drift = 0;
        for (std::size_t n = K - K / 10; n < K; ++n) drift = std::max(drift, hyp::angular_distance(rec.lift(n, backward).direction(), last));
        const double gained = b.L[K] - b.L[K - K / 10];
        return gained > 0 ? drift / -std::expm1(-gained) : (drift > 0 ? double(INFINITY) : 0.0);
    };
    est.endpoint_uncertainty = std::max(tail(N, false), tail(M, true));
    if (est.endpoint_uncertainty > gapFloor) {
        est.status = TrackingStatus::Unresolved;
        return est;
    }
    if (hyp::angular_distance(est.alpha.theta(), est.omega.theta()) <= gapFloor) {
        est.status = TrackingStatus::CoincidentLimits;
        return est;
    }
    est.geodesic = hyp::geodesic_of<double>(est.alpha, est.omega, rec.seed);

    est.frame_r.assign(N + 1, 0);
    est.T.assign(N + 1, 0);
    est.residuals.assign(N + 1, 0);
    for (std::size_t n = 0; n <= N; ++n) {
        Geodesic frame;
        try {
            frame = Geodesic::from_endpoints(Boundary(est.frame_alpha[n]), Boundary(est.frame_omega[n]));
        } catch (const Error&) {
            est.status = TrackingStatus::CoincidentLimits;
            return est;
        }
        const auto here = frame.fermi(fw.points[n]);
        est.frame_r[n] = here.r;
        if (n > 0) est.residuals[n] = right_triangle_hypotenuse(here.r, static_cast<double>(n) * est.theta_forward - est.T[n]) / static_cast<double>(n);
        if (n < N) {
            const Point image = G.element(fw.words[n]).apply(fw.points[n + 1]);
            est.T[n + 1] = est.T[n] + frame.fermi(image).t - here.t;
        }
    }
    est.status = TrackingStatus::Tracked;
    return est;
}

HomologyRotation homology_rotation(const OrbitRecord& rec, std::size_t samples) {
    HomologyRotation out;
    const std::size_t N = rec.N();
    if (N == 0) {
        out.vector = HomologyVector(2 * static_cast<std::size_t>(rec.genus));
        return out;
    }
    out.vector = rec.homology_at(N) / Rational(static_cast<long long>(N));
    samples = std::max<std::size_t>(1, std::min(samples, N));
    for (std::size_t j = 1; j <= samples; ++j) {
        const std::size_t n = (j * N + samples - 1) / samples;
        std::vector<double> v = rec.homology_at(n).to_doubles();
        for (double& c : v) c /= static_cast<double>(n);
        out.partials.push_back(std::move(v));
    }
    return out;
}

TimeCocycle time_cocycle_mean(const OrbitRecord& rec, const TrackingEstimate& est) {
    if (est.status != TrackingStatus::Tracked) throw Error(ErrorCode::ConfigInvalid, "time cocycle needs a tracked orbit");
    TimeCocycle out;
    const std::size_t N = rec.N();
    out.increments.resize(N);
    for (std::size_t n = 0; n < N; ++n) out.increments[n] = est.T[n + 1] - est.T[n];
    out.mean = est.T[N] / static_cast<double>(N);
    return out;
}

double EmpiricalMeasure::total() const {
    double s = 0;
    for (const auto& [k, v] : bins) s += v;
    return s;
}

double total_variation(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    double s = 0;
    auto i = a.bins.begin();
    auto j = b.bins.begin();
    while (i != a.bins.end() || j != b.bins.end()) {
        if (j == b.bins.end() || (i != a.bins.end() && i->first < j->first)) {
            s += std::abs(i->second);
            ++i;
        } else if (i == a.bins.end() || j->first < i->first) {
            s += std::abs(j->second);
            ++j;
        } else {
            s += std::abs(i->second - j->second);
            ++i;
            ++j;
        }
    }
    return s / 2;
}

std::tuple<int, int, int> measure_bin(const SurfaceGroup& G, const GridSpec& grid, const Point& p, double angle) {
    const double rho = std::tanh(G.vertex_radius() / 2);
    const auto cell = [&](double x) { return std::clamp(static_cast<int>(std::floor((x + rho) / (2 * rho) * grid.cells)), 0, grid.cells - 1); };
    const int sector = std::clamp(static_cast<int>(std::floor(hyp::wrap_angle(angle) / (2 * kPi<double>) * grid.sectors)), 0, grid.sectors - 1);
    return {cell(p.z().real()), cell(p.z().imag()), sector};
}

EmpiricalMeasure equidistribute(const SurfaceGroup& G, const OrbitRecord& rec, const TrackingEstimate& est, const GridSpec& grid) {
    if (est.status != TrackingStatus::Tracked) throw Error(ErrorCode::ConfigInvalid, "equidistribution needs a tracked orbit");
    EmpiricalMeasure m;
    double total = 0;
    const std::size_t N = rec.N();
    for (std::size_t n = 0; n < N; ++n) {
        const Geodesic frame = Geodesic::from_endpoints(Boundary(est.frame_alpha[n]), Boundary(est.frame_omega[n]));
        const double t0 = frame.fermi(rec.forward.points[n]).t;
        const double delta = est.T[n + 1] - est.T[n];
        const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(delta) / grid.spacing)));
        const double w = std::abs(delta) / pieces;
        if (w == 0) continue;
        for (int j = 0; j < pieces; ++j) {
            const double t = t0 + (j + 0.5) * delta / pieces;
            const Point z = frame.point_at(t);
            const Reduction r = reduce(G, z);
            // carry the tangent direction back along the reducing deck map
            const double angle = frame.tangent_angle(t) + std::arg(G.element(r.word).inverse().derivative(z.z()));
            m.bins[measure_bin(G, grid, r.p0, angle)] += w;
            total += w;
        }
    }
    if (total > 0) {
        for (auto& [k, v] : m.bins) v /= total;
    }
    return m;
}

DecadeTrend decade_trend(const std::vector<double>& series) {
    DecadeTrend t;
    const std::size_t N = series.size() - 1;
    if (series.size() < 101) return t;
    double a = 0, b = 0;
    for (std::size_t n = 1; n <= 10; ++n) a += series[n];
    for (std::size_t n = N / 10; n <= N; ++n) b += series[n];
    t.first = a / 10;
    t.last = b / static_cast<double>(N - N / 10 + 1);
    t.decreasing = t.last < t.first;
    return t;
}

} // namespace rotlab

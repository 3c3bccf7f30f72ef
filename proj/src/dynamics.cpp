#include "rotlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rotlab {

namespace {

// translate gaps beyond this are not resolved; the default bump then uses it
constexpr double kGapCap = 2.5;
constexpr double kSameEndpoint = 1e-9;

bool same_geodesic(const Geodesic& x, const Geodesic& y) {
    const auto close = [](const Boundary& u, const Boundary& v) { return hyp::angular_distance(u.theta(), v.theta()) < kSameEndpoint; };
    return (close(x.alpha(), y.alpha()) && close(x.omega(), y.omega())) || (close(x.alpha(), y.omega()) && close(x.omega(), y.alpha()));
}

std::vector<Element> ball_for_catalog(const SurfaceGroup& G, double radius) {
    // short words first; longer ones only when the ball needs them
    for (int len : {8, 12}) {
        try {
            return enumerate_ball(G, radius, len);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BudgetExceeded || len == 12) throw Error(ErrorCode::CatalogInsufficient, std::string("translate catalog: ") + e.what());
        }
    }
    return {};
}

double signed_fermi_r(Vec q) {
    const double rq = std::abs(q);
    return std::asinh(2 * q.imag() / ((1 - rq) * (1 + rq)));
}

} // namespace

std::string profile_name(Profile p) {
    switch (p) {
    case Profile::Quartic: return "quartic";
    }
    return "quartic";
}

Profile parse_profile(const std::string& name) {
    if (name == "quartic" || name.empty()) return Profile::Quartic;
    throw Error(ErrorCode::ConfigInvalid, "unknown bump profile '" + name + "'");
}

double bump(Profile p, double r, double radius) {
    switch (p) {
    case Profile::Quartic: {
        const double s = r / radius;
        if (std::abs(s) >= 1) return 0;
        const double u = 1 - s * s;
        return u * u;
    }
    }
    return 0;
}

double hyperbolic_norm(const Point& z, Vec v) { return 2 * std::abs(v) / z.one_minus_abs2(); }

PushField::PushField(const SurfaceGroup& G, PushSpec spec, double cover_radius) : group_(&G), spec_(std::move(spec)), cover_(cover_radius) {
    if (!std::isfinite(spec_.speed)) throw Error(ErrorCode::InvalidPush, "push speed must be finite");
    if (spec_.core.max_generator() > 2 * G.genus()) throw Error(ErrorCode::InvalidPush, "core word uses a generator outside the group");
    const Iso c = G.element(spec_.core);
    if (!c.is_loxodromic()) throw Error(ErrorCode::InvalidPush, "core word " + spec_.core.str() + " is not loxodromic");
    const auto ax = hyp::axis_of(c);
    axis_ = ax.geodesic;
    length_ = ax.length;
    const double d0 = axis_.distance_to(Point());

    // Any translate within g of the axis is reached by some T with
    // d(0, T.0) <= 2 d0 + length + g, and any translate meeting B(0, rho)
    // by some T with d(0, T.0) <= rho + d0 + length / 2.
    const double reachCap = cover_ + 1.0;
    const double radius = std::max(2 * d0 + length_ + kGapCap, reachCap + d0 + length_ / 2 + 0.1);
    const std::vector<Element> ball = ball_for_catalog(G, radius);

    gap_ = kGapCap;
    for (const Element& e : ball) {
        const Geodesic moved = axis_.transformed(e.iso);
        if (same_geodesic(moved, axis_)) continue;
        if (hyp::cross_angle(axis_, moved)) throw Error(ErrorCode::InvalidPush, "axis of " + spec_.core.str() + " crosses its translate by " + e.word.str());
        gap_ = std::min(gap_, hyp::geodesic_distance(axis_, moved));
    }
    if (spec_.bump_radius == 0) spec_.bump_radius = 0.4 * gap_ / 2;
    if (!(spec_.bump_radius > 0) || spec_.bump_radius >= gap_ / 2)
        throw Error(ErrorCode::InvalidPush, "bump radius must lie in (0, " + std::to_string(gap_ / 2) + ")");

    for (const Element& e : ball) {
        const Geodesic moved = axis_.transformed(e.iso);
        const double reach = moved.distance_to(Point());
        if (reach > cover_ + spec_.bump_radius) continue;
        const bool seen = std::any_of(catalog_.begin(), catalog_.end(), [&](const Translate& t) { return same_geodesic(t.geodesic, moved); });
        if (!seen) catalog_.push_back({e.word, moved, reach});
    }
}

std::vector<const PushField::Translate*> PushField::candidates(const Point& p, double slack) const {
    std::vector<const Translate*> out;
    for (const Translate& t : catalog_) {
        if (t.geodesic.distance_to(p) < spec_.bump_radius + slack) out.push_back(&t);
    }
    return out;
}

Vec PushField::field_of(const Translate& T, Vec z) const {
    const Iso& m = T.geodesic.normalizer();
    const Vec q = m.apply_raw(z);
    const double r = signed_fermi_r(q);
    const double phi = bump(spec_.profile, r, spec_.bump_radius);
    if (phi == 0) return 0;
    // (1 - q^2) / 2 is the unit translation field along the real diameter;
    // it has hyperbolic length cosh r
    const Vec vq = phi * spec_.speed * (1.0 - q * q) / (2 * std::cosh(r));
    return vq / m.derivative(z);
}

Vec PushField::eval(const Point& p) const {
    if (hyp::distance(Point(), p) > cover_) throw Error(ErrorCode::CatalogInsufficient, "point lies outside the catalog's covered ball");
    Vec v = 0;
    for (const Translate& t : catalog_) v += field_of(t, p.z());
    return v;
}

Vec PushField::eval_anywhere(const Point& p) const {
    const Reduction r = reduce(*group_, p);
    const Vec v0 = eval(r.p0);
    return group_->element(r.word).derivative(r.p0.z()) * v0;
}

EquivariantMap::EquivariantMap(const SurfaceGroup& G, std::vector<PushSpec> pushes, double step) : group_(&G), step_(step) {
    if (!(step > 0) || step > 1) throw Error(ErrorCode::ConfigInvalid, "integrator step must lie in (0, 1]");
    for (const PushSpec& p : pushes) max_speed_ += std::abs(p.speed);
    // points of the domain move at most max_speed in unit time
    cover_ = G.vertex_radius() + max_speed_ + 0.25;
    for (PushSpec& p : pushes) fields_.emplace_back(G, std::move(p), cover_);
}

std::vector<PushSpec> EquivariantMap::pushes() const {
    std::vector<PushSpec> out;
    for (const PushField& f : fields_) out.push_back(f.spec());
    return out;
}

Vec EquivariantMap::field(const Point& p) const {
    Vec v = 0;
    for (const PushField& f : fields_) v += f.eval(p);
    return v;
}

Point EquivariantMap::flow_local(const Point& p, double time, const std::vector<std::pair<const PushField*, const PushField::Translate*>>& active) const {
    if (active.empty() || time == 0) return p;
    const auto F = [&](Vec z) {
        if (!(std::abs(z) < 1 - 1e-12)) throw Error(ErrorCode::StepBlowup, "integration left the disk");
        Vec v = 0;
        for (const auto& [field, translate] : active) v += field->field_of(*translate, z);
        return v;
    };
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(time) / step_ - 1e-9)));
    const double dt = time / n;
    Vec z = p.z();
    for (int i = 0; i < n; ++i) {
        const Vec k1 = F(z);
        const Vec k2 = F(z + 0.5 * dt * k1);
        const Vec k3 = F(z + 0.5 * dt * k2);
        const Vec k4 = F(z + dt * k3);
        z += dt / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!(std::abs(z) < 1 - 1e-12)) throw Error(ErrorCode::StepBlowup, "integration left the disk");
    }
    return Point(z);
}

Point EquivariantMap::flow(const Point& p, double time) const {
    if (hyp::distance(Point(), p) > group_->vertex_radius() + 1e-9)
        throw Error(ErrorCode::CatalogInsufficient, "flow must start in the fundamental domain");
    std::vector<std::pair<const PushField*, const PushField::Translate*>> active;
    for (const PushField& f : fields_) {
        for (const auto* t : f.candidates(p, max_speed_ * std::abs(time) + 0.05)) active.emplace_back(&f, t);
    }
    if (max_speed_ * std::abs(time) > max_speed_ + 1e-12) throw Error(ErrorCode::CatalogInsufficient, "flow time exceeds the catalog's reach");
    return flow_local(p, time, active);
}

Lift EquivariantMap::advance(const Point& p, int direction) const {
    const Reduction r = reduce(*group_, p);
    return {r.word, flow(r.p0, direction >= 0 ? 1.0 : -1.0)};
}

Point EquivariantMap::operator()(const Point& p) const {
    const Lift l = advance(p, 1);
    return group_->element(l.word).apply(l.point);
}

Point EquivariantMap::inverse(const Point& p) const {
    const Lift l = advance(p, -1);
    return group_->element(l.word).apply(l.point);
}

Dynamics::Dynamics(const SurfaceGroup& G, std::vector<EquivariantMap> maps) : group_(&G), maps_(std::move(maps)) {}

Lift Dynamics::forward(const Point& p) const {
    Lift out{Word(), p};
    for (const EquivariantMap& m : maps_) {
        const Lift s = m.advance(out.point, 1);
        out = {out.word * s.word, s.point};
    }
    return out;
}

Lift Dynamics::backward(const Point& p) const {
    Lift out{Word(), p};
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) {
        const Lift s = it->advance(out.point, -1);
        out = {out.word * s.word, s.point};
    }
    return out;
}

Point Dynamics::operator()(const Point& p) const {
    const Lift l = forward(p);
    return group_->element(l.word).apply(l.point);
}

Point Dynamics::inverse(const Point& p) const {
    const Lift l = backward(p);
    return group_->element(l.word).apply(l.point);
}

Dynamics Scenario::build(const SurfaceGroup& G) const {
    if (G.genus() != genus) throw Error(ErrorCode::DimensionMismatch, "scenario and group have different genus");
    std::vector<EquivariantMap> ms;
    for (const auto& pushes : maps) ms.emplace_back(G, pushes, step);
    return Dynamics(G, std::move(ms));
}

namespace {

// smallest margin by which p clears the Dirichlet faces
double dirichlet_margin(const SurfaceGroup& G, const Point& p) {
    const double d = hyp::distance(p, Point());
    double m = std::numeric_limits<double>::infinity();
    for (Letter l : G.letters()) m = std::min(m, hyp::distance(p, G.generator(l).apply(Point())) - d);
    return m;
}

// distance from p to the support of f, negative inside
double support_clearance(const PushField& f, const Point& p) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& t : f.catalog()) m = std::min(m, t.geodesic.distance_to(p) - f.spec().bump_radius);
    return m;
}

} // namespace

Point core_orbit_seed(const SurfaceGroup& G, const std::vector<std::vector<PushSpec>>& maps, std::size_t map_index, std::size_t index, int k) {
    std::vector<EquivariantMap> built;
    for (const auto& pushes : maps) built.emplace_back(G, pushes, 1e-2);
    const PushField& target = built.at(map_index).fields().at(index);
    const Geodesic& axis = target.axis();
    const double spacing = target.translation_length() / k;

    const auto score = [&](double phase) {
        double s = std::numeric_limits<double>::infinity();
        for (int i = 0; i < k; ++i) {
            const Reduction r = reduce(G, axis.point_at(phase + i * spacing));
            s = std::min(s, dirichlet_margin(G, r.p0));
            for (std::size_t mi = 0; mi < built.size(); ++mi) {
                for (std::size_t fi = 0; fi < built[mi].fields().size(); ++fi) {
                    if (mi == map_index && fi == index) continue;
                    const PushField& other = built[mi].fields()[fi];
                    if (mi != map_index) {
                        s = std::min(s, support_clearance(other, r.p0));
                        continue;
                    }
                    // the same field acts along the whole step
                    for (int j = 0; j <= 20; ++j) {
                        const Reduction rj = reduce(G, axis.point_at(phase + (i + j / 20.0) * spacing));
                        s = std::min(s, support_clearance(other, rj.p0));
                    }
                }
            }
        }
        return s;
    };

    // phases put the seed on the part of the axis inside the domain about 0
    double best = -std::numeric_limits<double>::infinity(), bestPhase = 0;
    constexpr int kPhases = 384;
    const double length = target.translation_length();
    for (int j = 0; j < kPhases; ++j) {
        const double phase = length * (static_cast<double>(j) / kPhases - 0.5);
        if (!reduce(G, axis.point_at(phase)).word.empty()) continue;
        const double s = score(phase);
        if (s > best) {
            best = s;
            bestPhase = phase;
        }
    }
    if (!(best > 1e-3)) throw Error(ErrorCode::InvalidPush, "no phase keeps the core orbit clear of the other pushes");
    return axis.point_at(bestPhase);
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"single-push", "disjoint-pushes", "criss-cross", "trivial-homology-push"};
    return names;
}

Scenario make_scenario(const std::string& name, const SurfaceGroup& G) {
    Scenario s;
    s.name = name;
    s.genus = G.genus();
    const int g = G.genus();
    const auto length = [&](const Word& w) { return G.element(w).translation_length(); };
    const auto core_sample = [&](const std::string& label, std::size_t mi, std::size_t fi, int k) {
        ScenarioSample out;
        out.label = label;
        out.period = k;
        out.seed = core_orbit_seed(G, s.maps, mi, fi, k);
        out.expected_rotation = abelianize(s.maps[mi][fi].core, g) / Rational(k);
        return out;
    };
    // a point at Fermi distance r from the core orbit seed of a push
    const auto offset_sample = [&](const std::string& label, const Point& seed, const PushSpec& spec, double fraction) {
        const EquivariantMap m(G, {spec});
        const PushField& f = m.fields().front();
        const auto near = f.candidates(seed, 1e-9);
        const Geodesic& axis = near.front()->geodesic;
        const double t = axis.fermi(seed).t;
        ScenarioSample out;
        out.label = label;
        out.seed = reduce(G, axis.from_fermi(t, fraction * f.spec().bump_radius)).p0;
        return out;
    };

    const Word a1{1}, b1{2}, a2{3};
    if (name == "single-push") {
        const int k = 8;
        s.maps = {{PushSpec{a1, length(a1) / k}}};
        s.samples.push_back(core_sample("core", 0, 0, k));
        s.samples.push_back(offset_sample("offset", s.samples[0].seed, s.maps[0][0], 0.5));
        s.expected_classes = {{"core", "offset"}};
        s.expected_kinds = {"I1"};
    } else if (name == "disjoint-pushes") {
        const int k = 8;
        s.maps = {{PushSpec{a1, length(a1) / k}, PushSpec{a2, length(a2) / k}}};
        s.samples.push_back(core_sample("push-a1", 0, 0, k));
        s.samples.push_back(core_sample("push-a2", 0, 1, k));
        s.expected_classes = {{"push-a1"}, {"push-a2"}};
        s.expected_kinds = {"I1", "I1"};
    } else if (name == "criss-cross") {
        // the orbit on one axis must dodge the band of the other push, so the
        // bands are narrower than the default
        const int k = 4;
        const double band = 0.2;
        s.maps = {{PushSpec{a1, length(a1) / k, band}}, {PushSpec{b1, length(b1) / k, band}}};
        s.samples.push_back(core_sample("push-a1", 0, 0, k));
        s.samples.push_back(core_sample("push-b1", 1, 0, k));
        s.expected_classes = {{"push-a1", "push-b1"}};
        s.expected_kinds = {"Iplus"};
        s.expect_transverse = true;
    } else if (name == "trivial-homology-push") {
        const int k = 8;
        const Word c{1, 2, -1, -2};
        s.maps = {{PushSpec{c, length(c) / k}}};
        s.samples.push_back(core_sample("core", 0, 0, k));
        s.samples.push_back(offset_sample("offset", s.samples[0].seed, s.maps[0][0], 0.5));
        s.expected_classes = {{"core", "offset"}};
        s.expected_kinds = {"I1"};
    } else {
        throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
    }
    return s;
}

} // namespace rotlab

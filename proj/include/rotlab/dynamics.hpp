#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotlab/surface_group.hpp"

namespace rotlab {

using Vec = hyp::Complex<double>;

// phi(r) = (1 - (r/R)^2)^2 on |r| < R, zero outside; C^1 at r = R
enum class Profile { Quartic };

std::string profile_name(Profile p);
Profile parse_profile(const std::string& name);
double bump(Profile p, double r, double radius);

struct PushSpec {
    Word core;
    double speed = 0;
    double bump_radius = 0;  // 0 selects the default, 0.4 x half the translate gap
    Profile profile = Profile::Quartic;
};

// hyperbolic norm of a tangent vector at z
double hyperbolic_norm(const Point& z, Vec v);

// One point-push together with every translate of its axis that comes
// within cover_radius of 0.
class PushField {
public:
    PushField(const SurfaceGroup& G, PushSpec spec, double cover_radius);

    const PushSpec& spec() const { return spec_; }
    const Geodesic& axis() const { return axis_; }
    double translation_length() const { return length_; }
    double cover_radius() const { return cover_; }
    // distance from the axis to the nearest distinct translate (capped)
    double translate_gap() const { return gap_; }

    struct Translate {
        Word word;
        Geodesic geodesic;
        double reach;  // distance from 0 to the geodesic
    };
    const std::vector<Translate>& catalog() const { return catalog_; }

    // translates whose bump support can reach the ball B(p, slack)
    std::vector<const Translate*> candidates(const Point& p, double slack) const;

    // field of one translate at z
    Vec field_of(const Translate& T, Vec z) const;
    // sum over the catalog; CatalogInsufficient outside the covered ball
    Vec eval(const Point& p) const;
    // anywhere in the disk, through the reduction of p
    Vec eval_anywhere(const Point& p) const;

private:
    const SurfaceGroup* group_;
    PushSpec spec_;
    Geodesic axis_;
    double length_ = 0;
    double cover_ = 0;
    double gap_ = 0;
    std::vector<Translate> catalog_;
};

// A point given as word . point, with point near the fundamental domain.
struct Lift {
    Word word;
    Point point;
};

// Time-one map of the autonomous field summed over all pushes.
class EquivariantMap {
public:
    EquivariantMap(const SurfaceGroup& G, std::vector<PushSpec> pushes, double step = 1e-2);

    const std::vector<PushField>& fields() const { return fields_; }
    std::vector<PushSpec> pushes() const;
    double step() const { return step_; }
    double max_speed() const { return max_speed_; }

    Vec field(const Point& p) const;

    // integrate for the given (signed) time from a point of the covered ball
    Point flow(const Point& p, double time) const;

    // time-one map (direction +1) or its inverse (-1) on the lift of p
    Lift advance(const Point& p, int direction = 1) const;

    Point operator()(const Point& p) const;
    Point inverse(const Point& p) const;

private:
    Point flow_local(const Point& p, double time, const std::vector<std::pair<const PushField*, const PushField::Translate*>>& active) const;

    const SurfaceGroup* group_;
    std::vector<PushField> fields_;
    double step_;
    double max_speed_ = 0;
    double cover_ = 0;
};

// f = maps.back() o ... o maps.front()
class Dynamics {
public:
    Dynamics(const SurfaceGroup& G, std::vector<EquivariantMap> maps);

    const SurfaceGroup& group() const { return *group_; }
    const std::vector<EquivariantMap>& maps() const { return maps_; }

    Lift forward(const Point& p) const;
    Lift backward(const Point& p) const;

    Point operator()(const Point& p) const;
    Point inverse(const Point& p) const;

private:
    const SurfaceGroup* group_;
    std::vector<EquivariantMap> maps_;
};

struct ScenarioSample {
    std::string label;
    Point seed;
    // exact rotation vector of the seed's orbit when it is periodic
    std::optional<HomologyVector> expected_rotation;
    int period = 0;
};

struct Scenario {
    std::string name;
    int genus = 2;
    std::vector<std::vector<PushSpec>> maps;
    double step = 1e-2;
    std::vector<ScenarioSample> samples;
    // labels grouped by expected class, with "I1" or "Iplus" per class
    std::vector<std::vector<std::string>> expected_classes;
    std::vector<std::string> expected_kinds;
    bool expect_transverse = false;

    Dynamics build(const SurfaceGroup& G) const;
};

const std::vector<std::string>& scenario_names();
Scenario make_scenario(const std::string& name, const SurfaceGroup& G);

// Seed in the domain on the axis of push `index` of map `map_index` whose
// orbit visits k points per loop, all kept clear of the other pushes and of
// the domain faces.
Point core_orbit_seed(const SurfaceGroup& G, const std::vector<std::vector<PushSpec>>& maps, std::size_t map_index, std::size_t index, int k);

} // namespace rotlab

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotlab/estimators.hpp"
#include "rotlab/structure.hpp"
#include "rotlab/torus.hpp"

namespace rotlab::io {

using Json = nlohmann::json;

// 12 significant digits; refuses NaN and infinities
std::string format_number(double v);

// Byte-stable rendering: sorted keys, two-space indent, numbers through
// format_number.
std::string dump(const Json& j);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
// ConfigInvalid with the line and column of a syntax error
Json parse_json(const std::string& text, const std::string& origin = "input");
Json read_json(const std::filesystem::path& path);

// Rationals are integers or strings "p/q" on input; integers or "p/q" on output.
Rational rational_from_json(const Json& j, const std::string& field);
Json rational_json(const Rational& q);
HomologyVector vector_from_json(const Json& j, const std::string& field);
Json vector_json(const HomologyVector& v);

// {nodes: [names], edges: [{from, to, label}]}; from/to are names or indices
LabeledGraph graph_from_json(const Json& j);
Json graph_json(const LabeledGraph& g);
Json polytope_json(const RotationPolytope& p);
Json walk_json(const LabeledGraph& g, const ClosedWalk& w);

Json group_json(const SurfaceGroup& G);

// {coreWord, speed, bumpRadius, profile}
PushSpec push_from_json(const Json& j);
Json push_json(const PushSpec& p);

Json point_json(const Point& p);
Json orbit_json(const OrbitRecord& rec);
Json tracking_json(const TrackingEstimate& est);
Json partition_json(const ClassPartition& p);
Json report_json(const TheoremAReport& r);

// n, L_n, theta_n, residual_n, then the homology partial sums
std::string series_csv(const OrbitRecord& rec, const SpeedEstimate& speed, const TrackingEstimate& est);
// time, v1, v2
std::string torus_csv(const TorusRotation& r);

struct ScenarioConfig {
    int genus = 2;
    std::string scenario;  // a named scenario, or empty with explicit maps
    std::vector<std::vector<PushSpec>> maps;
    enum class Seeds { Scenario, List, Grid } seed_mode = Seeds::Scenario;
    std::vector<Point> seeds;
    int grid = 0;
    std::size_t N = 10000;
    double step = 1e-2;
    double speed_floor = kSpeedFloor;
    double gap_floor = kGapFloor;
    double theta_min = kThetaMin;
    bool backward = true;
};

// Fields: genus, scenario | maps, seeds ("scenario", "grid:k" or [[x, y], ..]),
// N, step, speedFloor, gapFloor, thetaMin, backward. Unknown fields and
// nonpositive tolerances are ConfigInvalid.
ScenarioConfig config_from_json(const Json& j);
Json config_json(const ScenarioConfig& c);

// FNV-1a of the canonical rendering
std::string content_hash(const std::string& text);

} // namespace rotlab::io

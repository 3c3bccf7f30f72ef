// rotlab: command-line front end.
//
// Exit codes: 0 success, 1 failed assertion, 2 configuration error,
// 3 numerical breakdown. Without --out the primary artifact goes to stdout
// and a summary to stderr.

#include <atomic>
#include <chrono>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "rotlab/io.hpp"
#include "rotlab/selftest.hpp"

using namespace rotlab;
namespace fs = std::filesystem;
using io::Json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kAssertion = 1, kConfig = 2, kNumerical = 3 };

struct Common {
    std::string config;
    std::string out;
    std::string format = "json";
    int jobs = 1;
    int seed_grid = 0;
};

void emit(const Common& c, const std::string& name, const std::string& text) {
    if (c.out.empty()) std::cout << text;
    else io::write_text(fs::path(c.out) / name, text);
}

void emit_file(const Common& c, const std::string& name, const std::string& text) {
    if (!c.out.empty()) io::write_text(fs::path(c.out) / name, text);
}

void emit_timing(const Common& c, double seconds) {
    // kept apart from the report so that reports stay byte-stable
    emit_file(c, "timing.json", io::dump(Json{{"wallSeconds", seconds}}));
}

struct SampleRun {
    std::string label;
    Point seed;
    std::optional<HomologyVector> expected;
    OrbitRecord record;
    SpeedEstimate speed;
    TrackingEstimate tracking;
    HomologyRotation homology;
};

struct Experiment {
    io::ScenarioConfig config;
    SurfaceGroup group;
    std::optional<Scenario> scenario;
    std::vector<std::vector<PushSpec>> maps;
    std::vector<std::pair<std::string, Point>> seeds;
    std::vector<std::optional<HomologyVector>> expected;
};

std::vector<std::pair<std::string, Point>> grid_seeds(const SurfaceGroup& G, int k) {
    std::vector<std::pair<std::string, Point>> out;
    const double e = std::tanh(G.vertex_radius() / 2);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double x = -e + 2 * e * (i + 0.5) / k, y = -e + 2 * e * (j + 0.5) / k;
            if (x * x + y * y >= e * e) continue;
            const Point p(x, y);
            if (!reduce(G, p).word.empty()) continue;
            out.emplace_back("grid-" + std::to_string(i) + "-" + std::to_string(j), p);
        }
    }
    return out;
}

Experiment load_experiment(const Common& c) {
    if (c.config.empty()) throw Error(ErrorCode::ConfigInvalid, "a config file is required (--config PATH)");
    Json raw = io::read_json(c.config);
    // the flag overrides the file and runs through the same validation
    if (c.seed_grid > 0 && raw.is_object()) raw["seeds"] = "grid:" + std::to_string(c.seed_grid);
    const io::ScenarioConfig cfg = io::config_from_json(raw);
    Experiment ex{cfg, SurfaceGroup::build(cfg.genus), std::nullopt, {}, {}, {}};
    if (!cfg.scenario.empty()) {
        ex.scenario = make_scenario(cfg.scenario, ex.group);
        ex.maps = ex.scenario->maps;
    } else {
        ex.maps = cfg.maps;
    }
    switch (cfg.seed_mode) {
    case io::ScenarioConfig::Seeds::Scenario:
        for (const auto& s : ex.scenario->samples) {
            ex.seeds.emplace_back(s.label, s.seed);
            ex.expected.push_back(s.expected_rotation);
        }
        break;
    case io::ScenarioConfig::Seeds::List:
        for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
            if (!reduce(ex.group, cfg.seeds[i]).word.empty())
                throw Error(ErrorCode::ConfigInvalid, "config.seeds[" + std::to_string(i) + "]: outside the fundamental domain");
            ex.seeds.emplace_back("seed-" + std::to_string(i), cfg.seeds[i]);
            ex.expected.emplace_back();
        }
        break;
    case io::ScenarioConfig::Seeds::Grid:
        ex.seeds = grid_seeds(ex.group, cfg.grid);
        ex.expected.resize(ex.seeds.size());
        break;
    }
    if (ex.seeds.empty()) throw Error(ErrorCode::ConfigInvalid, "config.seeds: no seed inside the fundamental domain");
    return ex;
}

Dynamics build_dynamics(const Experiment& ex) {
    std::vector<EquivariantMap> maps;
    for (const auto& m : ex.maps) maps.emplace_back(ex.group, m, ex.config.step);
    return Dynamics(ex.group, std::move(maps));
}

// orbits are independent; results are stored by index so the output does
// not depend on the number of jobs
std::vector<SampleRun> run_samples(const Experiment& ex, const Dynamics& f, int jobs, bool estimate) {
    std::vector<SampleRun> runs(ex.seeds.size());
    std::vector<std::exception_ptr> errors(runs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
            try {
                SampleRun& r = runs[i];
                r.label = ex.seeds[i].first;
                r.seed = ex.seeds[i].second;
                r.expected = ex.expected[i];
                r.record = run_orbit(f, r.seed, ex.config.N, {ex.config.backward, nullptr});
                r.speed = rotation_speed(r.record);
                r.homology = homology_rotation(r.record);
                if (estimate) r.tracking = tracking_geodesic(r.record, ex.config.speed_floor, ex.config.gap_floor);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(runs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error& e) {
            throw Error(e.code(), "sample " + ex.seeds[i].first + ": " + e.what());
        }
    }
    return runs;
}

Json provenance(const Experiment& ex) {
    return {{"configHash", io::content_hash(io::dump(io::config_json(ex.config)))}, {"version", kVersion}};
}

Json sample_json(const SampleRun& r, bool estimate) {
    std::vector<double> approx;
    for (const auto& q : r.homology.vector.coords()) approx.push_back(q.convert_to<double>());
    Json out{{"label", r.label},
             {"seed", io::point_json(r.seed)},
             {"speed", {{"forward", r.speed.forward}, {"backward", r.speed.backward}, {"tailSpread", r.speed.tail_spread}}},
             {"homology", io::vector_json(r.homology.vector)},
             {"homologyApprox", approx}};
    if (r.expected) {
        out["expectedRotation"] = io::vector_json(*r.expected);
        out["rotationMatches"] = *r.expected == r.homology.vector;
    }
    if (estimate) out["tracking"] = io::tracking_json(r.tracking);
    return out;
}

std::string summary_csv(const std::vector<SampleRun>& runs) {
    std::ostringstream os;
    os << "label,theta_forward,theta_backward,status,alpha,omega,residual_final";
    const std::size_t dim = runs.empty() ? 0 : runs.front().homology.vector.dim();
    for (std::size_t i = 0; i < dim; ++i) os << ",rho" << i + 1;
    os << "\n";
    for (const auto& r : runs) {
        const bool tracked = r.tracking.status == TrackingStatus::Tracked;
        os << r.label << "," << io::format_number(r.speed.forward) << "," << io::format_number(r.speed.backward) << "," << status_name(r.tracking.status) << ",";
        if (tracked) os << io::format_number(r.tracking.alpha.theta()) << "," << io::format_number(r.tracking.omega.theta()) << "," << io::format_number(r.tracking.residuals.back());
        else os << ",,";
        for (const auto& q : r.homology.vector.coords()) os << "," << q.str();
        os << "\n";
    }
    return os.str();
}

int rotation_mismatches(const std::vector<SampleRun>& runs) {
    int bad = 0;
    for (const auto& r : runs) {
        if (r.expected && *r.expected != r.homology.vector) {
            std::cerr << "FAIL " << r.label << ": rotation vector differs from the expected value\n";
            ++bad;
        }
    }
    return bad;
}

int cmd_selftest(const Common& c, std::size_t trials, std::uint64_t seed) {
    const GeometrySelftest s = run_geometry_selftest(trials, seed);
    if (c.format == "csv") {
        std::ostringstream os;
        os << "identity,trial,residual\n";
        for (const auto& r : s.rows) os << r.identity << "," << r.trial << "," << io::format_number(r.residual) << "\n";
        emit(c, "selftest.csv", os.str());
    } else {
        emit(c, "selftest.json", io::dump(Json{{"trials", s.trials}, {"pythagorasMax", s.pythagoras_max}, {"sinesMax", s.sines_max},
                                                {"busemannViolations", s.busemann_violations}, {"pass", s.pass()}}));
    }
    std::cerr << "pythagoras max rel err " << s.pythagoras_max << ", law of sines max rel err " << s.sines_max << ", busemann violations "
              << s.busemann_violations << (s.pass() ? "  PASS\n" : "  FAIL\n");
    return s.pass() ? kOk : kAssertion;
}

int cmd_build_surface(const Common& c, int genus) {
    const SurfaceGroup G = SurfaceGroup::build(genus);
    emit(c, "group.json", io::dump(io::group_json(G)));
    std::cerr << "genus " << genus << ": vertex radius " << G.vertex_radius() << ", domain area " << G.domain_area() << "\n";
    return kOk;
}

int cmd_simulate(const Common& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const Experiment ex = load_experiment(c);
    const Dynamics f = build_dynamics(ex);
    const auto runs = run_samples(ex, f, c.jobs, false);
    Json samples = Json::array();
    for (const auto& r : runs) {
        samples.push_back(sample_json(r, false));
        if (c.format == "csv") {
            const TrackingEstimate none;
            emit_file(c, "series-" + r.label + ".csv", io::series_csv(r.record, r.speed, none));
        } else {
            emit_file(c, "orbit-" + r.label + ".json", io::dump(io::orbit_json(r.record)));
        }
    }
    emit(c, "report.json", io::dump(Json{{"config", io::config_json(ex.config)}, {"provenance", provenance(ex)}, {"samples", samples}}));
    emit_timing(c, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::cerr << runs.size() << " orbits of " << ex.config.N << " steps\n";
    return kOk;
}

int cmd_estimate(const Common& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const Experiment ex = load_experiment(c);
    const Dynamics f = build_dynamics(ex);
    const auto runs = run_samples(ex, f, c.jobs, true);
    if (c.format == "csv") {
        emit(c, "summary.csv", summary_csv(runs));
        for (const auto& r : runs) emit_file(c, "series-" + r.label + ".csv", io::series_csv(r.record, r.speed, r.tracking));
    } else {
        Json samples = Json::array();
        for (const auto& r : runs) samples.push_back(sample_json(r, true));
        emit(c, "report.json", io::dump(Json{{"config", io::config_json(ex.config)}, {"provenance", provenance(ex)}, {"samples", samples}}));
    }
    emit_timing(c, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::cerr << summary_csv(runs);
    return rotation_mismatches(runs) ? kAssertion : kOk;
}

std::vector<std::set<std::string>> as_sets(const std::vector<std::vector<std::string>>& classes) {
    std::vector<std::set<std::string>> out;
    for (const auto& c : classes) out.emplace_back(c.begin(), c.end());
    return out;
}

int cmd_classify(const Common& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const Experiment ex = load_experiment(c);
    const Dynamics f = build_dynamics(ex);
    const auto runs = run_samples(ex, f, c.jobs, true);

    std::vector<GeodesicSample> samples;
    std::map<std::string, HomologyVector> vectors;
    Json untracked = Json::array();
    for (const auto& r : runs) {
        if (r.tracking.status != TrackingStatus::Tracked) {
            untracked.push_back(r.label);
            continue;
        }
        samples.push_back({r.label, {r.tracking}, r.homology.vector});
        vectors.emplace(r.label, r.homology.vector);
    }
    const ClassPartition p = partition_classes(samples, ex.group, ex.config.theta_min);
    const TheoremAReport rep = theorem_a_report(p, vectors, ex.config.genus);

    int failures = rotation_mismatches(runs);
    if (!rep.all_pass()) {
        for (const auto& ch : rep.checks) {
            if (!ch.pass) std::cerr << "FAIL " << ch.name << ": " << ch.detail << "\n";
        }
        ++failures;
    }
    Json expected = nullptr;
    if (ex.scenario && ex.config.seed_mode == io::ScenarioConfig::Seeds::Scenario) {
        // compare with the scenario's expected classes, ignoring order
        auto got = as_sets(p.classes), want = as_sets(ex.scenario->expected_classes);
        std::map<std::set<std::string>, std::string> gotKinds, wantKinds;
        for (std::size_t i = 0; i < got.size(); ++i) gotKinds[got[i]] = kind_name(p.kinds[i]);
        for (std::size_t i = 0; i < want.size(); ++i) wantKinds[want[i]] = ex.scenario->expected_kinds[i];
        const bool match = gotKinds == wantKinds;
        if (!match) {
            std::cerr << "FAIL partition differs from the expected classes of " << ex.scenario->name << "\n";
            ++failures;
        }
        expected = {{"classes", ex.scenario->expected_classes}, {"kinds", ex.scenario->expected_kinds}, {"match", match}};
    }

    Json sampleJson = Json::array();
    for (const auto& r : runs) sampleJson.push_back(sample_json(r, true));
    Json report{{"config", io::config_json(ex.config)}, {"provenance", provenance(ex)}, {"samples", sampleJson},
                {"partition", io::partition_json(p)}, {"structureReport", io::report_json(rep)}, {"untracked", untracked}};
    if (!expected.is_null()) report["expected"] = expected;
    if (c.format == "csv") {
        std::ostringstream os;
        os << "class,kind,label\n";
        for (std::size_t i = 0; i < p.classes.size(); ++i) {
            for (const auto& l : p.classes[i]) os << i << "," << kind_name(p.kinds[i]) << "," << l << "\n";
        }
        emit(c, "classes.csv", os.str());
    } else {
        emit(c, "report.json", io::dump(report));
    }
    emit_timing(c, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
        std::cerr << kind_name(p.kinds[i]) << " class:";
        for (const auto& l : p.classes[i]) std::cerr << " " << l;
        std::cerr << "\n";
    }
    return failures ? kAssertion : kOk;
}

int cmd_polytope(const Common& c, const std::string& graphPath, const std::string& target) {
    const std::string path = graphPath.empty() ? c.config : graphPath;
    if (path.empty()) throw Error(ErrorCode::ConfigInvalid, "a graph file is required");
    const LabeledGraph g = io::graph_from_json(io::read_json(path));
    const RotationPolytope p = cycle_mean_polytope(g);
    Json out = io::polytope_json(p);
    if (!target.empty()) {
        Json t = Json::array();
        std::stringstream ss(target);
        for (std::string item; std::getline(ss, item, ',');) t.push_back(item);
        const HomologyVector v = io::vector_from_json(t, "--target");
        if (v.dim() != g.label_dim()) throw Error(ErrorCode::ConfigInvalid, "--target: dimension differs from the labels");
        const auto walk = realize_rational(g, v);
        out["target"] = io::vector_json(v);
        out["walk"] = walk ? io::walk_json(g, *walk) : Json(nullptr);
    }
    if (c.format == "csv") {
        std::ostringstream os;
        for (const auto& v : p.vertices) {
            for (std::size_t i = 0; i < v.dim(); ++i) os << (i ? "," : "") << v[i].str();
            os << "\n";
        }
        emit(c, "polytope.csv", os.str());
    } else {
        emit(c, "polytope.json", io::dump(out));
    }
    std::cerr << "dimension " << p.dimension << ", " << p.vertices.size() << " vertices\n";
    return kOk;
}

int cmd_torus(const Common& c, double alpha, double T, double h, std::size_t length) {
    const OxtobyField F{alpha};
    const TorusPoint seeds[2] = {TorusPoint::from_lift(0.31, 0.72), TorusPoint::from_lift(0.5, 0.1)};
    std::vector<TorusRotation> rot;
    for (const auto& s : seeds) rot.push_back(torus_rotation_vector(F, s, T, h));
    const CuttingSequence cut = cutting_sequence(alpha, length);
    const double target = 1 / (alpha + 1);
    const bool slopeOk = std::abs(rot[0].slope() / alpha - 1) <= 0.02;
    const bool seedsOk = std::abs(rot[0].slope() / rot[1].slope() - 1) <= 0.02;
    const bool densityOk = std::abs(cut.b_density / target - 1) <= 0.01;
    const bool pass = slopeOk && seedsOk && densityOk;
    if (c.format == "csv") {
        emit(c, "torus-rotation.csv", io::torus_csv(rot[0]));
    } else {
        Json runs = Json::array();
        for (std::size_t i = 0; i < rot.size(); ++i)
            runs.push_back({{"seed", Json::array({seeds[i].x, seeds[i].y})}, {"v1", rot[i].v1}, {"v2", rot[i].v2}, {"slope", rot[i].slope()}, {"tailSpread", rot[i].tail_spread}});
        emit(c, "torus.json", io::dump(Json{{"alpha", alpha}, {"T", T}, {"h", h}, {"rotation", runs},
                                             {"cutting", {{"length", length}, {"bDensity", cut.b_density}, {"expected", target}}}, {"pass", pass}}));
    }
    emit_file(c, "torus-rotation-1.csv", io::torus_csv(rot[1]));
    emit_file(c, "cutting.txt", cut.word + "\n");
    std::cerr << "slope " << rot[0].slope() << " and " << rot[1].slope() << " against alpha " << alpha << "; b-density " << cut.b_density << " against "
              << target << (pass ? "  PASS\n" : "  FAIL\n");
    return pass ? kOk : kAssertion;
}

int exit_code(const Error& e) {
    switch (e.code()) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::UnknownScenario:
    case ErrorCode::Io:
    case ErrorCode::GenusTooSmall:
    case ErrorCode::InvalidPush:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::DegenerateSlope: return kConfig;
    default: return kNumerical;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotation theory experiments on closed hyperbolic surfaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common c;
    const auto common = [&](CLI::App* sub, bool config) {
        if (config) sub->add_option("config,--config", c.config, "JSON configuration file");
        sub->add_option("--out", c.out, "output directory (stdout when omitted)");
        sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--jobs", c.jobs, "parallel orbits")->check(CLI::PositiveNumber);
        sub->add_option("--seed-grid", c.seed_grid, "replace the seeds by a k x k grid over the domain")->check(CLI::PositiveNumber);
    };

    std::size_t trials = 10000;
    std::uint64_t rngSeed = 1;
    auto* selftest = app.add_subcommand("selftest-geom", "random-triangle identities of the disk model");
    common(selftest, false);
    selftest->add_option("--trials", trials)->check(CLI::PositiveNumber);
    selftest->add_option("--rng-seed", rngSeed);

    int genus = 2;
    auto* build = app.add_subcommand("build-surface", "regular 4g-gon group as JSON");
    common(build, false);
    build->add_option("--genus", genus)->check(CLI::Range(2, 64));

    auto* simulate = app.add_subcommand("simulate", "orbits of a push scenario");
    common(simulate, true);
    auto* estimate = app.add_subcommand("estimate", "speed, tracking geodesic and rotation vector per seed");
    common(estimate, true);
    auto* classify = app.add_subcommand("classify", "equivalence classes and their shape checks");
    common(classify, true);

    std::string graphPath, target;
    auto* polytope = app.add_subcommand("polytope", "rotation polytope of a labeled transition graph");
    common(polytope, false);
    polytope->add_option("graph,--graph", graphPath, "LabeledGraph JSON");
    polytope->add_option("--config", c.config, "same as the positional graph");
    polytope->add_option("--target", target, "comma separated rationals to realize by a closed walk");

    double alpha = (std::sqrt(5.0) - 1) / 2, T = 1e4, h = 1e-3;
    std::size_t length = 100000;
    auto* torus = app.add_subcommand("torus", "Oxtoby flow rotation vector and Sturmian cutting sequence");
    common(torus, false);
    torus->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    torus->add_option("--time", T)->check(CLI::PositiveNumber);
    torus->add_option("--step", h)->check(CLI::PositiveNumber);
    torus->add_option("--length", length)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    if (*selftest && selftest->count("--format") == 0) c.format = "csv";

    try {
        if (*selftest) return cmd_selftest(c, trials, rngSeed);
        if (*build) return cmd_build_surface(c, genus);
        if (*simulate) return cmd_simulate(c);
        if (*estimate) return cmd_estimate(c);
        if (*classify) return cmd_classify(c);
        if (*polytope) return cmd_polytope(c, graphPath, target);
        if (*torus) return cmd_torus(c, alpha, T, h, length);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kOk;
}

#include "rotlab/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rotlab::io {

std::string format_number(double v) {
    if (!std::isfinite(v)) throw Error(ErrorCode::Io, "refusing to emit a non-finite number");
    if (v == 0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

void render(const Json& j, std::string& out, int depth) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(it.key()).dump() + ": ";
            render(it.value(), out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // arrays of scalars stay on one line
        const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
        out += flat ? "[" : "[\n";
        bool first = true;
        for (const auto& e : j) {
            if (!first) out += flat ? ", " : ",\n";
            first = false;
            if (!flat) out += pad;
            render(e, out, depth + 1);
        }
        out += flat ? "]" : "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float: out += format_number(j.get<double>()); return;
    default: out += j.dump(); return;
    }
}

const Json& field(const Json& j, const char* name, const std::string& where) {
    if (!j.is_object() || !j.contains(name)) throw Error(ErrorCode::ConfigInvalid, where + ": missing field '" + name + "'");
    return j.at(name);
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw Error(ErrorCode::ConfigInvalid, where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw Error(ErrorCode::ConfigInvalid, where + ": expected a finite number");
    return v;
}

Json angle_pair(const Point& p) { return Json::array({p.z().real(), p.z().imag()}); }

} // namespace

std::string dump(const Json& j) {
    std::string out;
    render(j, out, 0);
    out += "\n";
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // locate the byte offset as line and column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorCode::ConfigInvalid, origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

Json read_json(const std::filesystem::path& path) { return parse_json(read_text(path), path.string()); }

Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        try {
            const auto slash = s.find('/');
            if (slash == std::string::npos) return Rational(BigInt(s));
            const BigInt den(s.substr(slash + 1));
            if (den == 0) throw Error(ErrorCode::ConfigInvalid, where + ": zero denominator");
            return Rational(BigInt(s.substr(0, slash)), den);
        } catch (const std::runtime_error&) {
            throw Error(ErrorCode::ConfigInvalid, where + ": '" + s + "' is not a rational");
        }
    }
    throw Error(ErrorCode::ConfigInvalid, where + ": expected an integer or a \"p/q\" string");
}

Json rational_json(const Rational& q) {
    const BigInt num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
    if (den == 1 && num >= std::numeric_limits<long long>::min() && num <= std::numeric_limits<long long>::max()) return num.convert_to<long long>();
    return q.str();
}

HomologyVector vector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorCode::ConfigInvalid, where + ": expected an array");
    std::vector<Rational> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return HomologyVector(std::move(c));
}

Json vector_json(const HomologyVector& v) {
    Json out = Json::array();
    for (const auto& c : v.coords()) out.push_back(rational_json(c));
    return out;
}

LabeledGraph graph_from_json(const Json& j) {
    LabeledGraph g;
    const Json& nodes = field(j, "nodes", "graph");
    if (!nodes.is_array() || nodes.empty()) throw Error(ErrorCode::ConfigInvalid, "graph: 'nodes' must be a nonempty array");
    for (const auto& n : nodes) {
        if (!n.is_string()) throw Error(ErrorCode::ConfigInvalid, "graph: node names must be strings");
        g.nodes.push_back(n.get<std::string>());
    }
    const auto endpoint = [&](const Json& e, const std::string& where) {
        if (e.is_string()) return g.node_index(e.get<std::string>());
        if (e.is_number_integer() && e.get<long long>() >= 0 && e.get<long long>() < static_cast<long long>(g.nodes.size())) return static_cast<int>(e.get<long long>());
        throw Error(ErrorCode::ConfigInvalid, where + ": not a node");
    };
    const Json& edges = field(j, "edges", "graph");
    if (!edges.is_array()) throw Error(ErrorCode::ConfigInvalid, "graph: 'edges' must be an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "graph.edges[" + std::to_string(i) + "]";
        g.edges.push_back({endpoint(field(edges[i], "from", where), where + ".from"), endpoint(field(edges[i], "to", where), where + ".to"),
                           vector_from_json(field(edges[i], "label", where), where + ".label")});
        if (g.edges.back().label.dim() != g.edges.front().label.dim()) throw Error(ErrorCode::DimensionMismatch, where + ": label dimension differs");
    }
    return g;
}

Json graph_json(const LabeledGraph& g) {
    Json edges = Json::array();
    for (const auto& e : g.edges) edges.push_back({{"from", g.nodes[e.from]}, {"to", g.nodes[e.to]}, {"label", vector_json(e.label)}});
    return {{"nodes", g.nodes}, {"edges", edges}};
}

Json polytope_json(const RotationPolytope& p) {
    Json vertices = Json::array(), facets = Json::array(), means = Json::array();
    for (const auto& v : p.vertices) vertices.push_back(vector_json(v));
    for (const auto& m : p.means) means.push_back(vector_json(m));
    for (const auto& f : p.facets) facets.push_back({{"normal", vector_json(HomologyVector(f.normal))}, {"offset", rational_json(f.offset)}});
    return {{"dimension", p.dimension}, {"vertices", vertices}, {"facets", facets}, {"cycleMeans", means}};
}

Json walk_json(const LabeledGraph& g, const ClosedWalk& w) {
    Json edges = Json::array();
    for (int e : w.edges) edges.push_back(e);
    return {{"node", g.nodes[w.node]}, {"edges", edges}, {"period", w.edges.size()}, {"mean", vector_json(w.mean)}};
}

Json group_json(const SurfaceGroup& G) {
    Json gens = Json::array();
    for (Letter l = 1; l <= 2 * G.genus(); ++l) {
        const Iso& g = G.generator(l);
        // the matrix is exp(logScale) [[a, b], [conj b, conj a]]
        const double t = std::tanh(g.half_distance());
        const std::complex<double> b = t * g.unit_b();
        gens.push_back({{"name", letter_name(l)},
                        {"logScale", g.log_scale()},
                        {"a", Json::array({g.unit_a().real(), g.unit_a().imag()})},
                        {"b", Json::array({b.real(), b.imag()})},
                        {"translationLength", g.translation_length()}});
    }
    Json vertices = Json::array();
    for (const auto& v : G.domain_vertices()) vertices.push_back(angle_pair(v));
    return {{"genus", G.genus()},
            {"generators", gens},
            {"relator", G.relator().str()},
            {"domainVertices", vertices},
            {"vertexRadius", G.vertex_radius()},
            {"sideDistance", G.side_distance()},
            {"domainArea", G.domain_area()}};
}

PushSpec push_from_json(const Json& j) {
    static const std::set<std::string> known{"coreWord", "speed", "bumpRadius", "profile"};
    if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "push: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) throw Error(ErrorCode::ConfigInvalid, "push: unknown field '" + it.key() + "'");
    }
    PushSpec p;
    const Json& core = field(j, "coreWord", "push");
    if (!core.is_string()) throw Error(ErrorCode::ConfigInvalid, "push.coreWord: expected a string");
    p.core = Word::parse(core.get<std::string>());
    p.speed = number(field(j, "speed", "push"), "push.speed");
    if (j.contains("bumpRadius")) {
        p.bump_radius = number(j["bumpRadius"], "push.bumpRadius");
        if (p.bump_radius < 0) throw Error(ErrorCode::ConfigInvalid, "push.bumpRadius: must be nonnegative");
    }
    if (j.contains("profile")) {
        if (!j["profile"].is_string()) throw Error(ErrorCode::ConfigInvalid, "push.profile: expected a string");
        p.profile = parse_profile(j["profile"].get<std::string>());
    }
    return p;
}

Json push_json(const PushSpec& p) {
    return {{"coreWord", p.core.str()}, {"speed", p.speed}, {"bumpRadius", p.bump_radius}, {"profile", profile_name(p.profile)}};
}

Json point_json(const Point& p) { return angle_pair(p); }

namespace {

Json branch_json(const OrbitBranch& b) {
    Json points = Json::array(), words = Json::array();
    for (const auto& p : b.points) points.push_back(angle_pair(p));
    for (const auto& w : b.words) words.push_back(w.str());
    return {{"points", points}, {"words", words}, {"L", b.L}};
}

} // namespace

Json orbit_json(const OrbitRecord& rec) {
    Json out{{"seed", angle_pair(rec.seed)}, {"genus", rec.genus}, {"N", rec.N()}, {"forward", branch_json(rec.forward)}};
    if (!rec.backward.empty()) out["backward"] = branch_json(rec.backward);
    return out;
}

Json tracking_json(const TrackingEstimate& est) {
    Json out{{"status", status_name(est.status)}, {"thetaForward", est.theta_forward}, {"thetaBackward", est.theta_backward}};
    if ((est.status == TrackingStatus::Tracked || est.status == TrackingStatus::Unresolved) && std::isfinite(est.endpoint_uncertainty))
        out["endpointUncertainty"] = est.endpoint_uncertainty;
    if (est.status == TrackingStatus::Tracked) {
        out["alpha"] = est.alpha.theta();
        out["omega"] = est.omega.theta();
        out["origin"] = angle_pair(est.geodesic.origin());
        if (est.residuals.size() > 1) {
            out["residualFinal"] = est.residuals.back();
            const DecadeTrend trend = decade_trend(est.residuals);
            out["residualTrend"] = {{"firstDecade", trend.first}, {"lastDecade", trend.last}, {"decreasing", trend.decreasing}};
        }
    }
    return out;
}

Json partition_json(const ClassPartition& p) {
    Json classes = Json::array();
    for (std::size_t i = 0; i < p.classes.size(); ++i) classes.push_back({{"labels", p.classes[i]}, {"kind", kind_name(p.kinds[i])}});
    return classes;
}

Json report_json(const TheoremAReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"checks", checks}, {"spanDimensions", r.span_dimensions}, {"pass", r.all_pass()}};
}

std::string series_csv(const OrbitRecord& rec, const SpeedEstimate& speed, const TrackingEstimate& est) {
    const std::size_t dim = 2 * static_cast<std::size_t>(rec.genus);
    std::ostringstream os;
    os << "n,L_n,theta_n,residual_n";
    for (std::size_t i = 0; i < dim; ++i) os << ",h" << i + 1;
    os << "\n";
    for (std::size_t n = 0; n <= rec.N(); ++n) {
        os << n << "," << format_number(rec.forward.L[n]) << "," << (n ? format_number(speed.series[n]) : "0") << ",";
        if (n && n < est.residuals.size()) os << format_number(est.residuals[n]);
        else if (n == 0) os << "0";
        for (std::size_t i = 0; i < dim; ++i) os << "," << rec.forward.homology[n * dim + i];
        os << "\n";
    }
    return os.str();
}

std::string torus_csv(const TorusRotation& r) {
    std::ostringstream os;
    os << "time,v1,v2\n";
    for (const auto& e : r.series) os << format_number(e.time) << "," << format_number(e.v1) << "," << format_number(e.v2) << "\n";
    return os.str();
}

ScenarioConfig config_from_json(const Json& j) {
    static const std::set<std::string> known{"genus", "scenario", "maps", "seeds", "N", "step", "speedFloor", "gapFloor", "thetaMin", "backward"};
    if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "config: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) throw Error(ErrorCode::ConfigInvalid, "config: unknown field '" + it.key() + "'");
    }
    ScenarioConfig c;
    if (j.contains("genus")) {
        if (!j["genus"].is_number_integer() || j["genus"].get<int>() < 2) throw Error(ErrorCode::ConfigInvalid, "config.genus: expected an integer >= 2");
        c.genus = j["genus"].get<int>();
    }
    if (j.contains("scenario") == j.contains("maps")) throw Error(ErrorCode::ConfigInvalid, "config: give exactly one of 'scenario' and 'maps'");
    if (j.contains("scenario")) {
        if (!j["scenario"].is_string()) throw Error(ErrorCode::ConfigInvalid, "config.scenario: expected a string");
        c.scenario = j["scenario"].get<std::string>();
    } else {
        const Json& maps = j["maps"];
        if (!maps.is_array() || maps.empty()) throw Error(ErrorCode::ConfigInvalid, "config.maps: expected a nonempty array of push lists");
        for (std::size_t m = 0; m < maps.size(); ++m) {
            if (!maps[m].is_array() || maps[m].empty()) throw Error(ErrorCode::ConfigInvalid, "config.maps[" + std::to_string(m) + "]: expected a nonempty array of pushes");
            c.maps.emplace_back();
            for (const auto& p : maps[m]) {
                try {
                    c.maps.back().push_back(push_from_json(p));
                } catch (const Error& e) {
                    throw Error(ErrorCode::ConfigInvalid, "config.maps[" + std::to_string(m) + "]: " + e.what());
                }
            }
        }
    }
    if (j.contains("seeds")) {
        const Json& s = j["seeds"];
        if (s.is_string()) {
            const std::string v = s.get<std::string>();
            if (v == "scenario") c.seed_mode = ScenarioConfig::Seeds::Scenario;
            else if (v.rfind("grid:", 0) == 0) {
                c.seed_mode = ScenarioConfig::Seeds::Grid;
                try {
                    c.grid = std::stoi(v.substr(5));
                } catch (const std::exception&) {
                    c.grid = 0;
                }
                if (c.grid < 1) throw Error(ErrorCode::ConfigInvalid, "config.seeds: grid size must be a positive integer");
            } else {
                throw Error(ErrorCode::ConfigInvalid, "config.seeds: expected \"scenario\", \"grid:k\" or a list of points");
            }
        } else if (s.is_array()) {
            c.seed_mode = ScenarioConfig::Seeds::List;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const std::string where = "config.seeds[" + std::to_string(i) + "]";
                if (!s[i].is_array() || s[i].size() != 2) throw Error(ErrorCode::ConfigInvalid, where + ": expected [x, y]");
                const double x = number(s[i][0], where), y = number(s[i][1], where);
                if (x * x + y * y >= 1) throw Error(ErrorCode::ConfigInvalid, where + ": outside the disk");
                c.seeds.emplace_back(x, y);
            }
        } else {
            throw Error(ErrorCode::ConfigInvalid, "config.seeds: expected a string or an array");
        }
    }
    if (c.seed_mode == ScenarioConfig::Seeds::Scenario && c.scenario.empty())
        throw Error(ErrorCode::ConfigInvalid, "config.seeds: explicit maps need explicit seeds or a grid");
    if (j.contains("N")) {
        if (!j["N"].is_number_integer() || j["N"].get<long long>() < 10) throw Error(ErrorCode::ConfigInvalid, "config.N: expected an integer >= 10");
        c.N = j["N"].get<std::size_t>();
    }
    const auto positive = [&](const char* name, double& target) {
        if (!j.contains(name)) return;
        target = number(j[name], std::string("config.") + name);
        if (!(target > 0)) throw Error(ErrorCode::ConfigInvalid, std::string("config.") + name + ": must be positive");
    };
    positive("step", c.step);
    positive("speedFloor", c.speed_floor);
    positive("gapFloor", c.gap_floor);
    positive("thetaMin", c.theta_min);
    if (j.contains("backward")) {
        if (!j["backward"].is_boolean()) throw Error(ErrorCode::ConfigInvalid, "config.backward: expected a boolean");
        c.backward = j["backward"].get<bool>();
    }
    return c;
}

Json config_json(const ScenarioConfig& c) {
    Json out{{"genus", c.genus}, {"N", c.N}, {"step", c.step}, {"speedFloor", c.speed_floor},
             {"gapFloor", c.gap_floor}, {"thetaMin", c.theta_min}, {"backward", c.backward}};
    if (!c.scenario.empty()) out["scenario"] = c.scenario;
    else {
        Json maps = Json::array();
        for (const auto& m : c.maps) {
            Json pushes = Json::array();
            for (const auto& p : m) pushes.push_back(push_json(p));
            maps.push_back(pushes);
        }
        out["maps"] = maps;
    }
    switch (c.seed_mode) {
    case ScenarioConfig::Seeds::Scenario: out["seeds"] = "scenario"; break;
    case ScenarioConfig::Seeds::Grid: out["seeds"] = "grid:" + std::to_string(c.grid); break;
    case ScenarioConfig::Seeds::List: {
        Json s = Json::array();
        for (const auto& p : c.seeds) s.push_back(angle_pair(p));
        out["seeds"] = s;
        break;
    }
    }
    return out;
}

std::string content_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

} // namespace rotlab::io

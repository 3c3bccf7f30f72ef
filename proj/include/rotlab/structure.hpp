#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rotlab/estimators.hpp"

namespace rotlab {

inline constexpr double kThetaMin = 0.05;
inline constexpr double kCoincidence = 1e-3;

// tracked geodesics of one orbit or measure, with its rotation vector
struct GeodesicSample {
    std::string label;
    std::vector<TrackingEstimate> geodesics;
    HomologyVector vector;
};

struct SurfaceCrossing {
    Word word;    // g1 meets word . g2
    double angle;  // in (0, pi)
    Point point;
};

// Translates of geodesics by the elements moving 0 at most `radius`.
class TranslateSearch {
public:
    TranslateSearch(const SurfaceGroup& G, double radius, int maxWordLen = 12);

    // radius large enough for crossings near the given geodesics
    static double radius_for(const std::vector<const Geodesic*>& geodesics);

    std::vector<SurfaceCrossing> crossings(const Geodesic& g1, const Geodesic& g2) const;
    // some translate of g2 has endpoints within tol of those of g1
    bool coincident(const Geodesic& g1, const Geodesic& g2, double tol = kCoincidence) const;

private:
    std::vector<Element> elements_;
};

std::vector<SurfaceCrossing> surface_cross(const Geodesic& g1, const Geodesic& g2, const SurfaceGroup& G, int maxWordLen = 8);
std::vector<SurfaceCrossing> surface_cross(const TrackingEstimate& g1, const TrackingEstimate& g2, const SurfaceGroup& G, int maxWordLen = 8);

struct TransverseWitness {
    std::size_t first;   // index into the first sample's geodesics
    std::size_t second;  // index into the second sample's geodesics
    SurfaceCrossing crossing;
};

// crossing angles are measured against the nearer of the two directions
std::optional<TransverseWitness> dynamically_transverse(const GeodesicSample& s1, const GeodesicSample& s2, const TranslateSearch& search, double thetaMin = kThetaMin);
std::optional<TransverseWitness> dynamically_transverse(const GeodesicSample& s1, const GeodesicSample& s2, const SurfaceGroup& G, double thetaMin = kThetaMin);

enum class ClassKind { I1, Iplus };
std::string kind_name(ClassKind k);

struct ClassPartition {
    std::vector<std::vector<std::string>> classes;
    std::vector<ClassKind> kinds;
};

ClassPartition partition_classes(const std::vector<GeodesicSample>& samples, const SurfaceGroup& G, double thetaMin = kThetaMin);

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct TheoremAReport {
    std::vector<CheckResult> checks;
    std::vector<int> span_dimensions;  // per class
    bool all_pass() const;
};

TheoremAReport theorem_a_report(const ClassPartition& p, const std::map<std::string, HomologyVector>& vectors, int genus);

// exact linear algebra on rational vectors
int rank(const std::vector<HomologyVector>& vectors);
std::vector<HomologyVector> span_basis(const std::vector<HomologyVector>& vectors);

struct LabeledGraph {
    struct Edge {
        int from;
        int to;
        HomologyVector label;
    };
    std::vector<std::string> nodes;
    std::vector<Edge> edges;

    int node_index(const std::string& name) const;
    std::size_t label_dim() const;
};

struct Facet {
    std::vector<Rational> normal;
    Rational offset;  // normal . x <= offset on the polytope
};

struct RotationPolytope {
    int dimension = -1;  // of the affine hull; -1 when empty
    std::vector<HomologyVector> vertices;  // sorted
    std::vector<Facet> facets;
    std::vector<HomologyVector> means;  // distinct simple-cycle means

    bool contains(const HomologyVector& v) const;
};

struct CycleBudget {
    int max_nodes = 12;
    int max_edges = 40;
    std::size_t max_cycles = 200000;
};

// Simple directed cycles as edge-index sequences; parallel edges give
// distinct cycles.
std::vector<std::vector<int>> simple_cycles(const LabeledGraph& g, const CycleBudget& budget = {});

HomologyVector walk_mean(const LabeledGraph& g, const std::vector<int>& edges);

RotationPolytope cycle_mean_polytope(const LabeledGraph& g, const CycleBudget& budget = {});

// extreme points of a finite set, by exact linear programming
std::vector<HomologyVector> hull_vertices(const std::vector<HomologyVector>& points);
// whether v is a convex combination of the points
bool in_convex_hull(const std::vector<HomologyVector>& points, const HomologyVector& v);

struct ClosedWalk {
    std::vector<int> edges;
    int node = 0;  // where the walk starts and ends
    HomologyVector mean;
};

std::optional<ClosedWalk> realize_rational(const LabeledGraph& g, const HomologyVector& target, const CycleBudget& budget = {});

} // namespace rotlab

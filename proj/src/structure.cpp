#include "rotlab/structure.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace rotlab {

using hyp::kPi;

namespace {

constexpr double kCrossWindow = 6;

bool same_endpoints(const Geodesic& x, const Geodesic& y, double tol) {
    const auto close = [tol](const Boundary& u, const Boundary& v) { return hyp::angular_distance(u.theta(), v.theta()) <= tol; };
    return (close(x.alpha(), y.alpha()) && close(x.omega(), y.omega())) || (close(x.alpha(), y.omega()) && close(x.omega(), y.alpha()));
}

std::vector<const Geodesic*> tracked(const GeodesicSample& s) {
    std::vector<const Geodesic*> out;
    for (const auto& e : s.geodesics) {
        if (e.status == TrackingStatus::Tracked) out.push_back(&e.geodesic);
    }
    return out;
}

} // namespace

TranslateSearch::TranslateSearch(const SurfaceGroup& G, double radius, int maxWordLen) : elements_(enumerate_ball(G, radius, maxWordLen)) {}

double TranslateSearch::radius_for(const std::vector<const Geodesic*>& geodesics) {
    double d = 0;
    for (const Geodesic* g : geodesics) d = std::max(d, g->distance_to(Point()));
    return 2 * d + kCrossWindow;
}

std::vector<SurfaceCrossing> TranslateSearch::crossings(const Geodesic& g1, const Geodesic& g2) const {
    std::vector<SurfaceCrossing> out;
    std::vector<Geodesic> seen;
    for (const Element& e : elements_) {
        const Geodesic moved = g2.transformed(e.iso);
        const auto c = hyp::cross_angle(g1, moved);
        if (!c) continue;
        if (std::any_of(seen.begin(), seen.end(), [&](const Geodesic& s) { return same_endpoints(s, moved, 1e-9); })) continue;
        seen.push_back(moved);
        out.push_back({e.word, c->angle, c->point});
    }
    return out;
}

bool TranslateSearch::coincident(const Geodesic& g1, const Geodesic& g2, double tol) const {
    return std::any_of(elements_.begin(), elements_.end(), [&](const Element& e) { return same_endpoints(g1, g2.transformed(e.iso), tol); });
}

std::vector<SurfaceCrossing> surface_cross(const Geodesic& g1, const Geodesic& g2, const SurfaceGroup& G, int maxWordLen) {
    const TranslateSearch search(G, TranslateSearch::radius_for({&g1, &g2}), maxWordLen);
    return search.crossings(g1, g2);
}

std::vector<SurfaceCrossing> surface_cross(const TrackingEstimate& g1, const TrackingEstimate& g2, const SurfaceGroup& G, int maxWordLen) {
    if (g1.status != TrackingStatus::Tracked || g2.status != TrackingStatus::Tracked)
        throw Error(ErrorCode::ConfigInvalid, "crossings need tracked geodesics");
    return surface_cross(g1.geodesic, g2.geodesic, G, maxWordLen);
}

std::optional<TransverseWitness> dynamically_transverse(const GeodesicSample& s1, const GeodesicSample& s2, const TranslateSearch& search, double thetaMin) {
    for (std::size_t i = 0; i < s1.geodesics.size(); ++i) {
        if (s1.geodesics[i].status != TrackingStatus::Tracked) continue;
        for (std::size_t j = 0; j < s2.geodesics.size(); ++j) {
            if (s2.geodesics[j].status != TrackingStatus::Tracked) continue;
            for (const SurfaceCrossing& c : search.crossings(s1.geodesics[i].geodesic, s2.geodesics[j].geodesic)) {
                if (std::min(c.angle, kPi<double> - c.angle) >= thetaMin) return TransverseWitness{i, j, c};
            }
        }
    }
    return std::nullopt;
}

std::optional<TransverseWitness> dynamically_transverse(const GeodesicSample& s1, const GeodesicSample& s2, const SurfaceGroup& G, double thetaMin) {
    std::vector<const Geodesic*> all = tracked(s1);
    for (const Geodesic* g : tracked(s2)) all.push_back(g);
    if (all.empty()) return std::nullopt;
    const TranslateSearch search(G, TranslateSearch::radius_for(all));
    return dynamically_transverse(s1, s2, search, thetaMin);
}

std::string kind_name(ClassKind k) { return k == ClassKind::I1 ? "I1" : "Iplus"; }

ClassPartition partition_classes(const std::vector<GeodesicSample>& samples, const SurfaceGroup& G, double thetaMin) {
    ClassPartition out;
    const std::size_t n = samples.size();
    if (n == 0) return out;
    std::vector<const Geodesic*> all;
    for (const auto& s : samples) {
        for (const Geodesic* g : tracked(s)) all.push_back(g);
    }
    std::optional<TranslateSearch> search;
    if (!all.empty()) search.emplace(G, TranslateSearch::radius_for(all));

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    const std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };

    const auto coincide = [&](const GeodesicSample& a, const GeodesicSample& b) {
        const auto ga = tracked(a), gb = tracked(b);
        if (ga.empty() || gb.empty()) return false;
        const auto covered = [&](const std::vector<const Geodesic*>& xs, const std::vector<const Geodesic*>& ys) {
            return std::all_of(xs.begin(), xs.end(), [&](const Geodesic* x) {
                return std::any_of(ys.begin(), ys.end(), [&](const Geodesic* y) { return search->coincident(*x, *y); });
            });
        };
        return covered(ga, gb) && covered(gb, ga);
    };

    std::vector<bool> transverse_inside(n, false);
    std::vector<std::pair<std::size_t, std::size_t>> transverse_pairs;
    for (std::size_t i = 0; i < n && search; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const bool t = dynamically_transverse(samples[i], samples[j], *search, thetaMin).has_value();
            if (t) transverse_pairs.emplace_back(i, j);
            if (j != i && (t || coincide(samples[i], samples[j]))) parent[find(i)] = find(j);
        }
    }
    std::map<std::size_t, std::size_t> class_of_root;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (!class_of_root.count(r)) {
            class_of_root[r] = out.classes.size();
            out.classes.emplace_back();
            out.kinds.push_back(ClassKind::I1);
        }
        out.classes[class_of_root[r]].push_back(samples[i].label);
    }
    for (const auto& [i, j] : transverse_pairs) out.kinds[class_of_root[find(i)]] = ClassKind::Iplus;
    return out;
}

bool TheoremAReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

// reduced row echelon form; returns the pivot rows
std::vector<std::vector<Rational>> echelon(std::vector<std::vector<Rational>> rows) {
    std::vector<std::vector<Rational>> out;
    if (rows.empty()) return out;
    const std::size_t cols = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        const Rational inv = 1 / rows[r][c];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const Rational f = rows[i][c];
            for (std::size_t k = 0; k < cols; ++k) rows[i][k] -= f * rows[r][k];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// one line through 0 per nonzero vector, keyed by the vector scaled so its
// first nonzero entry is 1
std::vector<Rational> line_key(const HomologyVector& v) {
    std::vector<Rational> k = v.coords();
    for (const Rational& c : v.coords()) {
        if (c != 0) {
            const Rational s = c;
            for (auto& x : k) x /= s;
            break;
        }
    }
    return k;
}

} // namespace

int rank(const std::vector<HomologyVector>& vectors) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& v : vectors) rows.push_back(v.coords());
    return static_cast<int>(echelon(rows).size());
}

std::vector<HomologyVector> span_basis(const std::vector<HomologyVector>& vectors) {
    std::vector<HomologyVector> basis;
    int r = 0;
    for (const auto& v : vectors) {
        basis.push_back(v);
        const int nr = rank(basis);
        if (nr == r) basis.pop_back();
        else r = nr;
    }
    return basis;
}

TheoremAReport theorem_a_report(const ClassPartition& p, const std::map<std::string, HomologyVector>& vectors, int genus) {
    TheoremAReport rep;
    const auto vec = [&](const std::string& label) -> const HomologyVector* {
        const auto it = vectors.find(label);
        return it == vectors.end() ? nullptr : &it->second;
    };

    CheckResult present{"vectors present", true, ""};
    for (const auto& cls : p.classes) {
        for (const auto& l : cls) {
            if (!vec(l)) {
                present.pass = false;
                present.detail += "missing " + l + "; ";
            } else if (vec(l)->dim() != 2 * static_cast<std::size_t>(genus)) {
                present.pass = false;
                present.detail += "wrong dimension for " + l + "; ";
            }
        }
    }
    rep.checks.push_back(present);
    if (!present.pass) return rep;

    CheckResult cross{"cross-class wedge", true, ""};
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
        for (std::size_t j = i + 1; j < p.classes.size(); ++j) {
            for (const auto& a : p.classes[i]) {
                for (const auto& b : p.classes[j]) {
                    const Rational w = wedge(*vec(a), *vec(b));
                    if (w != 0 && cross.pass) {
                        cross.pass = false;
                        std::ostringstream os;
                        os << a << " ^ " << b << " = " << w;
                        cross.detail = os.str();
                    }
                }
            }
        }
    }
    rep.checks.push_back(cross);

    CheckResult inner{"I1 classes isotropic", true, ""};
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
        if (p.kinds[i] != ClassKind::I1) continue;
        for (const auto& a : p.classes[i]) {
            for (const auto& b : p.classes[i]) {
                if (wedge(*vec(a), *vec(b)) != 0 && inner.pass) {
                    inner.pass = false;
                    inner.detail = a + " and " + b + " intersect but share an I1 class";
                }
            }
        }
    }
    rep.checks.push_back(inner);

    const long n1 = std::count(p.kinds.begin(), p.kinds.end(), ClassKind::I1);
    const long np = std::count(p.kinds.begin(), p.kinds.end(), ClassKind::Iplus);
    const auto count_check = [](std::string name, long value, long bound) {
        return CheckResult{std::move(name), value <= bound, std::to_string(value) + " <= " + std::to_string(bound)};
    };
    rep.checks.push_back(count_check("card I1", n1, 3L * genus - 3));
    rep.checks.push_back(count_check("card Iplus", np, 2L * genus - 2));
    rep.checks.push_back(count_check("card I", n1 + np, 5L * genus - 5));

    std::set<std::vector<Rational>> lines;
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
        if (p.kinds[i] != ClassKind::I1) continue;
        for (const auto& a : p.classes[i]) {
            if (!vec(a)->is_zero()) lines.insert(line_key(*vec(a)));
        }
    }
    rep.checks.push_back(count_check("I1 lines", static_cast<long>(lines.size()), 3L * genus - 3));

    CheckResult rational{"rational span basis", true, ""};
    for (const auto& cls : p.classes) {
        std::vector<HomologyVector> vs;
        for (const auto& a : cls) vs.push_back(*vec(a));
        const auto basis = span_basis(vs);
        rep.span_dimensions.push_back(static_cast<int>(basis.size()));
        // clearing denominators turns the basis into integer classes
        for (const auto& b : basis) {
            BigInt l = 1;
            for (const auto& c : b.coords()) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(c));
            const HomologyVector scaled = b * Rational(l);
            for (const auto& c : scaled.coords()) {
                if (boost::multiprecision::denominator(c) != 1) rational.pass = false;
            }
        }
        if (!rational.detail.empty()) rational.detail += ",";
        rational.detail += std::to_string(basis.size());
    }
    rational.detail = "span dimensions " + rational.detail;
    rep.checks.push_back(rational);
    return rep;
}

int LabeledGraph::node_index(const std::string& name) const {
    const auto it = std::find(nodes.begin(), nodes.end(), name);
    if (it == nodes.end()) throw Error(ErrorCode::ConfigInvalid, "unknown node '" + name + "'");
    return static_cast<int>(it - nodes.begin());
}

std::size_t LabeledGraph::label_dim() const { return edges.empty() ? 0 : edges.front().label.dim(); }

namespace {

void check_graph(const LabeledGraph& g, const CycleBudget& budget) {
    if (static_cast<int>(g.nodes.size()) > budget.max_nodes || static_cast<int>(g.edges.size()) > budget.max_edges)
        throw Error(ErrorCode::BudgetExceeded, "graph exceeds the cycle enumeration budget");
    const std::size_t d = g.label_dim();
    for (const auto& e : g.edges) {
        if (e.from < 0 || e.to < 0 || e.from >= static_cast<int>(g.nodes.size()) || e.to >= static_cast<int>(g.nodes.size()))
            throw Error(ErrorCode::ConfigInvalid, "edge endpoint out of range");
        if (e.label.dim() != d) throw Error(ErrorCode::DimensionMismatch, "edge labels of different dimension");
    }
}

// Johnson's algorithm on the graph with parallel edges collapsed
std::vector<std::vector<int>> node_cycles(int n, const std::vector<std::vector<int>>& adj, std::size_t cap) {
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        // strongly connected component of s among nodes >= s
        const auto reach = [&](bool forward) {
            std::vector<bool> seen(n, false);
            std::vector<int> stack{s};
            seen[s] = true;
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                for (int w = s; w < n; ++w) {
                    const bool edge = forward ? std::count(adj[v].begin(), adj[v].end(), w) > 0 : std::count(adj[w].begin(), adj[w].end(), v) > 0;
                    if (edge && !seen[w]) {
                        seen[w] = true;
                        stack.push_back(w);
                    }
                }
            }
            return seen;
        };
        const auto fw = reach(true), bw = reach(false);
        std::vector<bool> in(n, false);
        for (int v = s; v < n; ++v) in[v] = fw[v] && bw[v];

        std::vector<bool> blocked(n, false);
        std::vector<std::set<int>> B(n);
        std::vector<int> stack;
        std::function<void(int)> unblock = [&](int u) {
            blocked[u] = false;
            while (!B[u].empty()) {
                const int w = *B[u].begin();
                B[u].erase(B[u].begin());
                if (blocked[w]) unblock(w);
            }
        };
        std::function<bool(int)> circuit = [&](int v) {
            bool found = false;
            stack.push_back(v);
            blocked[v] = true;
            for (int w : adj[v]) {
                if (!in[w]) continue;
                if (w == s) {
                    out.push_back(stack);
                    if (out.size() > cap) throw Error(ErrorCode::BudgetExceeded, "too many simple cycles");
                    found = true;
                } else if (!blocked[w] && circuit(w)) {
                    found = true;
                }
            }
            if (found) unblock(v);
            else {
                for (int w : adj[v]) {
                    if (in[w]) B[w].insert(v);
                }
            }
            stack.pop_back();
            return found;
        };
        circuit(s);
    }
    return out;
}

} // namespace

std::vector<std::vector<int>> simple_cycles(const LabeledGraph& g, const CycleBudget& budget) {
    check_graph(g, budget);
    const int n = static_cast<int>(g.nodes.size());
    std::vector<std::vector<int>> adj(n);
    std::map<std::pair<int, int>, std::vector<int>> parallel;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
        const auto& e = g.edges[i];
        auto& list = parallel[{e.from, e.to}];
        if (list.empty()) adj[e.from].push_back(e.to);
        list.push_back(i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<std::vector<int>> out;
    for (const auto& cyc : node_cycles(n, adj, budget.max_cycles)) {
        // every choice of parallel edge along the cycle
        std::vector<std::vector<int>> partial{{}};
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            const auto& options = parallel[{cyc[i], cyc[(i + 1) % cyc.size()]}];
            std::vector<std::vector<int>> next;
            for (const auto& p : partial) {
                for (int e : options) {
                    next.push_back(p);
                    next.back().push_back(e);
                }
            }
            partial = std::move(next);
            if (partial.size() + out.size() > budget.max_cycles) throw Error(ErrorCode::BudgetExceeded, "too many simple cycles");
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    return out;
}

HomologyVector walk_mean(const LabeledGraph& g, const std::vector<int>& edges) {
    HomologyVector s(g.label_dim());
    for (int e : edges) s += g.edges[e].label;
    return s / Rational(static_cast<long long>(edges.size()));
}

namespace {

// Phase one of the simplex method with Bland's rule: is there lambda >= 0
// with A lambda = b?
bool feasible(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    // columns: n structural, m artificial, then the right-hand side
    std::vector<std::vector<Rational>> T(m, std::vector<Rational>(n + m + 1, Rational(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = b[i] < 0;
        for (std::size_t j = 0; j < n; ++j) T[i][j] = flip ? Rational(-A[i][j]) : A[i][j];
        T[i][n + i] = 1;
        T[i][n + m] = flip ? Rational(-b[i]) : b[i];
        basis[i] = n + i;
    }
    // reduced costs of the phase-one objective (sum of artificials)
    std::vector<Rational> cost(n + m + 1, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) cost[j] -= T[i][j];
        cost[n + m] -= T[i][n + m];
    }
    for (;;) {
        std::size_t enter = n + m;
        for (std::size_t j = 0; j < n + m; ++j) {
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == n + m) break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] <= 0) continue;
            const Rational ratio = T[i][n + m] / T[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) break;  // unbounded cannot happen in phase one
        const Rational piv = T[leave][enter];
        for (auto& x : T[leave]) x /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || T[i][enter] == 0) continue;
            const Rational f = T[i][enter];
            for (std::size_t j = 0; j <= n + m; ++j) T[i][j] -= f * T[leave][j];
        }
        const Rational f = cost[enter];
        for (std::size_t j = 0; j <= n + m; ++j) cost[j] -= f * T[leave][j];
        basis[leave] = enter;
    }
    return cost[n + m] == 0;
}

std::vector<HomologyVector> distinct(std::vector<HomologyVector> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

bool in_convex_hull(const std::vector<HomologyVector>& points, const HomologyVector& v) {
    if (points.empty()) return false;
    const std::size_t d = v.dim();
    std::vector<std::vector<Rational>> A(d + 1, std::vector<Rational>(points.size(), Rational(0)));
    std::vector<Rational> b(d + 1);
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (points[j].dim() != d) throw Error(ErrorCode::DimensionMismatch, "points of different dimension");
        for (std::size_t i = 0; i < d; ++i) A[i][j] = points[j][i];
        A[d][j] = 1;
    }
    for (std::size_t i = 0; i < d; ++i) b[i] = v[i];
    b[d] = 1;
    return feasible(A, b);
}

std::vector<HomologyVector> hull_vertices(const std::vector<HomologyVector>& points) {
    const auto pts = distinct(points);
    std::vector<HomologyVector> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<HomologyVector> others;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j != i) others.push_back(pts[j]);
        }
        if (!in_convex_hull(others, pts[i])) out.push_back(pts[i]);
    }
    return out;
}

bool RotationPolytope::contains(const HomologyVector& v) const {
    if (vertices.empty()) return false;
    std::vector<HomologyVector> dirs;
    for (std::size_t i = 1; i < vertices.size(); ++i) dirs.push_back(vertices[i] - vertices[0]);
    const int r = rank(dirs);
    dirs.push_back(v - vertices[0]);
    if (rank(dirs) != r) return false;
    for (const Facet& f : facets) {
        if (dot(f.normal, v.coords()) > f.offset) return false;
    }
    return true;
}

namespace {

std::vector<Facet> facets_of(const std::vector<HomologyVector>& vertices, int dim) {
    std::vector<Facet> out;
    if (dim <= 0) return out;
    std::vector<HomologyVector> dirs;
    for (std::size_t i = 1; i < vertices.size(); ++i) dirs.push_back(vertices[i] - vertices[0]);
    const auto basis = span_basis(dirs);
    const std::size_t k = basis.size();
    const std::size_t d = vertices[0].dim();
    std::set<std::pair<std::vector<Rational>, Rational>> seen;

    // every k-subset spanning a hyperplane of the affine hull
    std::vector<std::size_t> idx(k);
    const std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t pos, std::size_t from) {
        if (pos == k) {
            // normal n = sum mu_i basis_i, orthogonal to the subset's spread
            std::vector<std::vector<Rational>> rows;
            for (std::size_t a = 1; a < k; ++a) {
                std::vector<Rational> row(k);
                const HomologyVector spread = vertices[idx[a]] - vertices[idx[0]];
                for (std::size_t b = 0; b < k; ++b) row[b] = dot(basis[b].coords(), spread.coords());
                rows.push_back(row);
            }
            const auto ech = echelon(rows);
            if (ech.size() != k - 1) return;
            // one free column: the nullspace is one-dimensional
            std::vector<bool> pivot(k, false);
            std::vector<std::size_t> pivcol;
            for (const auto& row : ech) {
                for (std::size_t c = 0; c < k; ++c) {
                    if (row[c] != 0) {
                        pivot[c] = true;
                        pivcol.push_back(c);
                        break;
                    }
                }
            }
            std::size_t freec = 0;
            while (pivot[freec]) ++freec;
            std::vector<Rational> mu(k, Rational(0));
            mu[freec] = 1;
            for (std::size_t r = 0; r < ech.size(); ++r) mu[pivcol[r]] = -ech[r][freec];
            std::vector<Rational> normal(d, Rational(0));
            for (std::size_t b = 0; b < k; ++b) {
                for (std::size_t c = 0; c < d; ++c) normal[c] += mu[b] * basis[b][c];
            }
            const Rational level = dot(normal, vertices[idx[0]].coords());
            bool above = false, below = false;
            for (const auto& v : vertices) {
                const Rational x = dot(normal, v.coords());
                if (x > level) above = true;
                if (x < level) below = true;
            }
            if (above && below) return;
            Rational offset = level;
            if (above) {
                for (auto& c : normal) c = -c;
                offset = -offset;
            }
            // scale so the largest |entry| is 1
            Rational m = 0;
            for (const auto& c : normal) m = std::max(m, Rational(abs(c)));
            if (m == 0) return;
            for (auto& c : normal) c /= m;
            offset /= m;
            if (seen.insert({normal, offset}).second) out.push_back({normal, offset});
            return;
        }
        for (std::size_t i = from; i < vertices.size(); ++i) {
            idx[pos] = i;
            choose(pos + 1, i + 1);
        }
    };
    choose(0, 0);
    return out;
}

} // namespace

RotationPolytope cycle_mean_polytope(const LabeledGraph& g, const CycleBudget& budget) {
    RotationPolytope p;
    std::vector<HomologyVector> means;
    for (const auto& c : simple_cycles(g, budget)) means.push_back(walk_mean(g, c));
    p.means = distinct(std::move(means));
    if (p.means.empty()) return p;
    p.vertices = hull_vertices(p.means);
    std::vector<HomologyVector> dirs;
    for (std::size_t i = 1; i < p.vertices.size(); ++i) dirs.push_back(p.vertices[i] - p.vertices[0]);
    p.dimension = rank(dirs);
    p.facets = facets_of(p.vertices, p.dimension);
    return p;
}

std::optional<ClosedWalk> realize_rational(const LabeledGraph& g, const HomologyVector& target, const CycleBudget& budget) {
    const auto cycles = simple_cycles(g, budget);
    std::vector<HomologyVector> means;
    for (const auto& c : cycles) means.push_back(walk_mean(g, c));
    if (means.empty() || target.dim() != g.label_dim() || !in_convex_hull(distinct(means), target)) return std::nullopt;

    BigInt q = 1;
    for (const auto& c : target.coords()) q = boost::multiprecision::lcm(q, boost::multiprecision::denominator(c));
    if (q > 1000) throw Error(ErrorCode::BudgetExceeded, "target denominator too large");
    const int maxLength = static_cast<int>(q) * static_cast<int>(g.nodes.size());

    std::size_t work = 0;
    constexpr std::size_t kWorkCap = 5000000;
    for (int total = 1; total <= maxLength; ++total) {
        for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
            // cycles through v rotated to start there, one per (length, label sum)
            std::map<std::pair<int, HomologyVector>, std::vector<int>> types;
            for (const auto& c : cycles) {
                const auto it = std::find_if(c.begin(), c.end(), [&](int e) { return g.edges[e].from == v; });
                if (it == c.end()) continue;
                std::vector<int> rotated(it, c.end());
                rotated.insert(rotated.end(), c.begin(), it);
                HomologyVector sum(g.label_dim());
                for (int e : c) sum += g.edges[e].label;
                types.emplace(std::make_pair(static_cast<int>(c.size()), sum), rotated);
            }
            std::vector<std::pair<std::pair<int, HomologyVector>, std::vector<int>>> list(types.begin(), types.end());
            const HomologyVector goal = target * Rational(total);
            std::vector<int> chosen;
            HomologyVector sum(g.label_dim());
            const std::function<bool(std::size_t, int)> search = [&](std::size_t from, int remaining) {
                if (++work > kWorkCap) throw Error(ErrorCode::BudgetExceeded, "rational realization search exceeded its budget");
                if (remaining == 0) return sum == goal;
                for (std::size_t i = from; i < list.size(); ++i) {
                    const int len = list[i].first.first;
                    if (len > remaining) continue;
                    chosen.push_back(static_cast<int>(i));
                    sum += list[i].first.second;
                    if (search(i, remaining - len)) return true;
                    sum -= list[i].first.second;
                    chosen.pop_back();
                }
                return false;
            };
            if (search(0, total)) {
                ClosedWalk w;
                w.node = v;
                for (int i : chosen) w.edges.insert(w.edges.end(), list[i].second.begin(), list[i].second.end());
                w.mean = walk_mean(g, w.edges);
                return w;
            }
        }
    }
    return std::nullopt;
}

} // namespace rotlab

#include "rotlab/surface_group.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace rotlab {

using hyp::kPi;

std::string letter_name(Letter l) {
    const int idx = std::abs(l);
    std::string s = (idx % 2 == 1) ? "a" : "b";
    if (l < 0) s[0] = static_cast<char>(std::toupper(s[0]));
    return s + std::to_string((idx + 1) / 2);
}

Word Word::parse(const std::string& text) {
    Word w;
    std::size_t i = 0;
    const auto fail = [&](const std::string& why) { throw Error(ErrorCode::ConfigInvalid, "bad word '" + text + "': " + why); };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
            ++i;
            continue;
        }
        if (c == 'e' && (i + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            ++i;
            continue;
        }
        const char lower = static_cast<char>(std::tolower(c));
        if (lower != 'a' && lower != 'b') fail("unexpected character");
        ++i;
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (start == i) fail("missing generator index");
        const int k = std::stoi(text.substr(start, i - start));
        if (k < 1) fail("generator index must be positive");
        int sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
        if (text.compare(i, 3, "^-1") == 0) {
            sign = -sign;
            i += 3;
        }
        w.push_back(sign * (lower == 'a' ? 2 * k - 1 : 2 * k));
    }
    return w;
}

int Word::max_generator() const {
    int m = 0;
    for (Letter l : letters_) m = std::max(m, std::abs(l));
    return m;
}

Word Word::inverse() const {
    Word out;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(-*it);
    return out;
}

Word Word::operator*(const Word& other) const {
    Word out(*this);
    for (Letter l : other.letters_) out.push_back(l);
    return out;
}

Word Word::power(int k) const {
    Word base = k >= 0 ? *this : inverse();
    Word out;
    for (int i = 0; i < std::abs(k); ++i) out = out * base;
    return out;
}

std::string Word::str() const {
    if (letters_.empty()) return "e";
    std::string s;
    for (Letter l : letters_) s += letter_name(l);
    return s;
}

bool Word::operator<(const Word& other) const {
    if (size() != other.size()) return size() < other.size();
    for (std::size_t i = 0; i < size(); ++i) {
        if (letters_[i] != other.letters_[i]) return letter_less(letters_[i], other.letters_[i]);
    }
    return false;
}

HomologyVector HomologyVector::from_ints(const std::vector<long long>& v) {
    HomologyVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.coords_[i] = Rational(v[i]);
    return out;
}

HomologyVector& HomologyVector::operator+=(const HomologyVector& o) {
    if (o.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "homology vectors of different genus");
    for (std::size_t i = 0; i < dim(); ++i) coords_[i] += o.coords_[i];
    return *this;
}

HomologyVector& HomologyVector::operator-=(const HomologyVector& o) {
    if (o.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "homology vectors of different genus");
    for (std::size_t i = 0; i < dim(); ++i) coords_[i] -= o.coords_[i];
    return *this;
}

HomologyVector HomologyVector::operator*(const Rational& s) const {
    HomologyVector out(*this);
    for (auto& c : out.coords_) c *= s;
    return out;
}

HomologyVector HomologyVector::operator/(const Rational& s) const {
    HomologyVector out(*this);
    for (auto& c : out.coords_) c /= s;
    return out;
}

bool HomologyVector::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c == 0; });
}

std::vector<double> HomologyVector::to_doubles() const {
    std::vector<double> out;
    for (const auto& c : coords_) out.push_back(static_cast<double>(c));
    return out;
}

double HomologyVector::norm() const {
    double s = 0;
    for (double c : to_doubles()) s += c * c;
    return std::sqrt(s);
}

std::string HomologyVector::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < dim(); ++i) os << (i ? "," : "") << coords_[i];
    os << ")";
    return os.str();
}

std::vector<long long> abelianize_counts(const Word& w, int genus) {
    std::vector<long long> counts(2 * genus, 0);
    for (Letter l : w.letters()) {
        const int idx = std::abs(l) - 1;
        if (idx >= 2 * genus) throw Error(ErrorCode::DimensionMismatch, "letter outside the generating set");
        counts[idx] += l > 0 ? 1 : -1;
    }
    return counts;
}

HomologyVector abelianize(const Word& w, int genus) { return HomologyVector::from_ints(abelianize_counts(w, genus)); }

Rational wedge(const HomologyVector& u, const HomologyVector& v) {
    if (u.dim() != v.dim() || u.dim() % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "wedge of vectors of different dimension");
    Rational s = 0;
    for (std::size_t i = 0; i + 1 < u.dim(); i += 2) s += u[i] * v[i + 1] - u[i + 1] * v[i];
    return s;
}

double closed_form_vertex_radius(int genus) {
    const int n = 4 * genus;
    const double beta = 2 * kPi<double> / n;
    return std::acosh(1 / (std::tan(kPi<double> / n) * std::tan(beta / 2)));
}

Word canonical_word(const SurfaceGroup& G, const Iso& g) {
    Iso cur = g;
    Word w;
    for (int step = 0; step < kReduceStepCap; ++step) {
        // distinct elements move 0 by at least twice the side distance
        if (cur.half_distance() < G.side_distance() / 2) return w;
        double best = cur.half_distance();
        Letter chosen = 0;
        Iso next;
        for (Letter l : G.letters()) {
            const Iso cand = G.generator(l) * cur;
            const double h = cand.half_distance();
            if (h < best - 1e-9 || (chosen != 0 && std::abs(h - best) <= 1e-9 && letter_less(-l, -chosen))) {
                if (h < best) best = h;
                chosen = l;
                next = cand;
            }
        }
        if (chosen == 0) throw Error(ErrorCode::ReductionStalled, "element does not descend to the identity");
        cur = next;
        w.push_back(-chosen);
    }
    throw Error(ErrorCode::ReductionStalled, "normal form exceeded the step cap");
}

namespace {

// Spatial hash on g.0 in hyperbolic polar coordinates. Distinct elements move
// 0 to points at least twice the side distance apart, far more than a cell.
class ElementIndex {
public:
    bool insert_if_new(const Iso& g) {
        const Lifted p = g.apply(Lifted(Point()));
        const double R = p.radius(), th = p.direction();
        const long rb = static_cast<long>(std::floor(R / kCell));
        for (long r = rb - 1; r <= rb + 1; ++r) {
            if (r < 0) continue;
            const long n = cells_in_shell(r);
            const long ab = angular_cell(r, th);
            for (long a = ab - 1; a <= ab + 1; ++a) {
                const auto it = cells_.find({r, ((a % n) + n) % n});
                if (it == cells_.end()) continue;
                for (const Lifted& q : it->second) {
                    if (hyp::distance(p, q) < 1e-3) return false;
                }
            }
        }
        cells_[{rb, angular_cell(rb, th)}].push_back(p);
        return true;
    }

private:
    static constexpr double kCell = 0.5;
    static double scale(long r) { return std::max(1.0, std::sinh((r + 0.5) * kCell)); }
    static long cells_in_shell(long r) { return static_cast<long>(std::ceil(2 * kPi<double> * scale(r) / kCell)); }
    static long angular_cell(long r, double th) { return static_cast<long>(std::floor(th * scale(r) / kCell)) % cells_in_shell(r); }

    std::map<std::pair<long, long>, std::vector<Lifted>> cells_;
};

std::vector<Element> breadth_first(const SurfaceGroup& G, int maxWordLen, std::size_t maxCount, double keepRadius, double pruneRadius) {
    std::vector<Element> out;
    ElementIndex index;
    std::vector<Element> frontier{{Word(), Iso()}};
    index.insert_if_new(Iso());
    for (int len = 0;; ++len) {
        for (const Element& e : frontier) {
            if (e.iso.origin_displacement() <= keepRadius) out.push_back(e);
        }
        if (out.size() > maxCount) throw Error(ErrorCode::BudgetExceeded, "element enumeration exceeded its budget");
        std::vector<Element> next;
        for (const Element& e : frontier) {
            if (e.iso.origin_displacement() > pruneRadius) continue;
            for (Letter l : G.letters()) {
                if (!e.word.empty() && e.word.letters().back() == -l) continue;
                Iso g = e.iso * G.generator(l);
                if (g.origin_displacement() > pruneRadius) continue;
                if (!index.insert_if_new(g)) continue;
                if (len == maxWordLen) {
                    if (g.origin_displacement() <= keepRadius)
                        throw Error(ErrorCode::BudgetExceeded, "ball needs words longer than " + std::to_string(maxWordLen));
                    continue;
                }
                next.push_back({e.word * Word{l}, g});
            }
        }
        if (next.empty()) break;
        frontier = std::move(next);
    }
    return out;
}

} // namespace

std::vector<Element> enumerate_elements(const SurfaceGroup& G, int maxWordLen, std::size_t maxCount) {
    if (maxWordLen < 0 || maxWordLen > 12) throw Error(ErrorCode::BudgetExceeded, "word length bound must lie in [0, 12]");
    std::vector<Element> out;
    ElementIndex index;
    std::vector<Element> frontier{{Word(), Iso()}};
    index.insert_if_new(Iso());
    for (int len = 0; len <= maxWordLen; ++len) {
        out.insert(out.end(), frontier.begin(), frontier.end());
        if (out.size() > maxCount) throw Error(ErrorCode::BudgetExceeded, "element enumeration exceeded its budget");
        if (len == maxWordLen) break;
        std::vector<Element> next;
        for (const Element& e : frontier) {
            for (Letter l : G.letters()) {
                if (!e.word.empty() && e.word.letters().back() == -l) continue;
                Iso g = e.iso * G.generator(l);
                if (index.insert_if_new(g)) next.push_back({e.word * Word{l}, g});
            }
        }
        frontier = std::move(next);
    }
    return out;
}

// Tiles met by the segment from 0 to g(0) have centres within the vertex
// radius of it and adjacent tiles differ by a generator, so no path needs to
// leave the ball of radius + vertex radius.
std::vector<Element> enumerate_ball(const SurfaceGroup& G, double radius, int maxWordLen, std::size_t maxCount) {
    return breadth_first(G, maxWordLen, maxCount, radius, radius + G.vertex_radius() + 0.1);
}

CenteredDomain::CenteredDomain(const SurfaceGroup& G, const Point& center) : group_(&G), center_(center) {
    const double c = hyp::distance(Point(), center);
    neighbours_ = enumerate_ball(G, 2 * G.vertex_radius() + 2 * c + 0.5);
}

Reduction CenteredDomain::reduce(const Point& p) const {
    const Reduction base = rotlab::reduce(*group_, p);
    const Element* best = nullptr;
    double bestDist = 0;
    for (const Element& e : neighbours_) {
        const double d = hyp::distance(base.p0, e.iso.apply(center_));
        if (!best || d < bestDist - kStrictDecrease || (std::abs(d - bestDist) <= kStrictDecrease && e.word < best->word)) {
            if (!best || d < bestDist) bestDist = d;
            best = &e;
        }
    }
    return {best->iso.inverse().apply(base.p0), base.word * best->word};
}

} // namespace rotlab

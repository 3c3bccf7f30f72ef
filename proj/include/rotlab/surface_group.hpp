#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "rotlab/hyperbolic.hpp"

namespace rotlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using Point = hyp::DiskPoint<double>;
using Boundary = hyp::BoundaryPoint<double>;
using Lifted = hyp::LiftedPoint<double>;
using Iso = hyp::Isometry<double>;
using Geodesic = hyp::Geodesic<double>;

// Letters are signed generator indices: a_i = 2i - 1, b_i = 2i, negative for
// inverses. Ordering for tie-breaks: a1 < a1^-1 < b1 < b1^-1 < a2 < ...
using Letter = int;

inline bool letter_less(Letter x, Letter y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) < std::abs(y);
    return x > y;
}

class Word {
public:
    Word() = default;
    Word(std::initializer_list<Letter> letters) {
        for (Letter l : letters) push_back(l);
    }
    explicit Word(const std::vector<Letter>& letters) {
        for (Letter l : letters) push_back(l);
    }

    // "a1 b1 a1^-1 B1", "a1b1A1B1" and "e" (empty) are all accepted
    static Word parse(const std::string& text);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    int max_generator() const;

    void push_back(Letter l) {
        if (l == 0) throw Error(ErrorCode::ConfigInvalid, "letter 0 is not a generator");
        if (!letters_.empty() && letters_.back() == -l) letters_.pop_back();
        else letters_.push_back(l);
    }

    Word inverse() const;
    Word operator*(const Word& other) const;
    Word power(int k) const;

    std::string str() const;

    bool operator==(const Word& other) const { return letters_ == other.letters_; }
    bool operator!=(const Word& other) const { return letters_ != other.letters_; }
    // shortlex with the letter order above
    bool operator<(const Word& other) const;

private:
    std::vector<Letter> letters_;
};

std::string letter_name(Letter l);

class HomologyVector {
public:
    HomologyVector() = default;
    explicit HomologyVector(std::size_t dim) : coords_(dim, Rational(0)) {}
    explicit HomologyVector(std::vector<Rational> coords) : coords_(std::move(coords)) {}
    static HomologyVector from_ints(const std::vector<long long>& v);

    std::size_t dim() const { return coords_.size(); }
    const Rational& operator[](std::size_t i) const { return coords_[i]; }
    Rational& operator[](std::size_t i) { return coords_[i]; }
    const std::vector<Rational>& coords() const { return coords_; }

    HomologyVector& operator+=(const HomologyVector& o);
    HomologyVector& operator-=(const HomologyVector& o);
    HomologyVector operator+(const HomologyVector& o) const { return HomologyVector(*this) += o; }
    HomologyVector operator-(const HomologyVector& o) const { return HomologyVector(*this) -= o; }
    HomologyVector operator*(const Rational& s) const;
    HomologyVector operator/(const Rational& s) const;

    bool is_zero() const;
    double norm() const;
    std::vector<double> to_doubles() const;
    std::string str() const;

    bool operator==(const HomologyVector& o) const { return coords_ == o.coords_; }
    bool operator!=(const HomologyVector& o) const { return coords_ != o.coords_; }
    bool operator<(const HomologyVector& o) const { return coords_ < o.coords_; }

private:
    std::vector<Rational> coords_;
};

std::vector<long long> abelianize_counts(const Word& w, int genus);
HomologyVector abelianize(const Word& w, int genus);

// standard symplectic form in the basis ([a1],[b1],...,[ag],[bg])
Rational wedge(const HomologyVector& u, const HomologyVector& v);

template <class T>
class BasicSurfaceGroup {
public:
    using Iso = hyp::Isometry<T>;
    using Point = hyp::DiskPoint<T>;

    int genus() const { return genus_; }
    int letter_count() const { return 4 * genus_; }

    const Iso& generator(Letter l) const {
        const int idx = std::abs(l) - 1;
        if (l == 0 || idx >= 2 * genus_) throw Error(ErrorCode::DimensionMismatch, "no generator " + std::to_string(l));
        return l > 0 ? forward_[idx] : backward_[idx];
    }

    // a1, b1, ..., ag, bg followed by their inverses
    std::vector<Iso> generators() const {
        std::vector<Iso> out(forward_);
        out.insert(out.end(), backward_.begin(), backward_.end());
        return out;
    }

    // every letter, in tie-break order
    const std::vector<Letter>& letters() const { return letters_; }

    const std::vector<Point>& domain_vertices() const { return vertices_; }

    Word relator() const {
        Word w;
        for (int i = 1; i <= genus_; ++i) w = w * Word{2 * i - 1, 2 * i, -(2 * i - 1), -(2 * i)};
        return w;
    }

    Iso element(const Word& w) const {
        Iso g;
        for (Letter l : w.letters()) g = g * generator(l);
        return g;
    }

    T vertex_radius() const { return vertex_radius_; }
    T side_distance() const { return side_distance_; }
    T domain_area() const { return hyp::polygon_area(vertices_); }

    // Regular 4g-gon about 0 with vertex angle 2 pi / 4g. Side j (centred at
    // angle 2 pi j / 4g) is paired with side j +- 2 inside each block of four.
    static BasicSurfaceGroup build(int genus) {
        using hyp::kPi;
        if (genus < 2) throw Error(ErrorCode::GenusTooSmall, "genus must be at least 2");
        const int n = 4 * genus;
        const T target = 2 * kPi<T> / n;
        const auto vertices = [n](T radius) {
            std::vector<Point> v;
            for (int k = 0; k < n; ++k) v.push_back(Point::from_polar((2 * k + 1) * kPi<T> / n, radius));
            return v;
        };
        // the interior angle decreases from (n-2) pi / n to 0 as the polygon grows
        T lo = T(1e-3), hi = 30;
        for (int it = 0; it < 200 && hi - lo > T(1e-15); ++it) {
            const T mid = (lo + hi) / 2;
            const auto v = vertices(mid);
            if (hyp::vertex_angle(v[0], v[n - 1], v[1]) > target) lo = mid;
            else hi = mid;
        }

        BasicSurfaceGroup G;
        G.genus_ = genus;
        G.vertex_radius_ = (lo + hi) / 2;
        G.vertices_ = vertices(G.vertex_radius_);
        G.side_distance_ = hyp::geodesic_of<T>(G.vertices_[n - 1], G.vertices_[0]).distance_to(Point());

        const auto phi = [n](int k) { return 2 * kPi<T> * k / n; };
        const auto partner = [](int j) { return 4 * (j / 4) + (j % 4 + 2) % 4; };
        // sigma_j carries side partner(j) onto side j
        const auto sigma = [&](int j) {
            return Iso::rotation(phi(j)) * Iso::translation(2 * G.side_distance_) * Iso::rotation(-phi(j)) *
                   Iso::rotation(phi(j) - phi(partner(j)) + kPi<T>);
        };
        for (int i = 0; i < genus; ++i) {
            G.forward_.push_back(sigma(4 * i));
            G.forward_.push_back(sigma(4 * i + 3));
        }
        for (const Iso& g : G.forward_) G.backward_.push_back(g.inverse());
        for (int i = 1; i <= 2 * genus; ++i) {
            G.letters_.push_back(i);
            G.letters_.push_back(-i);
        }
        return G;
    }

private:
    int genus_ = 0;
    std::vector<Iso> forward_;
    std::vector<Iso> backward_;
    std::vector<Letter> letters_;
    std::vector<Point> vertices_;
    T vertex_radius_ = 0;
    T side_distance_ = 0;
};

using SurfaceGroup = BasicSurfaceGroup<double>;

inline SurfaceGroup build_group(int genus) { return SurfaceGroup::build(genus); }

// vertex radius of the regular polygon from the closed form, for cross-checks
double closed_form_vertex_radius(int genus);

template <class T>
struct BasicReduction {
    hyp::DiskPoint<T> p0;
    Word word;  // p = word . p0
};

using Reduction = BasicReduction<double>;

inline constexpr double kStrictDecrease = 1e-12;
inline constexpr int kReduceStepCap = 100000;

// Greedy descent: apply the generator that brings the point closest to 0
// until none improves by more than kStrictDecrease.
template <class T>
BasicReduction<T> reduce(const BasicSurfaceGroup<T>& G, const hyp::DiskPoint<T>& p) {
    hyp::LiftedPoint<T> z(p);
    T current = z.radius();
    Word w;
    for (int step = 0; step < kReduceStepCap; ++step) {
        T best = current;
        Letter chosen = 0;
        hyp::LiftedPoint<T> next;
        for (Letter l : G.letters()) {
            const hyp::LiftedPoint<T> cand = G.generator(l).apply(z);
            const T r = cand.radius();
            // the word grows by -l; ties go to the smaller appended letter
            if (r < best - T(kStrictDecrease) || (chosen != 0 && std::abs(r - best) <= T(kStrictDecrease) && letter_less(-l, -chosen))) {
                if (r < best) best = r;
                chosen = l;
                next = cand;
            }
        }
        if (chosen == 0 || best >= current - T(kStrictDecrease)) return {hyp::DiskPoint<T>(z.z), w};
        z = next;
        current = best;
        w.push_back(-chosen);
    }
    throw Error(ErrorCode::ReductionStalled, "reduction exceeded the step cap");
}

// Greedy normal form of a group element: repeatedly left-multiply by the
// generator that brings g.0 closest to 0. Used as the dedup key for elements.
Word canonical_word(const SurfaceGroup& G, const Iso& g);

struct Element {
    Word word;
    Iso iso;
};

// all elements of word length <= maxWordLen, in breadth-first order
std::vector<Element> enumerate_elements(const SurfaceGroup& G, int maxWordLen, std::size_t maxCount = 2000000);

// all elements moving 0 by at most radius
std::vector<Element> enumerate_ball(const SurfaceGroup& G, double radius, int maxWordLen = 12, std::size_t maxCount = 2000000);

template <class Map>
Word deck_cocycle(const SurfaceGroup& G, Map&& f, const Point& y) {
    return reduce(G, f(y)).word;
}

// Dirichlet domain about another center, reached through the one about 0.
class CenteredDomain {
public:
    CenteredDomain(const SurfaceGroup& G, const Point& center);

    const Point& center() const { return center_; }
    Reduction reduce(const Point& p) const;

private:
    const SurfaceGroup* group_;
    Point center_;
    std::vector<Element> neighbours_;
};

} // namespace rotlab

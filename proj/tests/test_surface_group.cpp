#include <doctest.h>

#include <set>

#include "rotlab/surface_group.hpp"
#include "support.hpp"

using namespace rotlab;
using hyp::kPi;
using testgen::Gen;

namespace {

const SurfaceGroup& genus2() {
    static const SurfaceGroup G = build_group(2);
    return G;
}

double identity_defect(const Iso& g) {
    double worst = 0;
    for (const Point& p : {Point(), Point(0.3, -0.2), Point(-0.5, 0.4)}) worst = std::max(worst, hyp::distance(g.apply(p), p));
    return worst;
}

Word random_word(Gen& gen, int genus, int maxLen) {
    Word w;
    const int len = gen.integer(0, maxLen);
    while (static_cast<int>(w.size()) < len) {
        const int l = gen.integer(1, 2 * genus) * (gen.integer(0, 1) ? 1 : -1);
        w.push_back(l);
    }
    return w;
}

// point well inside the domain
Point interior_point(Gen& gen, const SurfaceGroup& G) { return Point::from_polar(gen.uniform(0, 2 * kPi<double>), gen.uniform(0, 0.9 * G.side_distance())); }

} // namespace

TEST_CASE("word parsing and free reduction") {
    CHECK(Word::parse("a1 b1 a1^-1 b1^-1") == Word{1, 2, -1, -2});
    CHECK(Word::parse("a1b1A1B1").str() == "a1b1A1B1");
    CHECK(Word::parse("a1 a1^-1 b2").str() == "b2");
    CHECK(Word::parse("e").empty());
    CHECK((Word{1, 2} * Word{-2, -1}).empty());
    CHECK(Word{1, 2, 3}.inverse() == Word{-3, -2, -1});
    CHECK_THROWS_AS(Word::parse("c1"), Error);
    CHECK(Word{1} < Word{-1});
    CHECK(Word{-1} < Word{2});
    CHECK(Word{4} < Word{1, 1});
}

TEST_CASE("genus two group") {
    const SurfaceGroup& G = genus2();
    CHECK(identity_defect(G.element(G.relator())) <= 1e-8);
    CHECK(G.domain_area() == doctest::Approx(4 * kPi<double>).epsilon(1e-6 / (4 * kPi<double>)));
    CHECK(std::abs(G.domain_area() - 4 * kPi<double>) <= 1e-6);
    CHECK(G.vertex_radius() == doctest::Approx(closed_form_vertex_radius(2)).epsilon(1e-12));
    CHECK(std::tanh(G.vertex_radius() / 2) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-12));
    // cosh of the side distance: cos(beta/2) / sin(pi/n)
    CHECK(std::cosh(G.side_distance()) == doctest::Approx(std::cos(kPi<double> / 8) / std::sin(kPi<double> / 8)).epsilon(1e-12));
    for (const Iso& g : G.generators()) CHECK(g.is_loxodromic());
    CHECK_THROWS_AS(build_group(1), Error);
}

TEST_CASE("relator and area for higher genus") {
    for (int g : {3, 4}) {
        const SurfaceGroup G = build_group(g);
        CHECK(identity_defect(G.element(G.relator())) <= 1e-8);
        CHECK(std::abs(G.domain_area() - 4 * kPi<double> * (g - 1)) <= 1e-6);
        CHECK(G.vertex_radius() == doctest::Approx(closed_form_vertex_radius(g)).epsilon(1e-12));
    }
}

TEST_CASE("generators pair sides of the polygon") {
    const SurfaceGroup& G = genus2();
    const int n = 8;
    const auto mid = [&](int k) { return Point::from_polar(2 * kPi<double> * k / n, G.side_distance()); };
    // a_i carries side 4i+2 onto side 4i, b_i carries side 4i+1 onto side 4i+3
    for (int i = 0; i < 2; ++i) {
        const Iso& a = G.generator(2 * i + 1);
        const Iso& b = G.generator(2 * i + 2);
        CHECK(hyp::distance(a.apply(mid(4 * i + 2)), mid(4 * i)) <= 1e-12);
        CHECK(hyp::distance(b.apply(mid(4 * i + 1)), mid(4 * i + 3)) <= 1e-12);
        CHECK(hyp::distance(a.apply(Point()), Point::from_polar(2 * kPi<double> * (4 * i) / n, 2 * G.side_distance())) <= 1e-12);
    }
}

TEST_CASE("reduce examples") {
    const SurfaceGroup& G = genus2();
    const Reduction r0 = reduce(G, Point());
    CHECK(std::abs(r0.p0.z()) == 0.0);
    CHECK(r0.word.empty());
    const Reduction r1 = reduce(G, G.generator(1).apply(Point()));
    CHECK(std::abs(r1.p0.z()) <= 1e-12);
    CHECK(r1.word.str() == "a1");
    Gen gen(31);
    for (int i = 0; i < 50; ++i) {
        const Point q = interior_point(gen, G);
        const Reduction r = reduce(G, G.element(Word::parse("a1b1")).apply(q));
        CHECK(hyp::distance(r.p0, q) <= 1e-9);
        CHECK(abelianize(r.word, 2) == HomologyVector::from_ints({1, 1, 0, 0}));
    }
}

TEST_CASE("tiling consistency") {
    // Points 24 units out cannot be located to 1e-8 in double coordinates
    // (one ulp of z is about 1e-16 e^24 / 2 there), so the property runs in
    // long double, where the same words stay well inside the tolerance.
    using LD = long double;
    const auto G = BasicSurfaceGroup<LD>::build(2);
    Gen gen(32);
    for (int i = 0; i < 500; ++i) {
        const Word w = random_word(gen, 2, 8);
        const auto q = hyp::DiskPoint<LD>::from_polar(gen.uniform(0, 2 * kPi<double>), gen.uniform(0, 0.9 * double(G.side_distance())));
        const auto p = G.element(w).apply(q);
        const auto r = reduce(G, p);
        CHECK(double(hyp::distance(r.p0, q)) <= 1e-8);
        CHECK(abelianize(r.word, 2) == abelianize(w, 2));
        CHECK(double(hyp::distance(G.element(r.word).apply(r.p0), p)) <= 1e-8);
        // the result satisfies the Dirichlet inequalities
        for (Letter l : G.letters())
            CHECK(double(hyp::distance(r.p0, hyp::DiskPoint<LD>())) <= double(hyp::distance(r.p0, G.generator(l).apply(hyp::DiskPoint<LD>()))) + 1e-9);
    }
}

TEST_CASE("tiling consistency in double precision") {
    const SurfaceGroup& G = genus2();
    Gen gen(33);
    for (int i = 0; i < 500; ++i) {
        const Word w = random_word(gen, 2, 8);
        const Point q = interior_point(gen, G);
        const Iso g = G.element(w);
        const Point p = g.apply(q);
        const Reduction r = reduce(G, p);
        // a few ulps of z at distance R from 0 are worth about 1e-16 e^R
        const double tol = 1e-10 + 1e-15 * std::exp(hyp::distance(Point(), p));
        CHECK(hyp::distance(r.p0, q) <= tol);
        CHECK(abelianize(r.word, 2) == abelianize(w, 2));
        if (g.origin_displacement() <= 12) CHECK(hyp::distance(r.p0, q) <= 1e-8);
    }
}

TEST_CASE("abelianize and wedge") {
    CHECK(abelianize(Word::parse("a1b1A1B1"), 2).is_zero());
    CHECK(abelianize(Word::parse("a1 a1 b2^-1"), 2) == HomologyVector::from_ints({2, 0, 0, -1}));
    CHECK(abelianize(Word(), 2).is_zero());
    const auto e = [](int i) {
        std::vector<long long> v(4, 0);
        v[i] = 1;
        return HomologyVector::from_ints(v);
    };
    CHECK(wedge(e(0), e(1)) == 1);
    CHECK(wedge(e(1), e(0)) == -1);
    CHECK(wedge(e(0), e(2)) == 0);
    // block-diagonal symplectic matrix
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const int expected = (i / 2 == j / 2) ? (i % 2 == 0 && j == i + 1 ? 1 : (i % 2 == 1 && j == i - 1 ? -1 : 0)) : 0;
            CHECK(wedge(e(i), e(j)) == expected);
        }
    Gen gen(33);
    for (int t = 0; t < 200; ++t) {
        const Word u = random_word(gen, 2, 10), v = random_word(gen, 2, 10);
        const HomologyVector hu = abelianize(u, 2), hv = abelianize(v, 2);
        CHECK(abelianize(u * v, 2) == hu + hv);
        CHECK(wedge(hu, hu) == 0);
        CHECK(wedge(hu, hv) == -wedge(hv, hu));
        CHECK(wedge(hu * Rational(3, 7), hv) == wedge(hu, hv) * Rational(3, 7));
    }
    CHECK_THROWS_AS(wedge(HomologyVector(4), HomologyVector(6)), Error);
}

TEST_CASE("element enumeration counts") {
    const SurfaceGroup& G = genus2();
    CHECK(enumerate_elements(G, 0).size() == 1);
    CHECK(enumerate_elements(G, 1).size() == 9);
    CHECK(enumerate_elements(G, 2).size() == 65);
    CHECK_THROWS_AS(enumerate_elements(G, 13), Error);
    CHECK_THROWS_AS(enumerate_elements(G, 6, 1000), Error);
}

TEST_CASE("enumeration agrees with pairwise dedup of free words") {
    const SurfaceGroup& G = genus2();
    // all freely reduced words of length <= 4
    std::vector<Word> words{Word()};
    std::vector<Word> layer{Word()};
    for (int len = 1; len <= 4; ++len) {
        std::vector<Word> next;
        for (const Word& w : layer)
            for (Letter l : G.letters()) {
                if (!w.empty() && w.letters().back() == -l) continue;
                next.push_back(w * Word{l});
            }
        words.insert(words.end(), next.begin(), next.end());
        layer = next;
    }
    CHECK(words.size() == 3201);
    std::vector<Iso> distinct;
    for (const Word& w : words) {
        const Iso g = G.element(w);
        bool found = false;
        for (const Iso& h : distinct) {
            if ((g * h.inverse()).half_distance() < 1e-9 && identity_defect(g * h.inverse()) < 1e-9) {
                found = true;
                break;
            }
        }
        if (!found) distinct.push_back(g);
    }
    const auto enumerated = enumerate_elements(G, 4);
    CHECK(enumerated.size() == distinct.size());
    CHECK(distinct.size() < 3201);
    for (const Element& e : enumerated) CHECK(static_cast<int>(e.word.size()) <= 4);
}

TEST_CASE("canonical words evaluate back to the element") {
    const SurfaceGroup& G = genus2();
    Gen gen(34);
    std::set<std::string> seen;
    for (int i = 0; i < 200; ++i) {
        const Word w = random_word(gen, 2, 8);
        const Iso g = G.element(w);
        const Word c = canonical_word(G, g);
        // g * g'^-1 cancels entries of size cosh(h)^2, which sets the tolerance
        const double tol = 1e-10 + 1e-15 * std::exp(2 * g.half_distance());
        CHECK(identity_defect(G.element(c) * g.inverse()) <= tol);
        CHECK(abelianize(c, 2) == abelianize(w, 2));
        // equal elements give equal canonical words
        CHECK(canonical_word(G, G.element(w * G.relator())) == c);
    }
}

TEST_CASE("ball enumeration contains every short element inside the radius") {
    const SurfaceGroup& G = genus2();
    const double radius = 6.0;
    const auto ball = enumerate_ball(G, radius);
    for (const Element& e : ball) CHECK(e.iso.origin_displacement() <= radius);
    std::size_t inside = 0;
    for (const Element& e : enumerate_elements(G, 4))
        if (e.iso.origin_displacement() <= radius) ++inside;
    CHECK(ball.size() >= inside);
    // orbit points near 0 are exactly those of the Dirichlet neighbours
    std::size_t near = 0;
    for (const Element& e : ball)
        if (e.iso.origin_displacement() <= 2 * G.side_distance() + 1e-9) ++near;
    CHECK(near == 9);
}

TEST_CASE("deck cocycle") {
    const SurfaceGroup& G = genus2();
    Gen gen(35);
    for (int i = 0; i < 20; ++i) {
        const Point y = interior_point(gen, G);
        CHECK(deck_cocycle(G, [](const Point& p) { return p; }, y).empty());
    }
    const Iso& a1 = G.generator(1);
    CHECK(deck_cocycle(G, [&](const Point& p) { return a1.apply(p); }, Point()).str() == "a1");
}

TEST_CASE("reduction about another center") {
    const SurfaceGroup& G = genus2();
    const Point c(0.3, 0.2);
    const CenteredDomain D(G, c);
    const auto neighbours = enumerate_ball(G, 8.0);
    Gen gen(36);
    for (int i = 0; i < 100; ++i) {
        const Point p = gen.point(5);
        const Reduction r = D.reduce(p);
        CHECK(hyp::distance(G.element(r.word).apply(r.p0), p) <= 1e-8);
        const double d = hyp::distance(r.p0, c);
        for (const Element& e : neighbours) CHECK(d <= hyp::distance(r.p0, e.iso.apply(c)) + 1e-9);
    }
}

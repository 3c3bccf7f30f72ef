#include <doctest.h>

#include <cmath>

#include "rotlab/hyperbolic.hpp"
#include "support.hpp"

using namespace rotlab;
using namespace rotlab::hyp;
using testgen::Gen;

namespace {

using P = DiskPoint<double>;
using B = BoundaryPoint<double>;
using Iso = Isometry<double>;
using Geo = Geodesic<double>;

// Plain SU(1,1) product in long double, the reference for the scaled representation.
struct NaiveMatrix {
    std::complex<long double> a{1}, b{0};

    static NaiveMatrix of(const Iso& g) {
        const long double h = g.half_distance();
        return {std::complex<long double>(g.unit_a()) * std::cosh(h), std::complex<long double>(g.unit_b()) * std::sinh(h)};
    }

    NaiveMatrix operator*(const NaiveMatrix& o) const { return {a * o.a + b * std::conj(o.b), a * o.b + b * std::conj(o.a)}; }

    long double half_distance() const { return std::acosh(std::abs(a)); }
    long double origin_direction() const { return std::arg(b / std::conj(a)); }
};

Geo real_diameter() { return Geo::from_endpoints(B(kPi<double>), B(0)); }

} // namespace

TEST_CASE("distance closed forms") {
    CHECK(distance(P(), P()) == 0.0);
    CHECK(distance(P(), P(0.5, 0)) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    const P q(0.2, -0.4);
    const double expected = std::acosh(1 + 2 * std::norm(q.z()) / q.one_minus_abs2());
    CHECK(distance(P(), q) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(distance(P(), q) == doctest::Approx(2 * std::atanh(std::abs(q.z()))).epsilon(1e-14));
}

TEST_CASE("disk point validation") {
    CHECK_THROWS_AS(P(1.0, 0.0), Error);
    CHECK_THROWS_AS(P(0.0, 1 - 1e-16), Error);
    CHECK_NOTHROW(P(0.0, 1 - 1e-14));
    CHECK(B(-kPi<double> / 2).theta() == doctest::Approx(3 * kPi<double> / 2));
    CHECK(B(2 * kPi<double>).theta() == 0.0);
}

TEST_CASE("metric axioms on random triples") {
    Gen gen(11);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const P p = gen.point(), q = gen.point(), r = gen.point();
        REQUIRE(distance(p, q) == distance(q, p));
        CHECK(distance(p, q) >= 0);
        worst = std::max(worst, distance(p, r) - distance(p, q) - distance(q, r));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("apply examples") {
    const P p(0.1, 0.3);
    CHECK(std::abs(Iso::identity().apply(p).z() - p.z()) < 1e-16);
    CHECK(Iso::rotation(0.7).apply(B(1.1)).theta() == doctest::Approx(1.8));
    CHECK(Iso::translation(1.3).apply(P()).z().real() == doctest::Approx(std::tanh(0.65)));
    CHECK(Iso::moving_origin_to(p).apply(P()).z().imag() == doctest::Approx(0.3));
}

TEST_CASE("isometry invariance of distance") {
    Gen gen(12);
    for (int i = 0; i < 1000; ++i) {
        Iso g;
        const int len = gen.integer(1, 20);
        for (int k = 0; k < len; ++k) g = g * gen.isometry(0.6);
        if (g.half_distance() > 8) continue;
        const P p = gen.point(2), q = gen.point(2);
        CHECK(std::abs(distance(g.apply(p), g.apply(q)) - distance(p, q)) <= 1e-10);
    }
}

TEST_CASE("compose and inverse") {
    Gen gen(13);
    for (int i = 0; i < 200; ++i) {
        const Iso g = gen.isometry(), k = gen.isometry(), m = gen.isometry();
        const Iso id = g * g.inverse();
        CHECK(id.half_distance() <= 1e-12);
        const Iso lhs = (g * k) * m, rhs = g * (k * m);
        CHECK(std::abs(lhs.half_distance() - rhs.half_distance()) <= 1e-12);
        CHECK(std::abs(lhs.unit_a() - rhs.unit_a()) <= 1e-12);
        const Iso same = Iso::identity() * k;
        CHECK(std::abs(same.half_distance() - k.half_distance()) <= 1e-15);
        const P p = gen.point(2);
        CHECK(std::abs((g * k).apply(p).z() - g.apply(k.apply(p)).z()) <= 1e-12);
    }
}

TEST_CASE("scaled composition agrees with an extended precision product") {
    Gen gen(14);
    std::vector<Iso> letters;
    for (int i = 0; i < 6; ++i) letters.push_back(gen.isometry(2.5));
    Iso g;
    NaiveMatrix oracle;
    for (int n = 1; n <= 1000; ++n) {
        const Iso& x = letters[gen.integer(0, 5)];
        g = g * x;
        oracle = oracle * NaiveMatrix::of(x);
        if (n % 50 == 0) {
            const long double h = oracle.half_distance();
            CHECK(std::abs(g.half_distance() - h) <= 1e-9 * std::max<long double>(1, h));
            CHECK(angular_distance<double>(std::arg(g.unit_b() / std::conj(g.unit_a())), oracle.origin_direction()) <= 1e-9);
        }
    }
    CHECK(g.half_distance() > 100);
}

TEST_CASE("long random words keep the unit normalization") {
    Gen gen(15);
    std::vector<Iso> letters;
    for (int i = 0; i < 4; ++i) letters.push_back(gen.isometry(1.5));
    Iso g;
    for (int n = 0; n < 100000; ++n) g = g * letters[gen.integer(0, 3)];
    // the effective matrix is cosh(h) a_, sinh(h) b_ with unit phases, so
    // |a|^2 - |b|^2 = 1 holds as long as the phases stay unit
    CHECK(std::abs(std::abs(g.unit_a()) - 1) <= 1e-12);
    CHECK(std::abs(std::abs(g.unit_b()) - 1) <= 1e-12);
    const double h = g.half_distance();
    const double log_one_minus_t = std::log(2.0) - 2 * h - std::log1p(std::exp(-2 * h));
    const double log_det = 2 * g.log_scale() + log_one_minus_t + std::log1p(std::tanh(h));
    CHECK(std::abs(log_det) <= 1e-9);
    CHECK(std::isfinite(g.half_distance()));
    CHECK_THROWS_AS(g.matrix(), Error);
    const LiftedPoint<double> far = g.apply(LiftedPoint<double>(P()));
    CHECK(far.radius() == doctest::Approx(g.origin_displacement()).epsilon(1e-9));
}

TEST_CASE("geodesic_of examples") {
    const Geo g = geodesic_of<double>(B(0), B(kPi<double>));
    CHECK(std::abs(g.origin().z()) < 1e-15);
    CHECK(g.alpha().theta() == 0.0);
    const Geo v = geodesic_of<double>(P(), P(0, 0.5));
    CHECK(v.alpha().theta() == doctest::Approx(3 * kPi<double> / 2));
    CHECK(v.omega().theta() == doctest::Approx(kPi<double> / 2));
    CHECK_THROWS_AS(geodesic_of<double>(B(0), B(0)), Error);
    CHECK_THROWS_AS(geodesic_of<double>(P(0.1, 0), P(0.1, 0)), Error);
}

TEST_CASE("geodesic through points passes through them") {
    Gen gen(16);
    for (int i = 0; i < 500; ++i) {
        const P p = gen.point(3), q = gen.point(3);
        if (distance(p, q) < 1e-3) continue;
        const Geo g = geodesic_of<double>(p, q, p);
        CHECK(g.distance_to(p) <= 1e-9);
        CHECK(g.distance_to(q) <= 1e-9);
        CHECK(distance(g.origin(), p) <= 1e-9);
        CHECK(g.fermi(q).t == doctest::Approx(distance(p, q)).epsilon(1e-9));
        const B xi = gen.boundary();
        const Geo h = geodesic_of<double>(xi, p);
        CHECK(angular_distance(h.alpha().theta(), xi.theta()) <= 1e-12);
        CHECK(h.distance_to(p) <= 1e-9);
    }
}

TEST_CASE("fermi examples") {
    const Geo g = real_diameter();
    const auto f = g.fermi(P(0, 0.3));
    CHECK(f.t == doctest::Approx(0).epsilon(1e-15));
    CHECK(f.r == doctest::Approx(2 * std::atanh(0.3)));
    CHECK(f.r == doctest::Approx(0.61904).epsilon(1e-5));
    const auto h = g.fermi(P(0.5, 0));
    CHECK(h.t == doctest::Approx(std::log(3.0)));
    CHECK(h.r == doctest::Approx(0).epsilon(1e-15));
    Gen gen(17);
    for (int i = 0; i < 200; ++i) {
        const Geo r = gen.geodesic();
        const auto c = r.fermi(r.point_at(2.5));
        CHECK(c.t == doctest::Approx(2.5).epsilon(1e-9));
        CHECK(std::abs(c.r) <= 1e-9);
    }
}

TEST_CASE("fermi round trip and hyperbolic Pythagoras") {
    Gen gen(18);
    for (int i = 0; i < 10000; ++i) {
        const Geo g = gen.geodesic();
        const double t = gen.uniform(-4, 4), r = gen.uniform(-4, 4);
        const P p = g.from_fermi(t, r);
        const auto f = g.fermi(p);
        REQUIRE(std::abs(f.t - t) <= 1e-9);
        REQUIRE(std::abs(f.r - r) <= 1e-9);
        const double d = distance(g.origin(), p);
        REQUIRE(testgen::rel_err(std::cosh(d), std::cosh(t) * std::cosh(r)) <= 1e-9);
    }
}

TEST_CASE("law of sines on random triangles") {
    Gen gen(19);
    for (int i = 0; i < 10000; ++i) {
        const P a = gen.point(3), b = gen.point(3), c = gen.point(3);
        const double ab = distance(a, b), bc = distance(b, c), ca = distance(c, a);
        if (std::min({ab, bc, ca}) < 1e-2) continue;
        const double A = vertex_angle(a, b, c), Bv = vertex_angle(b, c, a), C = vertex_angle(c, a, b);
        if (std::min({A, Bv, C}) < 1e-3) continue;
        const double ra = std::sinh(bc) / std::sin(A), rb = std::sinh(ca) / std::sin(Bv), rc = std::sinh(ab) / std::sin(C);
        REQUIRE(testgen::rel_err(ra, rb) <= 1e-8);
        REQUIRE(testgen::rel_err(rb, rc) <= 1e-8);
    }
}

TEST_CASE("busemann closed form and Lipschitz bound") {
    CHECK(busemann(B(0), P(0.5, 0), P()) == doctest::Approx(std::log(3.0)));
    const P base(0.2, 0.1);
    CHECK(busemann(B(1.0), base, base) == 0.0);
    // finite-t limit t - d(p, beta(t)) along the ray from 0
    const P p(-0.1, 0.35);
    const double t = 18;
    const P ray = P::from_polar(0.4, t);
    CHECK(t - distance(p, ray) == doctest::Approx(busemann(B(0.4), p)).epsilon(1e-6));
    Gen gen(20);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const B xi = gen.boundary();
        const P x = gen.point(3), y = gen.point(3);
        if (std::abs(busemann(xi, x) - busemann(xi, y)) > distance(x, y) + 1e-12) ++violations;
        const Geo ray_geo = geodesic_of<double>(x, xi, x);
        const double s = gen.uniform(0, 10);
        REQUIRE(std::abs(busemann(xi, ray_geo.point_at(s), x) - s) <= 1e-9);
    }
    CHECK(violations == 0);
}

TEST_CASE("axis_of") {
    const auto ax = axis_of(Iso::translation(1.7));
    CHECK(ax.length == doctest::Approx(1.7));
    CHECK(ax.geodesic.alpha().theta() == doctest::Approx(kPi<double>));
    CHECK(ax.geodesic.omega().theta() == doctest::Approx(0).epsilon(1e-15));
    CHECK_THROWS_AS(axis_of(Iso::rotation(0.4)), Error);
    CHECK_THROWS_AS(axis_of(Iso::identity()), Error);
    // power iteration: g^k 0 converges to the attracting point
    Gen gen(21);
    for (int i = 0; i < 50; ++i) {
        const Iso g = gen.isometry(2.0);
        if (!g.is_loxodromic(1e-3)) continue;
        const auto a = axis_of(g);
        Iso gk, gmk;
        for (int k = 0; k < 60; ++k) {
            gk = gk * g;
            gmk = gmk * g.inverse();
        }
        CHECK(angular_distance(gk.apply(LiftedPoint<double>(P())).direction(), a.geodesic.omega().theta()) <= 1e-6);
        CHECK(angular_distance(gmk.apply(LiftedPoint<double>(P())).direction(), a.geodesic.alpha().theta()) <= 1e-6);
        const P on = a.geodesic.point_at(0.3);
        CHECK(distance(g.apply(on), a.geodesic.point_at(0.3 + a.length)) <= 1e-8);
    }
}

TEST_CASE("cross_angle") {
    const Geo re = real_diameter();
    const Geo im = geodesic_of<double>(B(3 * kPi<double> / 2), B(kPi<double> / 2));
    const auto c = cross_angle(re, im);
    REQUIRE(c);
    CHECK(std::abs(c->point.z()) < 1e-15);
    CHECK(c->angle == doctest::Approx(kPi<double> / 2));
    CHECK_FALSE(cross_angle(re, re));
    CHECK_FALSE(cross_angle(Geo::from_endpoints(B(0), B(kPi<double>)), Geo::from_endpoints(B(kPi<double> / 4), B(kPi<double> / 2))));
    Gen gen(22);
    for (int i = 0; i < 500; ++i) {
        const Geo g1 = gen.geodesic(), g2 = gen.geodesic();
        const auto x = cross_angle(g1, g2);
        const auto y = cross_angle(g2, g1);
        REQUIRE(x.has_value() == y.has_value());
        if (!x) {
            CHECK(geodesic_distance(g1, g2) > 0);
            continue;
        }
        CHECK(g1.distance_to(x->point) <= 1e-9);
        CHECK(g2.distance_to(x->point) <= 1e-9);
        CHECK(x->angle == doctest::Approx(y->angle).epsilon(1e-9));
        // angle from tangent directions at the crossing point
        const double t1 = g1.tangent_angle(g1.fermi(x->point).t), t2 = g2.tangent_angle(g2.fermi(x->point).t);
        CHECK(angular_distance(t1, t2) == doctest::Approx(x->angle).epsilon(1e-8));
    }
}

TEST_CASE("geodesic distance by cross ratio") {
    const Geo re = real_diameter();
    for (double rho : {0.1, 0.4, 0.8}) {
        const Geo arc = Geo::from_endpoints(B(kPi<double> / 2 - 2 * std::atan((1 - rho) / (1 + rho))), B(kPi<double> / 2 + 2 * std::atan((1 - rho) / (1 + rho))));
        CHECK(std::abs(arc.origin().z().imag() - rho) < 1e-12);
        CHECK(geodesic_distance(re, arc) == doctest::Approx(2 * std::atanh(rho)));
    }
}

TEST_CASE("transformed geodesic keeps its parametrization") {
    Gen gen(23);
    for (int i = 0; i < 200; ++i) {
        const Geo g = gen.geodesic();
        const Iso m = gen.isometry();
        const Geo h = g.transformed(m);
        const P p = gen.point(2);
        const auto f1 = g.fermi(p), f2 = h.fermi(m.apply(p));
        CHECK(f1.t == doctest::Approx(f2.t).epsilon(1e-9));
        CHECK(f1.r == doctest::Approx(f2.r).epsilon(1e-9));
        CHECK(distance(h.point_at(1.0), m.apply(g.point_at(1.0))) <= 1e-9);
    }
}

TEST_CASE("far points keep accurate distances") {
    const P q = Iso::rotation(0.3).apply(P(0.1, 0.0));
    const LiftedPoint<double> far = Iso::translation(200.0).apply(LiftedPoint<double>(q));
    // d(0, T q) = d(T^-1 0, q), and T^-1 0 sits 200 units out towards -1
    const double expected = 200 - busemann(B(kPi<double>), q);
    CHECK(distance(LiftedPoint<double>(P()), far) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(far.radius() == doctest::Approx(expected).epsilon(1e-13));
}

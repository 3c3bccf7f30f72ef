#pragma once

// Poincare disk kernel. Everything is templated on the real scalar so the
// same code runs in double for production and long double in test oracles.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "rotlab/error.hpp"

namespace rotlab::hyp {

template <class T> using Complex = std::complex<T>;
template <class T> using Matrix2c = Eigen::Matrix<Complex<T>, 2, 2>;

template <class T> inline constexpr T kPi = std::numbers::pi_v<T>;
template <class T> inline constexpr T kLn2 = std::numbers::ln2_v<T>;

// Points closer than this to the unit circle are not accepted as DiskPoints.
template <class T> inline constexpr T kBoundaryMargin = T(1e-15);

template <class T> T log_cosh(T x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2 * x)) - kLn2<T>;
}

// 1 - tanh(x) for x >= 0, without cancellation.
template <class T> T one_minus_tanh(T x) {
    const T e = std::exp(-2 * x);
    return 2 * e / (1 + e);
}

// acosh(exp(L)) for L >= 0.
template <class T> T acosh_exp(T L) {
    if (L <= 0) return 0;
    return L + std::log1p(std::sqrt(-std::expm1(-2 * L)));
}

// acosh(1 + exp(lambda)).
template <class T> T acosh1p_exp(T lambda) {
    if (lambda < 30) {
        const T y = std::exp(lambda);
        return std::log1p(y + std::sqrt(y * (y + 2)));
    }
    return lambda + kLn2<T> + std::exp(-lambda);
}

template <class T> T wrap_angle(T theta) {
    theta = std::fmod(theta, 2 * kPi<T>);
    if (theta < 0) theta += 2 * kPi<T>;
    if (theta >= 2 * kPi<T>) theta = 0;
    return theta;
}

// Distance between two angles on the circle, in [0, pi].
template <class T> T angular_distance(T a, T b) {
    const T d = wrap_angle(a - b);
    return std::min(d, 2 * kPi<T> - d);
}

template <class T>
class DiskPoint {
public:
    DiskPoint() = default;

    explicit DiskPoint(Complex<T> z) : z_(z) {
        if (!(std::abs(z) < 1 - kBoundaryMargin<T>)) throw Error(ErrorCode::OutsideDisk, "point on or outside the unit circle");
    }

    DiskPoint(T x, T y) : DiskPoint(Complex<T>(x, y)) {}

    // angle and hyperbolic distance from the origin
    static DiskPoint from_polar(T angle, T radius) { return DiskPoint(std::polar(std::tanh(radius / 2), angle)); }

    const Complex<T>& z() const { return z_; }

    T one_minus_abs2() const {
        const T r = std::abs(z_);
        return (1 - r) * (1 + r);
    }

private:
    Complex<T> z_{};
};

template <class T>
class BoundaryPoint {
public:
    BoundaryPoint() = default;
    explicit BoundaryPoint(T theta) : theta_(wrap_angle(theta)) {}

    static BoundaryPoint from_complex(Complex<T> z) { return BoundaryPoint(std::arg(z)); }

    T theta() const { return theta_; }
    Complex<T> point() const { return std::polar(T(1), theta_); }

private:
    T theta_ = 0;
};

// A point that may lie arbitrarily far out: the coordinate is kept together
// with an accurate value of log(1 - |z|^2), so distances stay meaningful after
// the coordinate itself has rounded onto the circle.
template <class T>
struct LiftedPoint {
    Complex<T> z{};
    T log_one_minus = 0;

    LiftedPoint() = default;
    LiftedPoint(const DiskPoint<T>& p) : z(p.z()), log_one_minus(std::log(p.one_minus_abs2())) {}
    LiftedPoint(Complex<T> z_, T log_one_minus_) : z(z_), log_one_minus(log_one_minus_) {}

    T radius() const { return 2 * std::log1p(std::min<T>(std::abs(z), 1)) - log_one_minus; }
    T direction() const { return wrap_angle(std::arg(z)); }
};

template <class T>
T distance(const LiftedPoint<T>& p, const LiftedPoint<T>& q) {
    const T num = std::abs(p.z - q.z);
    if (num == 0) return 0;
    return acosh1p_exp(kLn2<T> + 2 * std::log(num) - (p.log_one_minus + q.log_one_minus));
}

template <class T>
T distance(const DiskPoint<T>& p, const DiskPoint<T>& q) {
    return distance(LiftedPoint<T>(p), LiftedPoint<T>(q));
}

// Orientation-preserving isometry z -> (a z + b) / (conj(b) z + conj(a)) with
// |a|^2 - |b|^2 = 1. Stored as unit phases of a and b plus h = d(0, g 0) / 2,
// so a = cosh(h) a_, b = sinh(h) b_ and nothing overflows for long products.
template <class T>
class Isometry {
public:
    Isometry() = default;

    static Isometry identity() { return Isometry(); }

    static Isometry rotation(T phi) { return Isometry(std::polar(T(1), phi / 2), Complex<T>(1), 0); }

    // translation by signed distance d along the real diameter
    static Isometry translation(T d) { return Isometry(Complex<T>(1), Complex<T>(d >= 0 ? 1 : -1), std::abs(d) / 2); }

    // the translation along the diameter through p sending 0 to p
    static Isometry moving_origin_to(const DiskPoint<T>& p) {
        const T r = std::abs(p.z());
        if (r == 0) return identity();
        return Isometry(Complex<T>(1), p.z() / r, std::atanh(r));
    }

    static Isometry from_su11(Complex<T> a, Complex<T> b) {
        const T ra = std::abs(a), rb = std::abs(b);
        if (!(rb < ra)) throw Error(ErrorCode::OutsideDisk, "matrix is not in SU(1,1)");
        return Isometry(a / ra, rb > 0 ? b / rb : Complex<T>(1), std::atanh(rb / ra));
    }

    const Complex<T>& unit_a() const { return a_; }
    const Complex<T>& unit_b() const { return b_; }
    T half_distance() const { return h_; }
    T origin_displacement() const { return 2 * h_; }
    T log_scale() const { return log_cosh(h_); }

    Matrix2c<T> matrix() const {
        if (h_ > 700) throw Error(ErrorCode::NumericalOverflow, "matrix entries exceed double range");
        const Complex<T> a = std::cosh(h_) * a_;
        const Complex<T> b = std::sinh(h_) * b_;
        Matrix2c<T> m;
        m << a, b, std::conj(b), std::conj(a);
        return m;
    }

    Isometry inverse() const { return Isometry(std::conj(a_), -b_, h_); }

    Complex<T> apply_raw(Complex<T> z) const {
        const T t = std::tanh(h_);
        return (a_ * z + t * b_) / (t * std::conj(b_) * z + std::conj(a_));
    }

    DiskPoint<T> apply(const DiskPoint<T>& p) const { return DiskPoint<T>(apply_raw(p.z())); }

    BoundaryPoint<T> apply(const BoundaryPoint<T>& xi) const { return BoundaryPoint<T>::from_complex(apply_raw(xi.point())); }

    LiftedPoint<T> apply(const LiftedPoint<T>& p) const {
        const T t = std::tanh(h_);
        const Complex<T> den = t * std::conj(b_) * p.z + std::conj(a_);
        const Complex<T> w = (a_ * p.z + t * b_) / den;
        return LiftedPoint<T>(w, p.log_one_minus - 2 * log_cosh(h_) - 2 * std::log(std::abs(den)));
    }

    Complex<T> derivative(Complex<T> z) const {
        const T t = std::tanh(h_);
        const Complex<T> den = t * std::conj(b_) * z + std::conj(a_);
        return std::exp(-2 * log_cosh(h_)) / (den * den);
    }

    // log |tr| / 2, finite for every representable element
    T log_half_trace() const { return log_cosh(h_) + std::log(std::abs(a_.real())); }

    bool is_loxodromic(T tol = T(1e-9)) const { return log_half_trace() > std::log1p(tol / 2); }

    T translation_length() const {
        const T L = log_half_trace();
        return L > 0 ? 2 * acosh_exp(L) : T(0);
    }

    friend Isometry operator*(const Isometry& g, const Isometry& k) {
        const T t1 = std::tanh(g.h_), t2 = std::tanh(k.h_);
        const T tt = t1 * t2;
        const Complex<T> aa = g.a_ * k.a_;
        const Complex<T> bb = g.b_ * std::conj(k.b_);
        const Complex<T> w = tt * bb * std::conj(aa);
        T log_p;
        if (tt < T(0.5)) {
            log_p = std::log1p(2 * w.real() + std::norm(w)) / 2;
        } else {
            const T e1 = one_minus_tanh(g.h_), e2 = one_minus_tanh(k.h_);
            const T u = e1 + e2 - e1 * e2;
            const T c = std::cos(std::arg(w) / 2);
            log_p = std::log(u * u + 4 * tt * c * c) / 2;
        }
        const Complex<T> p = aa + tt * bb;
        const Complex<T> q = t2 * g.a_ * k.b_ + t1 * g.b_ * std::conj(k.a_);
        const T scale = log_cosh(g.h_) + log_cosh(k.h_);
        const T L = scale + log_p;
        const T h = L < T(0.25) ? std::asinh(std::exp(scale) * std::abs(q)) : acosh_exp(L);
        const T rp = std::abs(p), rq = std::abs(q);
        return Isometry(rp > 0 ? p / rp : Complex<T>(1), rq > 0 ? q / rq : Complex<T>(1), h);
    }

    Isometry& operator*=(const Isometry& k) { return *this = *this * k; }

private:
    Isometry(Complex<T> a, Complex<T> b, T h) : a_(a), b_(b), h_(h) {}

    Complex<T> a_{1};
    Complex<T> b_{1};
    T h_ = 0;
};

template <class T>
struct FermiCoords {
    T t = 0;  // signed arclength of the foot point from the geodesic origin
    T r = 0;  // signed distance, positive on the left of the oriented geodesic
};

template <class T>
class Geodesic {
public:
    Geodesic() : Geodesic(BoundaryPoint<T>(kPi<T>), BoundaryPoint<T>(0), DiskPoint<T>()) {}

    // origin must lie on the geodesic
    Geodesic(BoundaryPoint<T> alpha, BoundaryPoint<T> omega, DiskPoint<T> origin) : alpha_(alpha), omega_(omega), origin_(origin) {
        const Isometry<T> to_zero = Isometry<T>::moving_origin_to(origin).inverse();
        const Complex<T> w = to_zero.apply_raw(omega.point());
        normalizer_ = Isometry<T>::rotation(-std::arg(w)) * to_zero;
    }

    static Geodesic from_endpoints(BoundaryPoint<T> alpha, BoundaryPoint<T> omega) {
        const T sep = angular_distance(alpha.theta(), omega.theta());
        if (sep < T(1e-12)) throw Error(ErrorCode::DegenerateEndpoints, "geodesic endpoints coincide");
        const Complex<T> mid = alpha.point() + omega.point();
        const T m = std::abs(mid);
        if (m < T(1e-14)) return Geodesic(alpha, omega, DiskPoint<T>());
        return Geodesic(alpha, omega, DiskPoint<T>(std::polar(std::tan(kPi<T> / 4 - sep / 4), std::arg(mid))));
    }

    const BoundaryPoint<T>& alpha() const { return alpha_; }
    const BoundaryPoint<T>& omega() const { return omega_; }
    const DiskPoint<T>& origin() const { return origin_; }
    // maps origin to 0, alpha to -1 and omega to +1
    const Isometry<T>& normalizer() const { return normalizer_; }

    Geodesic with_origin_near(const DiskPoint<T>& hint) const {
        return Geodesic(alpha_, omega_, point_at(fermi(hint).t));
    }

    DiskPoint<T> point_at(T t) const {
        return DiskPoint<T>(normalizer_.inverse().apply_raw(Complex<T>(std::tanh(t / 2), 0)));
    }

    LiftedPoint<T> lifted_point_at(T t) const {
        return normalizer_.inverse().apply(LiftedPoint<T>(Complex<T>(std::tanh(t / 2), 0), -2 * log_cosh(t / 2)));
    }

    DiskPoint<T> from_fermi(T t, T r) const {
        const Complex<T> q = Isometry<T>::translation(t).apply_raw(Complex<T>(0, std::tanh(r / 2)));
        return DiskPoint<T>(normalizer_.inverse().apply_raw(q));
    }

    FermiCoords<T> fermi(const Complex<T>& z) const { return standard_fermi(normalizer_.apply_raw(z)); }
    FermiCoords<T> fermi(const DiskPoint<T>& p) const { return fermi(p.z()); }

    // Euclidean direction of the forward tangent at parameter t
    T tangent_angle(T t) const {
        const Isometry<T> inv = normalizer_.inverse();
        return std::arg(inv.derivative(Complex<T>(std::tanh(t / 2), 0)));
    }

    T distance_to(const DiskPoint<T>& p) const { return std::abs(fermi(p).r); }

    Geodesic reversed() const { return Geodesic(omega_, alpha_, origin_); }

    Geodesic transformed(const Isometry<T>& g) const {
        Geodesic out(*this);
        out.alpha_ = g.apply(alpha_);
        out.omega_ = g.apply(omega_);
        out.origin_ = g.apply(origin_);
        out.normalizer_ = normalizer_ * g.inverse();
        return out;
    }

    static FermiCoords<T> standard_fermi(const Complex<T>& q) {
        const T rq = std::abs(q);
        FermiCoords<T> f;
        f.t = std::log(std::abs(T(1) + q)) - std::log(std::abs(T(1) - q));
        f.r = std::asinh(2 * q.imag() / ((1 - rq) * (1 + rq)));
        return f;
    }

private:
    BoundaryPoint<T> alpha_;
    BoundaryPoint<T> omega_;
    DiskPoint<T> origin_;
    Isometry<T> normalizer_;
};

template <class T> using Anchor = std::variant<BoundaryPoint<T>, DiskPoint<T>>;

// Oriented geodesic from a to b. Without a hint the origin is the point of
// the geodesic closest to 0; with one it is the projection of the hint.
template <class T>
Geodesic<T> geodesic_of(const Anchor<T>& a, const Anchor<T>& b, const std::optional<DiskPoint<T>>& hint = std::nullopt) {
    BoundaryPoint<T> alpha, omega;
    if (const auto* p = std::get_if<DiskPoint<T>>(&a)) {
        const Isometry<T> to_p = Isometry<T>::moving_origin_to(*p);
        const Isometry<T> from_p = to_p.inverse();
        Complex<T> q;
        if (const auto* bp = std::get_if<DiskPoint<T>>(&b)) {
            q = from_p.apply_raw(bp->z());
            if (std::abs(q) < T(1e-14)) throw Error(ErrorCode::DegenerateEndpoints, "geodesic through coincident points");
        } else {
            q = from_p.apply_raw(std::get<BoundaryPoint<T>>(b).point());
        }
        const Complex<T> u = q / std::abs(q);
        alpha = BoundaryPoint<T>::from_complex(to_p.apply_raw(-u));
        omega = BoundaryPoint<T>::from_complex(to_p.apply_raw(u));
    } else if (const auto* q = std::get_if<DiskPoint<T>>(&b)) {
        const Isometry<T> to_q = Isometry<T>::moving_origin_to(*q);
        const Complex<T> u = to_q.inverse().apply_raw(std::get<BoundaryPoint<T>>(a).point());
        alpha = std::get<BoundaryPoint<T>>(a);
        omega = BoundaryPoint<T>::from_complex(to_q.apply_raw(-u / std::abs(u)));
    } else {
        alpha = std::get<BoundaryPoint<T>>(a);
        omega = std::get<BoundaryPoint<T>>(b);
    }
    Geodesic<T> g = Geodesic<T>::from_endpoints(alpha, omega);
    if (hint) g = g.with_origin_near(*hint);
    return g;
}

// B_xi(p) - B_xi(base), increasing towards xi.
template <class T>
T busemann(const BoundaryPoint<T>& xi, const DiskPoint<T>& p, const DiskPoint<T>& base = DiskPoint<T>()) {
    const auto kernel = [&](const DiskPoint<T>& z) { return std::log(z.one_minus_abs2()) - 2 * std::log(std::abs(xi.point() - z.z())); };
    return kernel(p) - kernel(base);
}

template <class T>
struct Axis {
    Geodesic<T> geodesic;  // oriented from the repelling to the attracting fixed point
    T length = 0;
};

template <class T>
Axis<T> axis_of(const Isometry<T>& g) {
    if (!g.is_loxodromic()) throw Error(ErrorCode::NotLoxodromic, "element has no translation axis");
    const Complex<T> a = g.unit_a();
    const T t = std::tanh(g.half_distance());
    const T sech2 = std::exp(-2 * log_cosh(g.half_distance()));
    const T s = std::sqrt(std::max<T>(a.real() * a.real() - sech2, 0));
    const Complex<T> den = t * std::conj(g.unit_b());
    const Complex<T> z1 = Complex<T>(s, a.imag()) / den;
    const Complex<T> z2 = Complex<T>(-s, a.imag()) / den;
    const auto expansion = [&](Complex<T> z) { return std::abs(t * std::conj(g.unit_b()) * z + std::conj(a)); };
    // |g'(z)| < 1 at the attracting point
    const bool first_attracts = expansion(z1) > expansion(z2);
    const Complex<T> attract = first_attracts ? z1 : z2;
    const Complex<T> repel = first_attracts ? z2 : z1;
    return Axis<T>{Geodesic<T>::from_endpoints(BoundaryPoint<T>::from_complex(repel), BoundaryPoint<T>::from_complex(attract)), g.translation_length()};
}

template <class T>
struct Crossing {
    T angle = 0;  // angle between the forward tangents, in (0, pi)
    DiskPoint<T> point;
};

template <class T>
std::optional<Crossing<T>> cross_angle(const Geodesic<T>& g1, const Geodesic<T>& g2, T tol = T(1e-13)) {
    const Isometry<T>& m = g1.normalizer();
    const Complex<T> u = m.apply_raw(g2.alpha().point());
    const Complex<T> v = m.apply_raw(g2.omega().point());
    if (std::abs(u.imag()) <= tol || std::abs(v.imag()) <= tol) return std::nullopt;
    if ((u.imag() > 0) == (v.imag() > 0)) return std::nullopt;
    T x = 0;
    const Complex<T> sum = u + v;
    if (std::abs(sum) > T(1e-14)) {
        const T c = (T(2) * u * v / sum).real();
        const T disc = std::sqrt(std::max<T>(c * c - 1, 0));
        x = 1 / (c + (c >= 0 ? disc : -disc));
    }
    const Isometry<T> back = Isometry<T>::translation(-2 * std::atanh(x));
    const T angle = std::abs(std::arg(back.apply_raw(v)));
    return Crossing<T>{angle, DiskPoint<T>(m.inverse().apply_raw(Complex<T>(x, 0)))};
}

// Distance between two geodesics; zero when they meet or share an endpoint.
template <class T>
T geodesic_distance(const Geodesic<T>& g1, const Geodesic<T>& g2) {
    if (cross_angle(g1, g2)) return 0;
    const Complex<T> x1 = g1.alpha().point(), x2 = g1.omega().point();
    const Complex<T> y1 = g2.alpha().point(), y2 = g2.omega().point();
    const T num = std::abs((x1 - y1) * (x2 - y2));
    const T den = std::abs((x1 - y2) * (x2 - y1));
    if (num == 0 || den == 0) return 0;
    const T r = std::min(num / den, den / num);
    return 2 * std::atanh(std::sqrt(r));
}

// Interior angle at vertex v between the geodesic segments towards p and q.
template <class T>
T vertex_angle(const DiskPoint<T>& v, const DiskPoint<T>& p, const DiskPoint<T>& q) {
    const Isometry<T> to_zero = Isometry<T>::moving_origin_to(v).inverse();
    return angular_distance(std::arg(to_zero.apply_raw(p.z())), std::arg(to_zero.apply_raw(q.z())));
}

// Area of a convex polygon from its angle defect.
template <class T>
T polygon_area(const std::vector<DiskPoint<T>>& vertices) {
    const std::size_t n = vertices.size();
    T angles = 0;
    for (std::size_t i = 0; i < n; ++i) angles += vertex_angle(vertices[i], vertices[(i + n - 1) % n], vertices[(i + 1) % n]);
    return T(n - 2) * kPi<T> - angles;
}

} // namespace rotlab::hyp

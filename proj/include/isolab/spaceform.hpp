#pragma once

// Exact constant-curvature geometry: the simply connected model spaces of
// curvature K (sphere, Euclidean space, hyperbolic space), their distance
// functions, exponential maps, the triangle side function, angle inversion,
// and ball volumes.
//
// Coordinate models:
//   K = 0  : R^n, a point is its n coordinates.
//   K > 0  : sphere of radius R = 1/sqrt(K) in R^{n+1}; last coordinate is
//            the pole axis.
//   K < 0  : upper hyperboloid <x,x>_M = -R^2, R = 1/sqrt(-K), in Minkowski
//            space with signature (+..+,-); last coordinate is time-like
//            and positive.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace isolab {

struct SpaceFormParams {
    double K = 0.0;  // sectional curvature, 1/length^2
    int n = 2;       // dimension >= 2

    SpaceFormParams() = default;
    SpaceFormParams(double curvature, int dim) : K(curvature), n(dim) {
        if (n < 2) throw std::domain_error("space form dimension must be >= 2");
        if (!std::isfinite(K)) throw std::domain_error("curvature must be finite");
    }

    bool curved() const { return K != 0.0; }
    // sqrt(|K|), 0 for the flat case
    double lambda() const { return std::sqrt(std::fabs(K)); }
    // model radius for K != 0
    double radius() const { return 1.0 / lambda(); }
    // diameter of the model space (infinite unless K > 0)
    double model_diameter() const {
        return K > 0.0 ? std::numbers::pi / std::sqrt(K)
                       : std::numeric_limits<double>::infinity();
    }
    size_t embed_dim() const { return K == 0.0 ? size_t(n) : size_t(n) + 1; }
};

struct SpaceFormPoint {
    std::vector<double> x;

    SpaceFormPoint() = default;
    explicit SpaceFormPoint(std::vector<double> coords) : x(std::move(coords)) {}
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Minkowski product with the last coordinate time-like.
inline double mdot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < a.size(); ++i) s += a[i] * b[i];
    return s - a.back() * b.back();
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void check_point(const SpaceFormParams& p, const SpaceFormPoint& q,
                        const char* who) {
    if (q.x.size() != p.embed_dim())
        throw std::domain_error(std::string(who) + ": wrong coordinate count");
    if (p.K > 0.0) {
        const double r2 = 1.0 / p.K;
        if (std::fabs(dot(q.x, q.x) - r2) > 1e-10 * r2)
            throw std::domain_error(std::string(who) + ": point not on the model sphere");
    } else if (p.K < 0.0) {
        const double r2 = -1.0 / p.K;
        if (std::fabs(mdot(q.x, q.x) + r2) > 1e-10 * r2)
            throw std::domain_error(std::string(who) + ": point not on the model hyperboloid");
        if (q.x.back() <= 0.0)
            throw std::domain_error(std::string(who) + ": point on the lower sheet");
    }
}

}  // namespace detail

// Third side of the geodesic triangle with sides s,t and included angle
// theta in the space form of curvature K.  Evaluated through half-angle
// identities, which are free of cancellation for small separations:
//   flat:        c^2        = (s-t)^2 + 4 s t sin^2(theta/2)
//   sphere:      sin^2(c/2) = sin^2((s-t)/2) + sin s sin t sin^2(theta/2)
//   hyperbolic: sinh^2(c/2) = sinh^2((s-t)/2) + sinh s sinh t sin^2(theta/2)
// For |K| max(s,t)^2 below 1e-8 a curvature series about K = 0 is used
// instead so the K -> 0 limit is smooth across the branch.
inline double law_of_cosines(double K, double theta, double s, double t) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi + 1e-15))
        throw std::domain_error("law_of_cosines: angle outside [0, pi]");
    if (s < 0.0 || t < 0.0)
        throw std::domain_error("law_of_cosines: negative geodesic length");
    if (!std::isfinite(K)) throw std::domain_error("law_of_cosines: bad curvature");
    theta = std::min(theta, std::numbers::pi);
    if (K > 0.0) {
        const double diam = std::numbers::pi / std::sqrt(K);
        if (s > diam * (1.0 + 1e-12) || t > diam * (1.0 + 1e-12))
            throw std::domain_error("law_of_cosines: side exceeds model diameter");
        s = std::min(s, diam);
        t = std::min(t, diam);
    }

    const double m = std::max(s, t);
    // sin^2(theta/2); the (1-cos)/2 form is exact at theta = pi/2 and has no
    // cancellation once cos(theta) <= 0
    const double hsq = theta >= std::numbers::pi / 2.0
                           ? 0.5 * (1.0 - std::cos(theta))
                           : [&] { const double v = std::sin(theta / 2.0); return v * v; }();
    if (std::fabs(K) * m * m < 1e-8) {
        // flat value plus first two curvature corrections
        const double mu = std::cos(theta);
        const double c0sq = (s - t) * (s - t) + 4.0 * s * t * hsq;
        const double st = s * t;
        const double a1 = -st * st * (1.0 - mu * mu) / 3.0;
        const double s2 = s * s, t2 = t * t;
        const double a2 = c0sq * a1 / 6.0 - c0sq * c0sq * c0sq / 360.0 +
                          (s2 * s2 * s2 + t2 * t2 * t2) / 360.0 +
                          (s2 * s2 * t2 + s2 * t2 * t2) / 24.0 -
                          mu * (s2 * s2 * st + st * t2 * t2) / 60.0 -
                          mu * st * st * st / 18.0;
        const double csq = c0sq + K * a1 + K * K * a2;
        return std::sqrt(std::max(csq, 0.0));
    }
    if (K > 0.0) {
        const double lam = std::sqrt(K);
        const double sd = std::sin(lam * (s - t) / 2.0);
        double v = sd * sd + std::sin(lam * s) * std::sin(lam * t) * hsq;
        v = std::clamp(v, 0.0, 1.0);
        return 2.0 * std::asin(std::sqrt(v)) / lam;
    }
    const double lam = std::sqrt(-K);
    const double sd = std::sinh(lam * (s - t) / 2.0);
    const double v = sd * sd + std::sinh(lam * s) * std::sinh(lam * t) * hsq;
    return 2.0 * std::asinh(std::sqrt(std::max(v, 0.0))) / lam;
}

// Solves law_of_cosines(K, theta, a, b) = d for the unique theta in [0, pi].
// The function is nondecreasing in theta, so plain bisection suffices.
inline double invert_angle(double K, double a, double b, double d) {
    if (a == 0.0 && b == 0.0)
        throw std::domain_error("invert_angle: both sides zero (angle undefined)");
    if (a < 0.0 || b < 0.0 || d < 0.0)
        throw std::domain_error("invert_angle: negative length");
    const double lo = law_of_cosines(K, 0.0, a, b);
    const double hi = law_of_cosines(K, std::numbers::pi, a, b);
    const double slack = 1e-9 * (1.0 + std::fabs(d));
    if (d < lo - slack || d > hi + slack)
        throw std::domain_error("invert_angle: no solution, d outside [F(0), F(pi)]");
    double tl = 0.0, th = std::numbers::pi;
    for (int it = 0; it < 80; ++it) {
        const double tm = 0.5 * (tl + th);
        const double fm = law_of_cosines(K, tm, a, b);
        if (std::fabs(fm - d) < 1e-12) return tm;
        (fm < d ? tl : th) = tm;
    }
    return 0.5 * (tl + th);
}

// Base point of the standard polar chart: the flat origin, or the pole on
// the last axis for curved models.
inline SpaceFormPoint origin_point(const SpaceFormParams& p) {
    std::vector<double> x(p.embed_dim(), 0.0);
    if (p.curved()) x.back() = p.radius();
    return SpaceFormPoint(std::move(x));
}

// Exponential map: follow the unit tangent v from base for arclength t.
inline SpaceFormPoint exp_map(const SpaceFormParams& p, const SpaceFormPoint& base,
                              const std::vector<double>& v, double t) {
    detail::check_point(p, base, "exp_map");
    if (v.size() != p.embed_dim())
        throw std::domain_error("exp_map: direction has wrong coordinate count");
    if (t < 0.0) throw std::domain_error("exp_map: negative arclength");
    if (p.K == 0.0) {
        const double nv = detail::norm(v);
        if (std::fabs(nv - 1.0) > 1e-9)
            throw std::domain_error("exp_map: direction is not unit length");
        std::vector<double> out(base.x);
        for (size_t i = 0; i < out.size(); ++i) out[i] += t * v[i];
        return SpaceFormPoint(std::move(out));
    }
    const double lam = p.lambda();
    if (p.K > 0.0) {
        if (std::fabs(detail::dot(v, v) - 1.0) > 1e-9 ||
            std::fabs(detail::dot(base.x, v)) > 1e-9 * p.radius())
            throw std::domain_error("exp_map: direction not unit tangent at base");
        const double c = std::cos(lam * t), s = std::sin(lam * t) / lam;
        std::vector<double> out(base.x.size());
        for (size_t i = 0; i < out.size(); ++i) out[i] = c * base.x[i] + s * v[i];
        return SpaceFormPoint(std::move(out));
    }
    if (std::fabs(detail::mdot(v, v) - 1.0) > 1e-9 ||
        std::fabs(detail::mdot(base.x, v)) > 1e-9 * p.radius())
        throw std::domain_error("exp_map: direction not unit tangent at base");
    const double c = std::cosh(lam * t), s = std::sinh(lam * t) / lam;
    std::vector<double> out(base.x.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = c * base.x[i] + s * v[i];
    return SpaceFormPoint(std::move(out));
}

// Geodesic distance between two model points, via chordal quantities so
// nearby points lose no precision.
inline double distance(const SpaceFormParams& p, const SpaceFormPoint& a,
                       const SpaceFormPoint& b) {
    detail::check_point(p, a, "distance");
    detail::check_point(p, b, "distance");
    if (p.K == 0.0) {
        double s = 0.0;
        for (size_t i = 0; i < a.x.size(); ++i) {
            const double d = a.x[i] - b.x[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    const double R = p.radius();
    if (p.K > 0.0) {
        double q = 0.0;
        for (size_t i = 0; i < a.x.size(); ++i) {
            const double d = a.x[i] - b.x[i];
            q += d * d;
        }
        const double half = std::clamp(std::sqrt(q) / (2.0 * R), 0.0, 1.0);
        return 2.0 * R * std::asin(half);
    }
    std::vector<double> diff(a.x.size());
    for (size_t i = 0; i < a.x.size(); ++i) diff[i] = a.x[i] - b.x[i];
    const double q = std::max(detail::mdot(diff, diff), 0.0);
    return 2.0 * R * std::asinh(std::sqrt(q) / (2.0 * R));
}

// Unit tangent at a pointing toward b (undefined for coincident or, on the
// sphere, antipodal pairs).
inline std::vector<double> direction_between(const SpaceFormParams& p,
                                             const SpaceFormPoint& a,
                                             const SpaceFormPoint& b) {
    const double d = distance(p, a, b);
    if (d == 0.0) throw std::domain_error("direction_between: coincident points");
    if (p.K == 0.0) {
        std::vector<double> v(a.x.size());
        for (size_t i = 0; i < v.size(); ++i) v[i] = (b.x[i] - a.x[i]) / d;
        return v;
    }
    const double lam = p.lambda();
    const double alpha = lam * d;
    if (p.K > 0.0) {
        const double sa = std::sin(alpha);
        if (sa < 1e-12)
            throw std::domain_error("direction_between: antipodal pair, direction not unique");
        const double c = std::cos(alpha);
        std::vector<double> v(a.x.size());
        for (size_t i = 0; i < v.size(); ++i) v[i] = (b.x[i] - c * a.x[i]) * lam / sa;
        return v;
    }
    const double sa = std::sinh(alpha), c = std::cosh(alpha);
    std::vector<double> v(a.x.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = (b.x[i] - c * a.x[i]) * lam / sa;
    return v;
}

// Point a fraction tau in [0,1] along the minimizing geodesic from a to b.
inline SpaceFormPoint geodesic_point(const SpaceFormParams& p, const SpaceFormPoint& a,
                                     const SpaceFormPoint& b, double tau) {
    const double d = distance(p, a, b);
    if (d == 0.0) return a;
    return exp_map(p, a, direction_between(p, a, b), tau * d);
}

// Surface measure of the unit (n-1)-sphere.
inline double unit_sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) { return unit_sphere_area(n) / n; }

// Volume of the metric ball of radius r in the n-dimensional space form of
// curvature K:  V = int_0^r omega_{n-1} f_K(t)^{n-1} dt.
inline double ball_volume(int n, double K, double r) {
    if (n < 2) throw std::domain_error("ball_volume: dimension must be >= 2");
    if (r < 0.0) throw std::domain_error("ball_volume: negative radius");
    if (K > 0.0 && r > std::numbers::pi / std::sqrt(K) * (1.0 + 1e-12))
        throw std::domain_error("ball_volume: radius exceeds model diameter");
    const double lam = std::sqrt(std::fabs(K));
    if (K != 0.0 && lam * r < 1e-5) K = 0.0;  // f_K == t to near machine precision
    if (n == 2) {
        if (K == 0.0) return std::numbers::pi * r * r;
        const double sh = K > 0.0 ? std::sin(lam * r / 2.0) : std::sinh(lam * r / 2.0);
        return 4.0 * std::numbers::pi * sh * sh / std::fabs(K);
    }
    if (n == 3) {
        if (K == 0.0) return 4.0 / 3.0 * std::numbers::pi * r * r * r;
        if (K > 0.0)
            return 2.0 * std::numbers::pi / K * (r - std::sin(2.0 * lam * r) / (2.0 * lam));
        return 2.0 * std::numbers::pi / (-K) * (std::sinh(2.0 * lam * r) / (2.0 * lam) - r);
    }
    // general dimension by composite Simpson quadrature
    const int m = 4096;
    const double h = r / m;
    auto f = [&](double t) {
        double w;
        if (K == 0.0) w = t;
        else if (K > 0.0) w = std::sin(lam * t) / lam;
        else w = std::sinh(lam * t) / lam;
        return std::pow(w, n - 1);
    };
    double acc = f(0.0) + f(r);
    for (int i = 1; i < m; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return unit_sphere_area(n) * acc * h / 3.0;
}

}  // namespace isolab

#pragma once

// Rotationally symmetric surfaces g = dt^2 + f(t)^2 dphi^2: warp profiles,
// radial sectional curvature, geodesic shooting by fixed-step RK4 with the
// Clairaut constant as the accuracy monitor, and point-to-point distance by
// direction bisection over the shooting family.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "isolab/spaceform.hpp"

namespace isolab {

enum class WarpKind { SpaceForm, CurvatureDrift, Custom };

struct WarpProfile {
    std::function<double(double)> f;    // warp factor, f(0) = 0, f'(0) = 1
    std::function<double(double)> fp;   // f'
    std::function<double(double)> fpp;  // f''
    double t_max = 0.0;
    WarpKind kind = WarpKind::Custom;
    double param = 0.0;  // K for SpaceForm, s for CurvatureDrift

    // true when f vanishes at t_max (sphere-like second pole)
    bool far_pole() const { return f(t_max) < 1e-9 * t_max; }
};

struct WarpedPoint {
    double t = 0.0;    // radial distance from the pole
    double phi = 0.0;  // fiber angle, ignored at t = 0
};

struct GeodesicSample {
    double s;        // arclength
    double t, phi;   // position
    double dt, dphi; // unit-speed velocity components
};

struct GeodesicPath {
    std::vector<GeodesicSample> samples;
    double length = 0.0;          // arclength actually covered
    double clairaut = 0.0;        // c = f(t)^2 dphi/ds at launch
    double clairaut_drift = 0.0;  // max |c(s) - c| / max(|c|, 1)
    double speed_error = 0.0;     // max |dt^2 + f^2 dphi^2 - 1|
    bool exited = false;          // stopped at the domain boundary

    const GeodesicSample& end() const { return samples.back(); }
};

// ---------------------------------------------------------------------------
// profiles

inline WarpProfile space_form_profile(double K, double t_max = 50.0) {
    WarpProfile p;
    p.kind = WarpKind::SpaceForm;
    p.param = K;
    if (K == 0.0) {
        p.f = [](double t) { return t; };
        p.fp = [](double) { return 1.0; };
        p.fpp = [](double) { return 0.0; };
        p.t_max = t_max;
    } else if (K > 0.0) {
        const double lam = std::sqrt(K);
        p.f = [lam](double t) { return std::sin(lam * t) / lam; };
        p.fp = [lam](double t) { return std::cos(lam * t); };
        p.fpp = [lam](double t) { return -lam * std::sin(lam * t); };
        p.t_max = std::numbers::pi / lam;
    } else {
        const double lam = std::sqrt(-K);
        p.f = [lam](double t) { return std::sinh(lam * t) / lam; };
        p.fp = [lam](double t) { return std::cosh(lam * t); };
        p.fpp = [lam](double t) { return lam * std::sinh(lam * t); };
        p.t_max = t_max;
    }
    return p;
}

namespace drift {

// C^2 blend for the drifting curvature law on [1,2], chosen to minimize the
// worst-case |sect + K(r)^2| of the resulting family over |t-r| < 1 at
// r = 1.5 subject to K nondecreasing and |K'|, |K''| <= 5/s.  Coefficients
// of q(u), u = t-1, with K(t) = 1 + q(u)/s; boundary data q(0)=q'(0)=q''(0)=0
// and q(1), q'(1), q''(1) matching (ln t)^{1/3} at t = 2.
inline constexpr double kBlend[10] = {
    0.0, 0.0, 0.0,
    22.6227717897196,
    -111.86022169674618,
    293.73339625218074,
    -463.6655068107994,
    437.90993616138445,
    -228.44028256105932,
    50.584903909820667,
};

inline double qval(double u) {
    double r = 0.0;
    for (int i = 9; i >= 0; --i) r = r * u + kBlend[i];
    return r;
}
inline double qd1(double u) {
    double r = 0.0;
    for (int i = 9; i >= 1; --i) r = r * u + kBlend[i] * i;
    return r;
}
inline double qd2(double u) {
    double r = 0.0;
    for (int i = 9; i >= 2; --i) r = r * u + kBlend[i] * i * (i - 1);
    return r;
}

inline double outer_edge(double s) {  // e^{27 s^3}, +inf if it overflows
    const double e = 27.0 * s * s * s;
    return e > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(e);
}

// quintic smoothstep weight and derivatives
inline double w01(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
inline double w01d(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }
inline double w01dd(double u) { return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u); }

}  // namespace drift

// Drifting curvature law K_s(t): 1 on [0,1], the blended rise on [1,2],
// 1 + (ln t)^{1/3}/s on [2, e^{27 s^3}], then a smooth step up to the
// constant 4 + 1/(s e^{27 s^3} + s).
inline double drift_K(double s, double t, int deriv = 0) {
    if (s <= 0.0) throw std::domain_error("drift_K: family parameter must be positive");
    const double T1 = drift::outer_edge(s);
    if (T1 < 3.0)
        throw std::domain_error(
            "drift_K: s too small, outer regime e^{27 s^3} collides with the blend");
    auto g0 = [](double x) { return std::cbrt(std::log(x)); };
    auto g1 = [](double x) {
        const double L = std::log(x);
        return std::pow(L, -2.0 / 3.0) / (3.0 * x);
    };
    auto g2 = [](double x) {
        const double L = std::log(x);
        return -((2.0 / 9.0) * std::pow(L, -5.0 / 3.0) +
                 (1.0 / 3.0) * std::pow(L, -2.0 / 3.0)) /
               (x * x);
    };
    if (t <= 1.0) return deriv == 0 ? 1.0 : 0.0;
    if (t < 2.0) {
        const double u = t - 1.0;
        if (deriv == 0) return 1.0 + drift::qval(u) / s;
        if (deriv == 1) return drift::qd1(u) / s;
        return drift::qd2(u) / s;
    }
    if (t <= T1) {
        if (deriv == 0) return 1.0 + g0(t) / s;
        if (deriv == 1) return g1(t) / s;
        return g2(t) / s;
    }
    const double Kinf = 4.0 + 1.0 / (s * T1 + s);
    if (t >= T1 + 1.0) return deriv == 0 ? Kinf : 0.0;
    const double v = t - T1;
    const double a0 = 1.0 + g0(t) / s, a1 = g1(t) / s, a2 = g2(t) / s;
    const double w = drift::w01(v), wd = drift::w01d(v), wdd = drift::w01dd(v);
    if (deriv == 0) return (1.0 - w) * a0 + w * Kinf;
    if (deriv == 1) return (1.0 - w) * a1 + wd * (Kinf - a0);
    return (1.0 - w) * a2 + 2.0 * wd * (-a1) + wdd * (Kinf - a0);
}

// The drifting-curvature family: f(t) = sinh(K_s(t) t).
inline WarpProfile curvature_drift_profile(double s, double t_max = 50.0) {
    drift_K(s, 0.5);  // validate s
    WarpProfile p;
    p.kind = WarpKind::CurvatureDrift;
    p.param = s;
    p.t_max = t_max;
    p.f = [s](double t) { return std::sinh(drift_K(s, t) * t); };
    p.fp = [s](double t) {
        const double u = drift_K(s, t) * t;
        const double u1 = drift_K(s, t) + drift_K(s, t, 1) * t;
        return std::cosh(u) * u1;
    };
    p.fpp = [s](double t) {
        const double u = drift_K(s, t) * t;
        const double u1 = drift_K(s, t) + drift_K(s, t, 1) * t;
        const double u2 = drift_K(s, t, 2) * t + 2.0 * drift_K(s, t, 1);
        return std::sinh(u) * u1 * u1 + std::cosh(u) * u2;
    };
    return p;
}

inline WarpProfile custom_profile(std::function<double(double)> f,
                                  std::function<double(double)> fp,
                                  std::function<double(double)> fpp, double t_max) {
    return WarpProfile{std::move(f), std::move(fp), std::move(fpp), t_max,
                       WarpKind::Custom, 0.0};
}

// ---------------------------------------------------------------------------
// curvature

// Sectional curvature seen at radius t: -f''(t)/f(t).
inline double radial_curvature(const WarpProfile& p, double t) {
    if (!(t > 0.0) || t >= p.t_max)
        throw std::domain_error("radial_curvature: t must lie in (0, t_max)");
    const double ft = p.f(t);
    if (ft <= 0.0) throw std::domain_error("radial_curvature: warp factor vanishes");
    return -p.fpp(t) / ft;
}

// ---------------------------------------------------------------------------
// geodesics

namespace detail_warp {

struct State {
    double t, phi, pt, pphi;
};

inline State deriv(const WarpProfile& pr, const State& y) {
    const double f = pr.f(y.t), fp = pr.fp(y.t);
    State d;
    d.t = y.pt;
    d.phi = y.pphi;
    d.pt = f * fp * y.pphi * y.pphi;
    d.pphi = f > 0.0 ? -2.0 * (fp / f) * y.pt * y.pphi : 0.0;
    return d;
}

inline State rk4_step(const WarpProfile& pr, const State& y, double h) {
    auto add = [](const State& a, const State& b, double c) {
        return State{a.t + c * b.t, a.phi + c * b.phi, a.pt + c * b.pt,
                     a.pphi + c * b.pphi};
    };
    const State k1 = deriv(pr, y);
    const State k2 = deriv(pr, add(y, k1, h / 2.0));
    const State k3 = deriv(pr, add(y, k2, h / 2.0));
    const State k4 = deriv(pr, add(y, k3, h));
    State out = y;
    out.t += h / 6.0 * (k1.t + 2.0 * k2.t + 2.0 * k3.t + k4.t);
    out.phi += h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
    out.pt += h / 6.0 * (k1.pt + 2.0 * k2.pt + 2.0 * k3.pt + k4.pt);
    out.pphi += h / 6.0 * (k1.pphi + 2.0 * k2.pphi + 2.0 * k3.pphi + k4.pphi);
    return out;
}

// cubic Hermite value inside one step, x in [0,h]
inline double hermite(double y0, double d0, double y1, double d1, double h, double x) {
    const double u = x / h;
    const double a = y0, b = d0 * h;
    const double c = 3.0 * (y1 - y0) - h * (2.0 * d0 + d1);
    const double d = -2.0 * (y1 - y0) + h * (d0 + d1);
    return a + b * u + c * u * u + d * u * u * u;
}

}  // namespace detail_warp

// Shoot a unit-speed geodesic.  At an interior point `direction` is the angle
// from the outward radial axis toward increasing phi; at the pole it is the
// azimuth of the (necessarily radial) ray.  Paths that reach the domain edge
// stop there with `exited` set; radial paths reflect through poles.
inline GeodesicPath geodesic_shoot(const WarpProfile& pr, const WarpedPoint& start,
                                   double direction, double length,
                                   double step = 1e-3) {
    if (length < 0.0) throw std::domain_error("geodesic_shoot: negative length");
    if (start.t < 0.0 || start.t > pr.t_max)
        throw std::domain_error("geodesic_shoot: start outside the domain");
    GeodesicPath path;
    const double h = std::min(step, length > 0.0 ? length / 1000.0 : step);

    const bool at_pole = start.t == 0.0;
    const bool radial = at_pole || std::fabs(std::sin(direction)) < 1e-14;
    if (radial) {
        // analytic: t moves at unit speed along the ray, reflecting at poles
        const double dir = at_pole ? 1.0 : (std::cos(direction) >= 0.0 ? 1.0 : -1.0);
        const double phi0 = at_pole ? direction : start.phi;
        const double T = pr.t_max;
        const bool reflect_far = pr.far_pole();
        // arclength at which the path would leave the domain (+inf if never)
        double s_exit = std::numeric_limits<double>::infinity();
        if (!reflect_far) s_exit = dir > 0.0 ? T - start.t : T + start.t;
        path.exited = s_exit <= length;
        path.length = std::min(length, s_exit);
        path.clairaut = 0.0;
        auto at = [&](double s) -> GeodesicSample {
            const double x = start.t + dir * s;
            // fold x into [0, T]; each fold is a pole passage flipping phi
            double m = std::fmod(x, 2.0 * T);
            if (m < 0.0) m += 2.0 * T;
            const double t = m <= T ? m : 2.0 * T - m;
            long passages = std::lround(std::floor(x / T));
            if (passages < 0) passages = -passages;
            const double phi =
                (passages % 2) ? phi0 + std::numbers::pi : phi0;
            const double vt = (m <= T ? 1.0 : -1.0) * dir;
            return {s, t, phi, vt, 0.0};
        };
        const int nsteps = std::max(1, int(std::ceil(path.length / h)));
        for (int i = 0; i <= nsteps; ++i)
            path.samples.push_back(at(path.length * i / nsteps));
        return path;
    }

    detail_warp::State y{start.t, start.phi, std::cos(direction),
                         std::sin(direction) / pr.f(start.t)};
    const double c0 = pr.f(y.t) * pr.f(y.t) * y.pphi;
    path.clairaut = c0;
    const double cref = std::max(std::fabs(c0), 1.0);

    const int nsteps = std::max(1, int(std::ceil(length / h)));
    const double hs = length / nsteps;
    const int keep = std::max(1, nsteps / 2000);
    path.samples.push_back({0.0, y.t, y.phi, y.pt, y.pphi});
    for (int i = 1; i <= nsteps; ++i) {
        const detail_warp::State prev = y;
        y = detail_warp::rk4_step(pr, y, hs);
        if (y.t >= pr.t_max || y.t <= 0.0) {
            // cut the step at the boundary crossing
            const double target = y.t >= pr.t_max ? pr.t_max : 0.0;
            double lo = 0.0, hi = hs;
            const auto d0 = detail_warp::deriv(pr, prev);
            const double t1 = y.t;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double tm = detail_warp::hermite(prev.t, d0.t, t1, y.pt, hs, mid);
                ((tm - target) * (prev.t - target) > 0.0 ? lo : hi) = mid;
            }
            const double sx = (i - 1) * hs + 0.5 * (lo + hi);
            y = detail_warp::rk4_step(pr, prev, 0.5 * (lo + hi));
            path.exited = true;
            path.length = sx;
            path.samples.push_back({sx, y.t, y.phi, y.pt, y.pphi});
            break;
        }
        const double f = pr.f(y.t);
        const double c = f * f * y.pphi;
        path.clairaut_drift = std::max(path.clairaut_drift, std::fabs(c - c0) / cref);
        path.speed_error = std::max(
            path.speed_error, std::fabs(y.pt * y.pt + f * f * y.pphi * y.pphi - 1.0));
        if (i % keep == 0 || i == nsteps)
            path.samples.push_back({i * hs, y.t, y.phi, y.pt, y.pphi});
    }
    if (!path.exited) path.length = length;
    return path;
}

// ---------------------------------------------------------------------------
// distance

namespace detail_warp {

// For the geodesic from (tp, 0) at launch angle alpha, minimize over
// arclength the bound s + |t - tq| + f(tq) |phi - phiq|: the tail is the
// length of an explicit radial-plus-fiber-arc path to q, so the value is
// always a true upper bound for d(p, q), and it collapses to the geodesic
// length as the miss goes to zero.
inline double best_approach(const WarpProfile& pr, double tp, double alpha,
                            double tq, double phiq, double smax, double h) {
    State y{tp, 0.0, std::cos(alpha), std::sin(alpha) / pr.f(tp)};
    const int nsteps = std::max(1, int(std::ceil(smax / h)));
    const double hs = smax / nsteps;
    const double ftq = pr.f(tq);
    auto local = [&](double t, double phi) {
        const double a = std::remainder(phi - phiq, 2.0 * std::numbers::pi);
        return std::fabs(t - tq) + ftq * std::fabs(a);
    };
    double best = smax + local(tp, 0.0);
    State prev = y;
    double sprev = 0.0;
    for (int i = 1; i <= nsteps; ++i) {
        prev = y;
        sprev = (i - 1) * hs;
        y = rk4_step(pr, y, hs);
        const bool out = y.t <= 0.0 || y.t >= pr.t_max;
        // subdivide the step with Hermite interpolation near candidate minima
        const double coarse = sprev + hs + local(y.t, y.phi);
        if (coarse < best + 2.0 * hs || out) {
            const auto d0 = deriv(pr, prev);
            auto bound_at = [&](double x) {
                const double tx = hermite(prev.t, d0.t, y.t, y.pt, hs, x);
                if (tx <= 0.0 || tx >= pr.t_max)
                    return std::numeric_limits<double>::infinity();
                const double px = hermite(prev.phi, d0.phi, y.phi, y.pphi, hs, x);
                return sprev + x + local(tx, px);
            };
            double xbest = 0.0, vbest = bound_at(0.0);
            for (int j = 1; j <= 8; ++j) {
                const double x = hs * j / 8.0;
                const double v = bound_at(x);
                if (v < vbest) { vbest = v; xbest = x; }
            }
            // ternary refinement of the V-shaped in-step minimum
            double a = std::max(0.0, xbest - hs / 8.0);
            double b = std::min(hs, xbest + hs / 8.0);
            for (int it = 0; it < 40; ++it) {
                const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
                if (bound_at(m1) <= bound_at(m2)) b = m2;
                else a = m1;
            }
            best = std::min({best, vbest, bound_at(0.5 * (a + b))});
        }
        if (out) break;
        if (sprev > best) break;  // nothing ahead can improve the bound
    }
    return best;
}

// one-sided direction search from (tp, 0) toward (tq, dphi)
inline double directed_distance(const WarpProfile& pr, double tp, double tq,
                                double dphi, double cap, double step) {
    double best = cap;
    const int grid = 128;
    std::vector<double> val(grid + 1, 0.0);
    auto F = [&](double alpha) {
        return best_approach(pr, tp, alpha, tq, dphi, best * 1.0001 + 1e-9, step);
    };
    auto angle = [&](double i) {
        return 1e-4 + (std::numbers::pi - 2e-4) * i / grid;
    };
    for (int i = 0; i <= grid; ++i) {
        val[i] = F(angle(i));
        best = std::min(best, val[i]);
    }
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i <= grid; ++i) {
        const bool locmin = (i == 0 || val[i] <= val[i - 1]) &&
                            (i == grid || val[i] <= val[i + 1]);
        if (!locmin) continue;
        double a = angle(std::max(0, i - 1));
        double b = angle(std::min(grid, i + 1));
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = F(x1), f2 = F(x2);
        for (int it = 0; it < 48; ++it) {
            if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = F(x1); }
            else { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = F(x2); }
        }
        best = std::min({best, f1, f2});
    }
    return best;
}

}  // namespace detail_warp

// Length of the minimizing geodesic between p and q: direction search over
// the rotational shooting family (coarse scan plus golden-section
// refinement of the launch angle), checked against the through-pole
// candidates.
inline double warped_distance(const WarpProfile& pr, const WarpedPoint& p,
                              const WarpedPoint& q, double step = 1e-3) {
    if (p.t < 0.0 || p.t > pr.t_max || q.t < 0.0 || q.t > pr.t_max)
        throw std::domain_error("warped_distance: point outside the domain");
    double dphi = std::fmod(std::fabs(q.phi - p.phi), 2.0 * std::numbers::pi);
    if (dphi > std::numbers::pi) dphi = 2.0 * std::numbers::pi - dphi;
    if (p.t == 0.0) return q.t;
    if (q.t == 0.0) return p.t;
    if (dphi < 1e-15) return std::fabs(p.t - q.t);

    double best = p.t + q.t;  // through the pole
    if (pr.far_pole()) best = std::min(best, 2.0 * pr.t_max - p.t - q.t);

    // both shooting directions give valid upper bounds; taking the min makes
    // the result symmetric and covers launches that are ill-conditioned from
    // one side
    best = detail_warp::directed_distance(pr, p.t, q.t, dphi, best, step);
    best = detail_warp::directed_distance(pr, q.t, p.t, dphi, best, step);
    return best;
}

}  // namespace isolab

#pragma once

// Surface charts with exact derivative access, and the catalog of test
// surfaces. A chart is written once as a generic function of two jet
// arguments; evaluating it on seeded coordinate jets yields every partial
// derivative up to the requested order.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "monge.hpp"
#include "taylor.hpp"
#include "vec3.hpp"

namespace evolutoid {

/// Position and partial derivatives of a map (u, v) -> R^3 at one parameter
/// point, stored as a truncated Taylor series per component.
struct JetPoint {
    Vec3<Jet> series;
    /// +1 if the unit normal is (phi_u x phi_v)/|.|, -1 if it is the opposite.
    int orientation = 1;

    int order() const { return series[0].order(); }

    Vec3d partial(int i, int j) const {
        return {series[0].partial(i, j), series[1].partial(i, j), series[2].partial(i, j)};
    }
    Vec3d position() const { return partial(0, 0); }

    /// Number of stored partials (multi-indices with i + j <= order).
    std::size_t size() const { return static_cast<std::size_t>(Jet::terms(order())); }
};

inline Vec3<Jet> d_du(const Vec3<Jet>& p) { return {p[0].d_du(), p[1].d_du(), p[2].d_du()}; }
inline Vec3<Jet> d_dv(const Vec3<Jet>& p) { return {p[0].d_dv(), p[1].d_dv(), p[2].d_dv()}; }
inline Vec3<Jet> truncated(const Vec3<Jet>& p, int order) {
    return {p[0].truncated(order), p[1].truncated(order), p[2].truncated(order)};
}
inline JetPoint truncated(const JetPoint& p, int order) { return {truncated(p.series, order), p.orientation}; }
inline Vec3d value(const Vec3<Jet>& p) { return {p[0].value(), p[1].value(), p[2].value()}; }

/// Parameter rectangle. Periodic directions accept any value.
struct ParameterDomain {
    double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 0.0;
    bool periodic_u = false;
    bool periodic_v = false;

    bool contains(double u, double v) const {
        constexpr double slack = 1e-12;
        const bool in_u = periodic_u || (u >= u0 - slack && u <= u1 + slack);
        const bool in_v = periodic_v || (v >= v0 - slack && v <= v1 + slack);
        return std::isfinite(u) && std::isfinite(v) && in_u && in_v;
    }
};

class SurfaceChart {
public:
    using Evaluator = std::function<Vec3<Jet>(const Jet& u, const Jet& v)>;

    SurfaceChart(std::string name, std::vector<double> params, ParameterDomain domain, Evaluator evaluator,
                 int orientation = 1)
        : name_(std::move(name)),
          params_(std::move(params)),
          domain_(domain),
          evaluator_(std::move(evaluator)),
          orientation_(orientation) {}

    const std::string& name() const { return name_; }
    const std::vector<double>& params() const { return params_; }
    const ParameterDomain& domain() const { return domain_; }
    int orientation() const { return orientation_; }
    const Evaluator& evaluator() const { return evaluator_; }

    /// Raw series evaluation; no domain or regularity checks.
    Vec3<Jet> series(double u, double v, int order) const {
        return evaluator_(Jet::variable_u(u, order), Jet::variable_v(v, order));
    }
    Vec3d position(double u, double v) const { return value(series(u, v, 0)); }

private:
    std::string name_;
    std::vector<double> params_;
    ParameterDomain domain_;
    Evaluator evaluator_;
    int orientation_;
};

/// Jet of the chart at (u, v); all partials with i + j <= order are exact.
inline JetPoint eval_jet(const SurfaceChart& chart, double u, double v, int order) {
    if (order < 1 || order > kMaxJetOrder)
        fail(ErrorCode::InvalidParams, "jet order must lie in [1, " + std::to_string(kMaxJetOrder) + "]");
    if (!chart.domain().contains(u, v))
        fail(ErrorCode::OutOfDomain, "(" + std::to_string(u) + ", " + std::to_string(v) + ") outside " + chart.name());
    JetPoint jet{chart.series(u, v, order), chart.orientation()};
    const Vec3d pu = jet.partial(1, 0);
    const Vec3d pv = jet.partial(0, 1);
    const double area = norm(cross(pu, pv));
    if (!(area > 1e-13 * norm(pu) * norm(pv)) || area == 0.0)
        fail(ErrorCode::RankDeficientChart, chart.name() + ": |phi_u x phi_v| = 0");
    return jet;
}

namespace detail {

template <typename S>
S poly(const std::vector<double>& coeffs, const S& x) {
    S r = x * 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * x + *it;
    return r;
}

inline double poly_derivative(const std::vector<double>& coeffs, double x) {
    double r = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) r = r * x + static_cast<double>(k) * coeffs[k];
    return r;
}

/// Bivariate polynomial sum c * u^i v^j over (i, j, c) terms.
struct PolyTerm {
    int i;
    int j;
    double c;
};

template <typename S>
S bivariate(const std::vector<PolyTerm>& terms, const S& u, const S& v) {
    int max_deg = 0;
    for (const auto& t : terms) max_deg = std::max({max_deg, t.i, t.j});
    std::vector<S> up(max_deg + 1, u * 0.0 + 1.0), vp(max_deg + 1, v * 0.0 + 1.0);
    for (int k = 1; k <= max_deg; ++k) {
        up[k] = up[k - 1] * u;
        vp[k] = vp[k - 1] * v;
    }
    S r = u * 0.0;
    for (const auto& t : terms) r += t.c * (up[t.i] * vp[t.j]);
    return r;
}

inline std::vector<PolyTerm> monge_terms(const MongeCoefficients& mc) {
    std::vector<PolyTerm> terms{{2, 0, 0.5 * mc.k1}, {0, 2, 0.5 * mc.k2}};
    for (auto [i, j] : MongeCoefficients::kIndices) {
        const double c = mc.a(i, j) / (Jet::factorial(i) * Jet::factorial(j));
        if (c != 0.0) terms.push_back({i, j, c});
    }
    return terms;
}

}  // namespace detail

inline constexpr double kDefaultMongeHalfWidth = 0.2;

/// The graph (u, v, f(u, v)) of the Monge form built from the coefficients.
inline SurfaceChart monge_patch_chart(const MongeCoefficients& mc, double half_width = kDefaultMongeHalfWidth) {
    mc.validate();
    if (!(half_width > 0.0)) fail(ErrorCode::InvalidParams, "monge_patch half width must be positive");
    auto terms = detail::monge_terms(mc);
    std::vector<double> params{mc.k1, mc.k2};
    for (auto [i, j] : MongeCoefficients::kIndices) params.push_back(mc.a(i, j));
    params.push_back(half_width);
    return SurfaceChart("monge_patch", std::move(params), {-half_width, half_width, -half_width, half_width},
                        [terms](const Jet& u, const Jet& v) {
                            return Vec3<Jet>{u, v, detail::bivariate(terms, u, v)};
                        });
}

/// Torus ((R + rho cos u) cos v, (R + rho cos u) sin v, rho sin u). The
/// optional orientation defaults to the outward normal, which is
/// -(phi_u x phi_v) for this chart.
inline SurfaceChart torus_chart(double R, double rho, int orientation = -1) {
    if (!(rho > 0.0) || !(R > rho) || !std::isfinite(R))
        fail(ErrorCode::InvalidParams, "torus requires R > rho > 0");
    if (orientation != 1 && orientation != -1) fail(ErrorCode::InvalidParams, "orientation must be +1 or -1");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return SurfaceChart("torus", {R, rho, static_cast<double>(orientation)}, {0.0, two_pi, 0.0, two_pi, true, true},
                        [R, rho](const Jet& u, const Jet& v) {
                            const Jet radial = R + rho * cos(u);
                            return Vec3<Jet>{radial * cos(v), radial * sin(v), rho * sin(u)};
                        },
                        orientation);
}

/// Sphere of the given radius in latitude/longitude, poles excluded; outward normal.
inline SurfaceChart sphere_chart(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCode::InvalidParams, "sphere requires radius > 0");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return SurfaceChart("sphere", {radius}, {-1.5, 1.5, 0.0, two_pi, false, true},
                        [radius](const Jet& u, const Jet& v) {
                            const Jet c = radius * cos(u);
                            return Vec3<Jet>{c * cos(v), c * sin(v), radius * sin(u)};
                        },
                        -1);
}

/// Surface of revolution of the polynomial profile (x(u), z(u)), u in [u0, u1],
/// about the z axis. Coefficients are in increasing degree. Oriented like the
/// torus: N = (z' cos v, z' sin v, -x') / |.|.
inline SurfaceChart surface_of_revolution_chart(std::vector<double> x_coeffs, std::vector<double> z_coeffs, double u0,
                                                double u1) {
    if (x_coeffs.empty() || z_coeffs.empty()) fail(ErrorCode::InvalidParams, "empty profile polynomial");
    if (!(u1 > u0)) fail(ErrorCode::InvalidParams, "surface_of_revolution requires u0 < u1");
    constexpr int samples = 512;
    for (int k = 0; k <= samples; ++k) {
        const double u = u0 + (u1 - u0) * k / samples;
        const double x = detail::poly(x_coeffs, u);
        const double dx = detail::poly_derivative(x_coeffs, u);
        const double dz = detail::poly_derivative(z_coeffs, u);
        if (!(std::abs(x) > 1e-9) || !(std::hypot(dx, dz) > 1e-9))
            fail(ErrorCode::InvalidParams, "profile meets the axis or is singular at u = " + std::to_string(u));
    }
    std::vector<double> params{u0, u1, static_cast<double>(x_coeffs.size())};
    params.insert(params.end(), x_coeffs.begin(), x_coeffs.end());
    params.insert(params.end(), z_coeffs.begin(), z_coeffs.end());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return SurfaceChart("surface_of_revolution", std::move(params), {u0, u1, 0.0, two_pi, false, true},
                        [x_coeffs = std::move(x_coeffs), z_coeffs = std::move(z_coeffs)](const Jet& u, const Jet& v) {
                            const Jet x = detail::poly(x_coeffs, u);
                            return Vec3<Jet>{x * cos(v), x * sin(v), detail::poly(z_coeffs, u)};
                        },
                        -1);
}

/// Graph (u, v, f(u, v)) of a polynomial on [-h, h]^2.
inline SurfaceChart graph_surface_chart(std::vector<detail::PolyTerm> terms, double half_width) {
    if (!(half_width > 0.0)) fail(ErrorCode::InvalidParams, "graph_surface half width must be positive");
    std::vector<double> params{half_width};
    for (const auto& t : terms) {
        if (t.i < 0 || t.j < 0) fail(ErrorCode::InvalidParams, "negative exponent");
        params.insert(params.end(), {double(t.i), double(t.j), t.c});
    }
    return SurfaceChart("graph_surface", std::move(params), {-half_width, half_width, -half_width, half_width},
                        [terms = std::move(terms)](const Jet& u, const Jet& v) {
                            return Vec3<Jet>{u, v, detail::bivariate(terms, u, v)};
                        });
}

/// The chart with its parameters exchanged, (a, b) -> phi(b, a). The
/// orientation flips so that the unit normal field is unchanged.
inline SurfaceChart swapped_chart(const SurfaceChart& chart) {
    const auto& d = chart.domain();
    return SurfaceChart(chart.name() + "_swapped", chart.params(), {d.v0, d.v1, d.u0, d.u1, d.periodic_v, d.periodic_u},
                        [inner = chart.evaluator()](const Jet& a, const Jet& b) { return inner(b, a); },
                        -chart.orientation());
}

/// Builds a catalog surface from a flat parameter list:
///   torus                 [R, rho] or [R, rho, orientation]
///   sphere                [radius]
///   surface_of_revolution [u0, u1, nx, x_0..x_{nx-1}, z_0..]
///   monge_patch           [k1, k2, a30, a21, a12, a03, a40, a31, a22, a13, a04 (, a41 (, half_width))]
///   graph_surface         [half_width, i, j, c, i, j, c, ...]
inline SurfaceChart chart_from_catalog(const std::string& name, const std::vector<double>& p) {
    auto need = [&](bool ok) {
        if (!ok) fail(ErrorCode::InvalidParams, "bad parameter list for " + name);
    };
    for (double x : p) need(std::isfinite(x));
    if (name == "torus") {
        need(p.size() == 2 || p.size() == 3);
        return torus_chart(p[0], p[1], p.size() == 3 ? static_cast<int>(p[2]) : -1);
    }
    if (name == "sphere") {
        need(p.size() == 1);
        return sphere_chart(p[0]);
    }
    if (name == "surface_of_revolution") {
        need(p.size() >= 5);
        const auto nx = static_cast<std::size_t>(p[2]);
        need(p[2] >= 1 && p[2] == static_cast<double>(nx) && p.size() > 3 + nx);
        return surface_of_revolution_chart({p.begin() + 3, p.begin() + 3 + static_cast<long>(nx)},
                                           {p.begin() + 3 + static_cast<long>(nx), p.end()}, p[0], p[1]);
    }
    if (name == "monge_patch") {
        need(p.size() >= 11 && p.size() <= 13);
        MongeCoefficients mc;
        mc.k1 = p[0];
        mc.k2 = p[1];
        for (std::size_t k = 0; k < 9; ++k) mc.a(MongeCoefficients::kIndices[k].first, MongeCoefficients::kIndices[k].second) = p[2 + k];
        if (p.size() >= 12) mc.a41 = p[11];
        try {
            return monge_patch_chart(mc, p.size() == 13 ? p[12] : kDefaultMongeHalfWidth);
        } catch (const Error& e) {
            fail(ErrorCode::InvalidParams, e.what());
        }
    }
    if (name == "graph_surface") {
        need(!p.empty() && (p.size() - 1) % 3 == 0);
        std::vector<detail::PolyTerm> terms;
        for (std::size_t k = 1; k < p.size(); k += 3) {
            need(p[k] >= 0 && p[k + 1] >= 0 && p[k] == std::floor(p[k]) && p[k + 1] == std::floor(p[k + 1]));
            terms.push_back({static_cast<int>(p[k]), static_cast<int>(p[k + 1]), p[k + 2]});
        }
        return graph_surface_chart(std::move(terms), p[0]);
    }
    fail(ErrorCode::UnknownSurface, name);
}

}  // namespace evolutoid

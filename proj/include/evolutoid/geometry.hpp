#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "errors.hpp"
#include "jets.hpp"
#include "monge.hpp"
#include "vec3.hpp"

namespace evolutoid {

struct FundamentalForms {
    double E = 0.0, F = 0.0, G = 0.0;
    double e = 0.0, f = 0.0, g = 0.0;
    Vec3d N;
    Vec3d phi_u, phi_v;
    double E_u = 0.0, E_v = 0.0, G_u = 0.0, G_v = 0.0;
};

inline FundamentalForms fundamental_forms(const JetPoint& jet) {
    if (jet.order() < 2) fail(ErrorCode::InsufficientJetOrder, "fundamental forms need a jet of order >= 2");
    FundamentalForms ff;
    ff.phi_u = jet.partial(1, 0);
    ff.phi_v = jet.partial(0, 1);
    const Vec3d puu = jet.partial(2, 0), puv = jet.partial(1, 1), pvv = jet.partial(0, 2);
    const Vec3d n = cross(ff.phi_u, ff.phi_v);
    const double area = norm(n);
    if (!(area > 0.0)) fail(ErrorCode::RankDeficientChart, "|phi_u x phi_v| = 0");
    ff.N = (static_cast<double>(jet.orientation) / area) * n;
    ff.E = dot(ff.phi_u, ff.phi_u);
    ff.F = dot(ff.phi_u, ff.phi_v);
    ff.G = dot(ff.phi_v, ff.phi_v);
    ff.e = dot(puu, ff.N);
    ff.f = dot(puv, ff.N);
    ff.g = dot(pvv, ff.N);
    ff.E_u = 2.0 * dot(puu, ff.phi_u);
    ff.E_v = 2.0 * dot(puv, ff.phi_u);
    ff.G_u = 2.0 * dot(puv, ff.phi_v);
    ff.G_v = 2.0 * dot(pvv, ff.phi_v);
    return ff;
}

struct CurvatureData {
    double k1 = 0.0, k2 = 0.0;  ///< principal curvatures, k1 >= k2
    double K = 0.0, H = 0.0;
    Vec3d d1, d2;                    ///< unit principal directions in R^3
    std::array<double, 2> d1_uv{};   ///< d1 = d1_uv[0] phi_u + d1_uv[1] phi_v
    std::array<double, 2> d2_uv{};
    bool umbilic = false;
    bool parabolic = false;
    double tol = 0.0;
};

/// Default umbilic/parabolic threshold, relative to the curvature scale.
inline double default_curvature_tol(double k1, double k2) {
    return 1e-8 * std::max({std::abs(k1), std::abs(k2), 1.0});
}

/// Principal curvatures and directions from the shape operator, written in an
/// orthonormal tangent basis where it is symmetric.
inline CurvatureData curvature_data(const FundamentalForms& ff, std::optional<double> tol = std::nullopt) {
    // Orthonormal basis t1, t2 with phi_u = C00 t1, phi_v = C01 t1 + C11 t2.
    const double sE = std::sqrt(ff.E);
    const double C00 = sE, C01 = ff.F / sE, C11 = std::sqrt(ff.E * ff.G - ff.F * ff.F) / sE;
    const Vec3d t1 = ff.phi_u / sE;
    const Vec3d t2 = (ff.phi_v - C01 * t1) / C11;
    // S = C^{-T} II C^{-1}, with C^{-1} = [[1/C00, -C01/(C00 C11)], [0, 1/C11]].
    const double i00 = 1.0 / C00, i01 = -C01 / (C00 * C11), i11 = 1.0 / C11;
    const double s00 = i00 * i00 * ff.e;
    const double s01 = i00 * (i01 * ff.e + i11 * ff.f);
    const double s11 = i01 * i01 * ff.e + 2.0 * i01 * i11 * ff.f + i11 * i11 * ff.g;

    CurvatureData cd;
    const double mean = 0.5 * (s00 + s11);
    const double half_gap = std::hypot(0.5 * (s00 - s11), s01);
    cd.k1 = mean + half_gap;
    cd.k2 = mean - half_gap;
    cd.K = cd.k1 * cd.k2;
    cd.H = mean;

    const double theta = 0.5 * std::atan2(2.0 * s01, s00 - s11);
    const double c = std::cos(theta), s = std::sin(theta);
    cd.d1 = c * t1 + s * t2;
    cd.d2 = -s * t1 + c * t2;
    cd.d1_uv = {i00 * c + i01 * s, i11 * s};
    cd.d2_uv = {-i00 * s + i01 * c, i11 * c};

    cd.tol = tol ? *tol : default_curvature_tol(cd.k1, cd.k2);
    cd.umbilic = (cd.k1 - cd.k2) < cd.tol;
    cd.parabolic = std::abs(cd.K) < cd.tol;
    return cd;
}

struct GridSpec {
    double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 0.0;
    int nu = 2, nv = 2;

    double u(int i) const { return nu == 1 ? u0 : u0 + (u1 - u0) * i / (nu - 1); }
    double v(int j) const { return nv == 1 ? v0 : v0 + (v1 - v0) * j / (nv - 1); }
};

struct CurvatureLineReport {
    double maxAbsF = 0.0;  ///< max |F| / sqrt(EG)
    double maxAbsf = 0.0;  ///< max |f| / sqrt(EG)
    bool pass = false;
};

/// Normalized off-diagonal fundamental-form entries; both vanish exactly on
/// curvature-line charts.
inline std::pair<double, double> curvature_line_defect(const FundamentalForms& ff) {
    const double s = std::sqrt(ff.E * ff.G);
    return {std::abs(ff.F) / s, std::abs(ff.f) / s};
}

inline CurvatureLineReport validate_curvature_line(const SurfaceChart& chart, const GridSpec& grid, double tol) {
    CurvatureLineReport rep;
    for (int i = 0; i < grid.nu; ++i)
        for (int j = 0; j < grid.nv; ++j) {
            const auto [dF, df] = curvature_line_defect(fundamental_forms(eval_jet(chart, grid.u(i), grid.v(j), 2)));
            rep.maxAbsF = std::max(rep.maxAbsF, dF);
            rep.maxAbsf = std::max(rep.maxAbsf, df);
        }
    rep.pass = rep.maxAbsF < tol && rep.maxAbsf < tol;
    return rep;
}

namespace detail {

/// Monge coefficients in the principal frame (d1, d2, N) returned by
/// curvature_data, without sign normalization. The surface is re-expressed as
/// a graph over its tangent plane by reverting the series of the in-plane
/// coordinates.
inline MongeCoefficients raw_monge(const JetPoint& jet, const CurvatureData& cd, const Vec3d& N) {
    const int n = jet.order();
    const Vec3d p0 = jet.position();
    const Vec3<Jet> rel = jet.series - Vec3<Jet>{Jet(p0[0], n), Jet(p0[1], n), Jet(p0[2], n)};
    auto project = [&](const Vec3d& axis) { return rel[0] * axis[0] + rel[1] * axis[1] + rel[2] * axis[2]; };
    const Jet X = project(cd.d1), Y = project(cd.d2), Z = project(N);

    const double l00 = X.coeff(1, 0), l01 = X.coeff(0, 1), l10 = Y.coeff(1, 0), l11 = Y.coeff(0, 1);
    const double det = l00 * l11 - l01 * l10;
    auto solve = [&](const Jet& rx, const Jet& ry, Jet& du, Jet& dv) {
        du = (l11 * rx - l01 * ry) / det;
        dv = (-l10 * rx + l00 * ry) / det;
    };
    const Jet x = Jet::variable_u(0.0, n), y = Jet::variable_v(0.0, n);
    Jet U, V;
    solve(x, y, U, V);
    for (int it = 1; it < n; ++it) {
        Jet dU, dV;
        solve(compose(X, U, V) - x, compose(Y, U, V) - y, dU, dV);
        U -= dU;
        V -= dV;
    }
    const Jet f = compose(Z, U, V);

    MongeCoefficients mc;
    mc.k1 = 2.0 * f.coeff(2, 0);
    mc.k2 = 2.0 * f.coeff(0, 2);
    for (auto [i, j] : MongeCoefficients::kIndices)
        if (i + j <= n) mc.a(i, j) = f.partial(i, j);
    return mc;
}

inline void require_non_umbilic(const CurvatureData& cd) {
    if (cd.umbilic) fail(ErrorCode::UmbilicPoint, "principal directions undefined at an umbilic");
}

}  // namespace detail

/// Monge normal form of the chart's surface at (u0, v0): principal curvatures
/// and the a_ij of the tangent-plane graph (through a41). With canonical set,
/// the frame reflections are normalized by canonical_signs.
inline MongeCoefficients monge_normal_form(const SurfaceChart& chart, double u0, double v0, bool canonical = true) {
    const JetPoint jet = eval_jet(chart, u0, v0, 5);
    const FundamentalForms ff = fundamental_forms(jet);
    const CurvatureData cd = curvature_data(ff);
    detail::require_non_umbilic(cd);
    if (cd.parabolic) fail(ErrorCode::ParabolicPoint, "Monge classification assumes K != 0");
    const MongeCoefficients mc = detail::raw_monge(jet, cd, ff.N);
    return canonical ? canonical_signs(mc) : mc;
}

/// Derivative of k_which along its own principal direction d_which (zero at
/// ridge points), in the canonical Monge frame.
inline double ridge_indicator(const SurfaceChart& chart, double u, double v, int which) {
    if (which != 1 && which != 2) fail(ErrorCode::InvalidParams, "which must be 1 or 2");
    const JetPoint jet = eval_jet(chart, u, v, 3);
    const FundamentalForms ff = fundamental_forms(jet);
    const CurvatureData cd = curvature_data(ff);
    detail::require_non_umbilic(cd);
    const MongeCoefficients mc = canonical_signs(detail::raw_monge(jet, cd, ff.N));
    return which == 1 ? mc.a30 : mc.a03;
}

/// Derivative of k_which along the other principal direction.
inline double subparabolic_indicator(const SurfaceChart& chart, double u, double v, int which) {
    if (which != 1 && which != 2) fail(ErrorCode::InvalidParams, "which must be 1 or 2");
    const JetPoint jet = eval_jet(chart, u, v, 3);
    const FundamentalForms ff = fundamental_forms(jet);
    const CurvatureData cd = curvature_data(ff);
    detail::require_non_umbilic(cd);
    const MongeCoefficients mc = canonical_signs(detail::raw_monge(jet, cd, ff.N));
    return which == 1 ? mc.a21 : mc.a12;
}

/// Focal point p + N / k_which.
inline Vec3d focal_point(const JetPoint& jet, const FundamentalForms& ff, int which) {
    if (which != 1 && which != 2) fail(ErrorCode::InvalidParams, "which must be 1 or 2");
    const CurvatureData cd = curvature_data(ff);
    const double k = which == 1 ? cd.k1 : cd.k2;
    if (std::abs(k) < default_curvature_tol(cd.k1, cd.k2))
        fail(ErrorCode::ParabolicDirection, "principal curvature vanishes; focal point at infinity");
    return jet.position() + ff.N / k;
}

/// Unit normal of a parametrized surface as a series, (s_u x s_v)/|.|.
inline Vec3<Jet> unit_normal_series(const Vec3<Jet>& s) {
    const Vec3<Jet> n = cross(d_du(s), d_dv(s));
    return n * reciprocal(sqrt(dot(n, n)));
}

/// Gauss-Kronecker curvature of a parametrized surface as a series (two
/// orders below the input).
inline Jet gauss_curvature_series(const Vec3<Jet>& s) {
    const Vec3<Jet> su = d_du(s), sv = d_dv(s);
    const Vec3<Jet> n = cross(su, sv);
    const Jet L = dot(d_du(su), n), M = dot(d_dv(su), n), N = dot(d_dv(sv), n);
    const Jet nn = dot(n, n);
    return (L * N - M * M) / (nn * nn);
}

}  // namespace evolutoid

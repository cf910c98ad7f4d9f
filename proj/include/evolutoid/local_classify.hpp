#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "evolutoid.hpp"
#include "geometry.hpp"
#include "jets.hpp"
#include "monge.hpp"

namespace evolutoid {

/// Leading coefficients of the evolutoid of a Monge patch at the origin:
/// x = b100 + b110 u + b101 v, y = b220 u^2 + b202 v^2, z = b300 + b310 u + b301 v.
struct LocalExpansion {
    double b100 = 0.0, b110 = 0.0, b101 = 0.0;
    double b220 = 0.0, b202 = 0.0;
    double b300 = 0.0, b310 = 0.0, b301 = 0.0;
};

inline LocalExpansion local_expansion(const MongeCoefficients& mc, double alpha) {
    mc.validate_for_evolutoid();
    check_alpha(alpha);
    const double k1 = mc.k1, k2 = mc.k2, ct = 1.0 / std::tan(alpha);
    LocalExpansion le;
    le.b100 = ct / k2;
    le.b110 = (k2 * (k2 - k1) - mc.a12 * ct) / (k2 * k2);
    le.b101 = -mc.a03 * ct / (k2 * k2);
    le.b220 = -mc.a21 / (2.0 * k2);
    le.b202 = mc.a03 / (2.0 * k2);
    le.b300 = 1.0 / k2;
    le.b310 = (-mc.a12 + k1 * k2 * ct) / (k2 * k2);
    le.b301 = -mc.a03 / (k2 * k2);
    return le;
}

/// Coefficient-zero threshold 1e-9 max(1, |k1|, |k2|)^3.
inline double default_classifier_eps(const MongeCoefficients& mc) {
    const double s = std::max({1.0, std::abs(mc.k1), std::abs(mc.k2)});
    return 1e-9 * s * s * s;
}

enum class Regularity { Regular, SingularRidge };

inline const char* to_string(Regularity r) { return r == Regularity::Regular ? "Regular" : "SingularRidge"; }

struct RegularityReport {
    Regularity cls = Regularity::Regular;
    double a03 = 0.0;
    double factor = 0.0;  ///< sin^2(alpha) k2 - k1
    double eps = 0.0;
};

inline RegularityReport classify_regularity(const MongeCoefficients& mc, double alpha,
                                            std::optional<double> eps = std::nullopt) {
    mc.validate_for_evolutoid();
    check_alpha(alpha);
    RegularityReport rep;
    rep.eps = eps ? *eps : default_classifier_eps(mc);
    const double s = std::sin(alpha);
    rep.factor = s * s * mc.k2 - mc.k1;
    rep.a03 = mc.a03;
    if (std::abs(rep.factor) < rep.eps) fail(ErrorCode::AssumptionViolated, "sin^2(alpha) k2 - k1 vanishes");
    rep.cls = std::abs(mc.a03) > rep.eps ? Regularity::Regular : Regularity::SingularRidge;
    return rep;
}

/// a21 a03 - (a12 - k2 (k2 - k1) tan(alpha))^2; zero iff (0,0,1) is an
/// asymptotic direction of the evolutoid at its base point.
inline double asymptotic_residual(const MongeCoefficients& mc, double alpha) {
    mc.validate_for_evolutoid();
    check_alpha(alpha);
    if (mc.a03 == 0.0) fail(ErrorCode::RidgePoint, "a03 = 0: the evolutoid is singular at the base point");
    const double w = mc.a12 - mc.k2 * (mc.k2 - mc.k1) * std::tan(alpha);
    return mc.a21 * mc.a03 - w * w;
}

/// True iff the evolutoid base point is parabolic, i.e. the origin is
/// sub-parabolic on the surface (a21 = 0).
inline bool evolutoid_parabolic_test(const MongeCoefficients& mc, std::optional<double> eps = std::nullopt) {
    mc.validate_for_evolutoid();
    const double e = eps ? *eps : default_classifier_eps(mc);
    if (std::abs(mc.a03) <= e) fail(ErrorCode::RidgePoint, "a03 = 0: the evolutoid is singular at the base point");
    return std::abs(mc.a21) < e;
}

/// The evolutoid of monge_patch_chart(mc) around the origin, to the given order.
inline JetPoint monge_evolutoid_jet(const MongeCoefficients& mc, double alpha, int order) {
    mc.validate_for_evolutoid();
    return evolutoid_jet(monge_patch_chart(mc), 0.0, 0.0, alpha, Branch::Beta0, order);
}

/// Gauss-Kronecker curvature of the evolutoid at its base point.
inline double evolutoid_gauss_curvature(const MongeCoefficients& mc, double alpha) {
    return gauss_curvature_series(monge_evolutoid_jet(mc, alpha, 2).series).value();
}

/// Closed-form value of (l n - m^2) at the base point for the unnormalized
/// evolutoid normal.
inline double evolutoid_parabolic_numerator(const MongeCoefficients& mc, double alpha) {
    const double ct = 1.0 / std::tan(alpha);
    const double q = mc.k1 - mc.k2 + mc.k1 * ct * ct;
    return -std::pow(mc.k2, 4) * mc.a21 / (mc.a03 * q * q);
}

namespace detail {

inline void require_parabolic_asymptotic(const MongeCoefficients& mc, double alpha, double eps, ErrorCode code) {
    std::vector<std::string> failed;
    if (std::abs(mc.a03) <= eps) failed.emplace_back("a03 != 0");
    if (std::abs(mc.a21) > eps) failed.emplace_back("a21 = 0");
    if (failed.empty() && std::abs(asymptotic_residual(mc, alpha)) > eps)
        failed.emplace_back("asymptotic residual = 0");
    if (!failed.empty()) {
        std::string what = "failed:";
        for (const auto& f : failed) what += " [" + f + "]";
        fail(code, what);
    }
}

}  // namespace detail

struct ParabolicGradient {
    std::array<double, 2> gradient{};     ///< grad of the evolutoid Gauss curvature at (0,0)
    std::array<double, 2> closed_form{};  ///< c (tan(alpha), -1) with the printed coefficient c
    double coefficient = 0.0;
};

/// Printed leading coefficient of the parabolic-set function, read as
/// k2^5 a31 tan^2(alpha) / (a03 (k1 cot(alpha) + (k1 - k2) tan^3(alpha))).
inline double parabolic_gradient_coefficient(const MongeCoefficients& mc, double alpha) {
    const double t = std::tan(alpha);
    return std::pow(mc.k2, 5) * mc.a31 * t * t / (mc.a03 * (mc.k1 / t + (mc.k1 - mc.k2) * t * t * t));
}

/// Gradient at the base point of the evolutoid's Gauss curvature, whose zero
/// set is the parabolic set; computed exactly by series propagation.
inline ParabolicGradient parabolic_set_gradient(const MongeCoefficients& mc, double alpha,
                                                std::optional<double> eps = std::nullopt) {
    mc.validate_for_evolutoid();
    check_alpha(alpha);
    detail::require_parabolic_asymptotic(mc, alpha, eps ? *eps : default_classifier_eps(mc),
                                         ErrorCode::PreconditionViolated);
    ParabolicGradient pg;
    const Jet K = gauss_curvature_series(monge_evolutoid_jet(mc, alpha, 3).series);
    pg.gradient = {K.coeff(1, 0), K.coeff(0, 1)};
    pg.coefficient = parabolic_gradient_coefficient(mc, alpha);
    pg.closed_form = {pg.coefficient * std::tan(alpha), -pg.coefficient};
    return pg;
}

enum class HeightClass { A1Plus, A1Minus, A2, A3Elliptic, A3Hyperbolic, DegenerateA4OrWorse };

inline const char* to_string(HeightClass c) {
    switch (c) {
        case HeightClass::A1Plus: return "A1Plus";
        case HeightClass::A1Minus: return "A1Minus";
        case HeightClass::A2: return "A2";
        case HeightClass::A3Elliptic: return "A3Elliptic";
        case HeightClass::A3Hyperbolic: return "A3Hyperbolic";
        case HeightClass::DegenerateA4OrWorse: return "DegenerateA4OrWorse";
    }
    return "?";
}

struct HeightSingularity {
    HeightClass cls = HeightClass::A1Plus;
    double a31 = 0.0;
    double a41 = 0.0;
    double gauss_curvature = 0.0;  ///< evolutoid K at the base point (sign of the Hessian determinant)
    double g20 = 0.0;              ///< u^2 coefficient of the reduced height function
    double g04 = 0.0;              ///< v^4 coefficient of the reduced height function
    double eps = 0.0;
};

/// Height-function witnesses g20, g04 in the reduced form g20 u^2 + g04 v^4.
inline std::array<double, 2> height_reduced_coefficients(const MongeCoefficients& mc, double alpha) {
    const double k2 = mc.k2, t = std::tan(alpha);
    const double k3 = k2 * k2 * k2;
    const double q = mc.k1 / t + (mc.k1 - k2) * t;
    return {k3 * t * t / (2.0 * mc.a03), -k3 * mc.a41 / (24.0 * q * q * q * q)};
}

/// Singularity type of the height function of the evolutoid along its normal
/// at the base point. At a cusp of Gauss the elliptic/hyperbolic split follows
/// the sign of g20 g04, i.e. of -a03 a41.
inline HeightSingularity height_singularity(const MongeCoefficients& mc, double alpha,
                                            std::optional<double> eps = std::nullopt) {
    mc.validate_for_evolutoid();
    check_alpha(alpha);
    HeightSingularity hs;
    hs.eps = eps ? *eps : default_classifier_eps(mc);
    hs.a31 = mc.a31;
    hs.a41 = mc.a41;
    if (std::abs(mc.a03) <= hs.eps) fail(ErrorCode::HypothesesNotMet, "failed: [a03 != 0]");
    hs.gauss_curvature = evolutoid_gauss_curvature(mc, alpha);
    const auto g = height_reduced_coefficients(mc, alpha);
    hs.g20 = g[0];
    hs.g04 = g[1];
    if (std::abs(mc.a21) > hs.eps) {
        hs.cls = hs.gauss_curvature > 0 ? HeightClass::A1Plus : HeightClass::A1Minus;
        return hs;
    }
    detail::require_parabolic_asymptotic(mc, alpha, hs.eps, ErrorCode::HypothesesNotMet);
    if (std::abs(mc.a31) > hs.eps)
        hs.cls = HeightClass::A2;
    else if (std::abs(mc.a41) <= hs.eps)
        hs.cls = HeightClass::DegenerateA4OrWorse;
    else
        hs.cls = mc.a03 * mc.a41 < 0 ? HeightClass::A3Elliptic : HeightClass::A3Hyperbolic;
    return hs;
}

/// Geodesic curvature at N(p) of the Gauss image of the evolutoid's
/// parabolic curve.
inline double gauss_geodesic_curvature(const MongeCoefficients& mc, double alpha,
                                       std::optional<double> eps = std::nullopt) {
    mc.validate_for_evolutoid();
    check_alpha(alpha);
    const double e = eps ? *eps : default_classifier_eps(mc);
    detail::require_parabolic_asymptotic(mc, alpha, e, ErrorCode::HypothesesNotMet);
    if (std::abs(mc.a31) <= e) fail(ErrorCode::HypothesesNotMet, "failed: [a31 != 0 (cusp of Gauss)]");
    const double k1 = mc.k1, k2 = mc.k2;
    const double c = std::cos(alpha), s = std::sin(alpha), ct = c / s;
    const double num = mc.a03 * c * ct * ct * ct * (-mc.a13 * c + mc.a03 * (k2 - k1) * s);
    const double den = std::pow(k2, 5) * (-k2 + 2.0 * k1 + k2 * std::cos(2.0 * alpha));
    return num / den;
}

}  // namespace evolutoid

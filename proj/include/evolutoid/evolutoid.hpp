#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "geometry.hpp"
#include "jets.hpp"
#include "vec3.hpp"

namespace evolutoid {

/// beta = 0 rules the lines through phi_u; beta = pi/2 through phi_v.
enum class Branch { Beta0, BetaHalfPi };

inline const char* to_string(Branch b) { return b == Branch::Beta0 ? "beta0" : "betahalf"; }

inline double branch_beta(Branch b) { return b == Branch::Beta0 ? 0.0 : std::numbers::pi / 2; }

struct EvolutoidSample {
    Vec3d base;
    double alpha = 0.0;
    Branch branch = Branch::Beta0;
    Vec3d direction;
    double radius = 0.0;
    Vec3d point;
    double residual = 0.0;
};

/// Coefficients of Q_u (row 0) and Q_v (row 1) in the frame (phi_u, phi_v, N).
struct EnvelopeJacobian {
    std::array<std::array<double, 3>, 2> b{};
    Branch branch = Branch::Beta0;

    /// Row annihilated by the branch radius: Q_v for beta = 0, Q_u for beta = pi/2.
    int vanishing_index() const { return branch == Branch::Beta0 ? 1 : 0; }
    const std::array<double, 3>& vanishing_row() const { return b[vanishing_index()]; }
    double residual() const {
        const auto& r = vanishing_row();
        return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    }
};

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < std::numbers::pi / 2))
        fail(ErrorCode::AlphaOutOfRange, "alpha must lie in the open interval (0, pi/2)");
}

/// Off-diagonal tolerance for the curvature-line admissibility check.
inline constexpr double kCurvatureLineTol = 1e-8;

inline void require_curvature_line(const FundamentalForms& ff, double tol = kCurvatureLineTol) {
    const auto [dF, df] = curvature_line_defect(ff);
    const double k = std::max({1.0, std::abs(ff.e / ff.E), std::abs(ff.g / ff.G)});
    if (dF >= tol || df >= tol * k)
        fail(ErrorCode::NotCurvatureLine, "F or f does not vanish: coordinate curves are not lines of curvature");
}

/// Unit direction cos(a)(cos(b) phi_u/|phi_u| + sin(b) phi_v/|phi_v|) + sin(a) N
/// for arbitrary beta.
inline Vec3d direction_vector_beta(const FundamentalForms& ff, double alpha, double beta) {
    return std::cos(alpha) * (std::cos(beta) / std::sqrt(ff.E) * ff.phi_u + std::sin(beta) / std::sqrt(ff.G) * ff.phi_v) +
           std::sin(alpha) * ff.N;
}

inline Vec3d direction_vector(const JetPoint& /*jet*/, const FundamentalForms& ff, double alpha, Branch branch) {
    check_alpha(alpha);
    return branch == Branch::Beta0 ? std::cos(alpha) / std::sqrt(ff.E) * ff.phi_u + std::sin(alpha) * ff.N
                                   : std::cos(alpha) / std::sqrt(ff.G) * ff.phi_v + std::sin(alpha) * ff.N;
}

/// Full b-table for arbitrary beta, r treated as a pointwise constant.
inline std::array<std::array<double, 3>, 2> envelope_table(const FundamentalForms& ff, double alpha, double beta,
                                                           double r) {
    const double ca = std::cos(alpha), sa = std::sin(alpha), cb = std::cos(beta), sb = std::sin(beta);
    const double sE = std::sqrt(ff.E), sG = std::sqrt(ff.G);
    const double k1 = ff.e / ff.E, k2 = ff.g / ff.G;
    std::array<std::array<double, 3>, 2> b{};
    b[0][0] = -1.0 - r * (ca * sb * ff.E_v / (2.0 * ff.E * sG) - sa * k1);
    b[0][1] = r * ca * cb * ff.E_v / (2.0 * ff.G * sE);
    b[0][2] = -r * ca * cb * ff.e / sE;
    b[1][0] = r * ca * sb * ff.G_u / (2.0 * ff.E * sG);
    b[1][1] = -1.0 - r * (ca * cb * ff.G_u / (2.0 * ff.G * sE) - sa * k2);
    b[1][2] = -r * ca * sb * ff.g / sG;
    return b;
}

namespace detail {

struct RadiusParts {
    double num = 0.0, den = 0.0, scale = 0.0;
};

inline RadiusParts radius_parts(const FundamentalForms& ff, double alpha, Branch branch) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double sE = std::sqrt(ff.E), sG = std::sqrt(ff.G);
    if (branch == Branch::Beta0) {
        const double k2 = ff.g / ff.G;
        const double t1 = ca * ff.G_u, t2 = 2.0 * sa * ff.G * sE * k2;
        return {-2.0 * ff.G * sE, t1 - t2, std::abs(t1) + std::abs(t2)};
    }
    const double k1 = ff.e / ff.E;
    const double t1 = ca * ff.E_v, t2 = 2.0 * sa * ff.E * sG * k1;
    return {-2.0 * ff.E * sG, t1 - t2, std::abs(t1) + std::abs(t2)};
}

inline constexpr double kDenominatorTol = 1e-10;

}  // namespace detail

/// Closed-form radius annihilating the branch's Jacobian row.
inline double evolutoid_radius(const JetPoint& jet, const FundamentalForms& ff, double alpha, Branch branch) {
    check_alpha(alpha);
    if (jet.order() < 2) fail(ErrorCode::InsufficientJetOrder, "radius needs second derivatives");
    require_curvature_line(ff);
    const auto p = detail::radius_parts(ff, alpha, branch);
    if (!(std::abs(p.den) > detail::kDenominatorTol * p.scale))
        fail(ErrorCode::DegenerateDenominator, "radius denominator vanishes");
    return p.num / p.den;
}

inline EnvelopeJacobian envelope_jacobian(const JetPoint& jet, const FundamentalForms& ff, double alpha, Branch branch,
                                          double r) {
    check_alpha(alpha);
    if (jet.order() < 2) fail(ErrorCode::InsufficientJetOrder, "Jacobian needs second derivatives");
    require_curvature_line(ff);
    EnvelopeJacobian J;
    J.branch = branch;
    J.b = envelope_table(ff, alpha, branch_beta(branch), r);
    if (branch == Branch::Beta0) {
        J.b[1][0] = 0.0;
        J.b[1][2] = 0.0;
    } else {
        J.b[0][1] = 0.0;
        J.b[0][2] = 0.0;
    }
    return J;
}

inline EvolutoidSample evolutoid_point(const SurfaceChart& chart, double u, double v, double alpha, Branch branch) {
    check_alpha(alpha);
    const JetPoint jet = eval_jet(chart, u, v, 2);
    const FundamentalForms ff = fundamental_forms(jet);
    EvolutoidSample s;
    s.base = jet.position();
    s.alpha = alpha;
    s.branch = branch;
    s.direction = direction_vector(jet, ff, alpha, branch);
    s.radius = evolutoid_radius(jet, ff, alpha, branch);
    s.point = s.base + s.radius * s.direction;
    s.residual = envelope_jacobian(jet, ff, alpha, branch, s.radius).residual();
    return s;
}

/// Radius from a least-squares fit of the Jacobian row -phi_w - r d_w (w the
/// derivative variable of the branch), with d_w obtained by differentiating
/// the direction field itself. Independent of the closed form.
inline double oracle_radius(const SurfaceChart& chart, double u, double v, double alpha, Branch branch,
                            double tol = 1e-8) {
    check_alpha(alpha);
    const JetPoint jet = eval_jet(chart, u, v, 2);
    const FundamentalForms ff = fundamental_forms(jet);
    require_curvature_line(ff);

    const Vec3<Jet>& P = jet.series;
    const Vec3<Jet> Pu = d_du(P), Pv = d_dv(P);
    const Vec3<Jet> n = cross(Pu, Pv);
    const Jet inv_n = static_cast<double>(jet.orientation) / sqrt(dot(n, n));
    const Vec3<Jet> N = n * inv_n;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const bool b0 = branch == Branch::Beta0;
    const Vec3<Jet>& T = b0 ? Pu : Pv;
    const Vec3<Jet> d = T * (ca / sqrt(dot(T, T))) + N * sa;
    const Vec3d dw = value(b0 ? d_dv(d) : d_du(d));
    const Vec3d pw = b0 ? ff.phi_v : ff.phi_u;

    Eigen::Matrix3d frame;
    for (int k = 0; k < 3; ++k) {
        frame(k, 0) = ff.phi_u[k];
        frame(k, 1) = ff.phi_v[k];
        frame(k, 2) = ff.N[k];
    }
    const auto lu = frame.partialPivLu();
    const Eigen::Vector3d a = lu.solve(Eigen::Vector3d(-pw[0], -pw[1], -pw[2]));
    const Eigen::Vector3d b = lu.solve(Eigen::Vector3d(-dw[0], -dw[1], -dw[2]));
    const double bb = b.squaredNorm();
    if (!(bb > 0.0)) fail(ErrorCode::NoSolution, "row is independent of r");
    double r = -a.dot(b) / bb;
    // Refine on the dominant component equation a_k + r b_k = 0.
    Eigen::Index k;
    b.cwiseAbs().maxCoeff(&k);
    r = -a[k] / b[k];
    const double res = (a + r * b).norm();
    if (res > tol * (1.0 + std::abs(r)) * std::max(1.0, a.norm()))
        fail(ErrorCode::NoSolution, "no radius annihilates the Jacobian row");
    return r;
}

/// Series of the evolutoid map around (u, v), obtained by carrying the
/// closed-form radius and direction through jet arithmetic. Needs chart order
/// order + 2.
inline JetPoint evolutoid_jet(const SurfaceChart& chart, double u, double v, double alpha, Branch branch, int order) {
    check_alpha(alpha);
    if (order < 0 || order + 2 > kMaxJetOrder)
        fail(ErrorCode::InsufficientJetOrder, "evolutoid jet order must be at most 4");
    const JetPoint jet = eval_jet(chart, u, v, order + 2);
    const Vec3<Jet>& P = jet.series;
    const Vec3<Jet> Pu = d_du(P), Pv = d_dv(P);
    const Vec3<Jet> Puu = d_du(Pu), Puv = d_dv(Pu), Pvv = d_dv(Pv);
    const Vec3<Jet> n = cross(Pu, Pv);
    const Vec3<Jet> N = n * (static_cast<double>(jet.orientation) / sqrt(dot(n, n)));
    const Jet E = dot(Pu, Pu), G = dot(Pv, Pv);
    const Jet sE = sqrt(E), sG = sqrt(G);
    const double ca = std::cos(alpha), sa = std::sin(alpha);

    Jet num(order), den(order);
    Vec3<Jet> dir;
    if (branch == Branch::Beta0) {
        const Jet k2 = dot(Pvv, N) / G;
        const Jet G_u = 2.0 * dot(Puv, Pv);
        num = -2.0 * G * sE;
        den = ca * G_u - 2.0 * sa * G * sE * k2;
        dir = Pu * (ca / sE) + N * sa;
    } else {
        const Jet k1 = dot(Puu, N) / E;
        const Jet E_v = 2.0 * dot(Puv, Pu);
        num = -2.0 * E * sG;
        den = ca * E_v - 2.0 * sa * E * sG * k1;
        dir = Pv * (ca / sG) + N * sa;
    }
    const FundamentalForms ff = fundamental_forms(truncated(jet, 2));
    const auto parts = detail::radius_parts(ff, alpha, branch);
    if (!(std::abs(parts.den) > detail::kDenominatorTol * parts.scale))
        fail(ErrorCode::DegenerateDenominator, "radius denominator vanishes");
    const Jet r = num / den;
    JetPoint out;
    out.series = truncated(P + dir * r, order);
    out.orientation = 1;
    return out;
}

}  // namespace evolutoid

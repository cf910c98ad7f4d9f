#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "evolutoid.hpp"
#include "jets.hpp"
#include "local_classify.hpp"
#include "monge.hpp"
#include "vec3.hpp"

namespace evolutoid {

/// A smooth map (u, v) -> R^3 with jets available at every parameter point.
struct SurfaceMap {
    std::string name;
    ParameterDomain domain;
    std::function<JetPoint(double u, double v, int order)> jet;
};

inline SurfaceMap evolutoid_map(const SurfaceChart& chart, double alpha, Branch branch) {
    check_alpha(alpha);
    return {"evolutoid(" + chart.name() + ")", chart.domain(),
            [chart, alpha, branch](double u, double v, int order) {
                return evolutoid_jet(chart, u, v, alpha, branch, order);
            }};
}

inline SurfaceMap chart_map(const SurfaceChart& chart) {
    return {chart.name(), chart.domain(),
            [chart](double u, double v, int order) { return eval_jet(chart, u, v, order); }};
}

enum class NormalForm { CrossCap, CuspidalEdge, Swallowtail };

inline SurfaceMap normal_form_map(NormalForm kind, double half_width = 0.5) {
    ParameterDomain dom{-half_width, half_width, -half_width, half_width, false, false};
    auto build = [kind](double t0, double s0, int order) {
        const Jet t = Jet::variable_u(t0, order), s = Jet::variable_v(s0, order);
        JetPoint p;
        switch (kind) {
            case NormalForm::CrossCap: p.series = {t, t * s, s * s}; break;
            case NormalForm::CuspidalEdge: p.series = {t, s * s, s * s * s}; break;
            case NormalForm::Swallowtail: {
                const Jet s2 = s * s;
                p.series = {t, 2.0 * s * t + 4.0 * s2 * s, t * s2 + 3.0 * s2 * s2};
                break;
            }
        }
        return p;
    };
    const char* names[] = {"cross_cap", "cuspidal_edge", "swallowtail"};
    return {names[static_cast<int>(kind)], dom, build};
}

enum class SingularityKind { RegularPoint, CuspidalEdge, Swallowtail, CrossCap, Unclassified };

inline const char* to_string(SingularityKind k) {
    switch (k) {
        case SingularityKind::RegularPoint: return "RegularPoint";
        case SingularityKind::CuspidalEdge: return "CuspidalEdge";
        case SingularityKind::Swallowtail: return "Swallowtail";
        case SingularityKind::CrossCap: return "CrossCap";
        case SingularityKind::Unclassified: return "Unclassified";
    }
    return "?";
}

struct SingularityClass {
    SingularityKind kind = SingularityKind::Unclassified;
    double mu = 0.0;
    double mu_dot = 0.0;
    double whitney = 0.0;             ///< det(P_xi, P_eta eta, P_xi eta)
    double whitney_normalized = 0.0;  ///< divided by |P_xi| (|P_eta eta|^2 + |P_xi eta|^2)
    double rank_ratio = 0.0;          ///< sigma_2 / sigma_1 of (P_u, P_v)
};

struct SingularitySample {
    double t = 0.0;
    std::array<double, 2> uv{};
    double lambda = 0.0;
    std::array<double, 2> grad_lambda{};
    std::array<double, 2> gamma_dot{};  ///< unit tangent of the singular curve
    std::array<double, 2> eta{};        ///< unit null direction
    Vec3d nu;
    double mu = 0.0;
    double mu_dot = 0.0;
    bool frontal = false;  ///< mu and mu_dot are meaningful
    SingularityClass cls;
};

struct TraceOptions {
    double step = 1e-3;
    int max_steps = 60;        ///< per direction from the seed
    double tol = 1e-8;         ///< capture tolerance on lambda
    double mu_tol = 1e-6;
    double whitney_tol = 1e-9;
    double rank_tol = 1e-8;
};

namespace detail {

struct FirstOrder {
    Vec3d Pu, Pv, X, Xu, Xv;
};

inline FirstOrder first_order(const JetPoint& j) {
    if (j.order() < 2) fail(ErrorCode::InsufficientJetOrder, "need a jet of order >= 2");
    FirstOrder f;
    f.Pu = j.partial(1, 0);
    f.Pv = j.partial(0, 1);
    const Vec3d Puu = j.partial(2, 0), Puv = j.partial(1, 1), Pvv = j.partial(0, 2);
    f.X = cross(f.Pu, f.Pv);
    f.Xu = cross(Puu, f.Pv) + cross(f.Pu, Puv);
    f.Xv = cross(Puv, f.Pv) + cross(f.Pu, Pvv);
    return f;
}

/// Singular values (descending) and right singular vectors of (P_u | P_v).
struct Differential {
    double s1 = 0.0, s2 = 0.0;
    std::array<double, 2> kernel{};  ///< right singular vector of s2
};

inline Differential differential(const Vec3d& Pu, const Vec3d& Pv) {
    Eigen::Matrix2d g;
    g << dot(Pu, Pu), dot(Pu, Pv), dot(Pu, Pv), dot(Pv, Pv);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
    Differential d;
    d.s2 = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
    d.s1 = std::sqrt(std::max(0.0, es.eigenvalues()(1)));
    d.kernel = {es.eigenvectors()(0, 0), es.eigenvectors()(1, 0)};
    // Deterministic representative: first nonzero component positive.
    if (d.kernel[0] < 0 || (d.kernel[0] == 0 && d.kernel[1] < 0)) d.kernel = {-d.kernel[0], -d.kernel[1]};
    return d;
}

inline double scale2(const FirstOrder& f) { return std::max(1.0, dot(f.Pu, f.Pu) + dot(f.Pv, f.Pv)); }

/// Dominant left singular vector of (X_u | X_v) and the ratio sigma_2/sigma_1.
inline std::pair<Vec3d, double> limit_direction(const FirstOrder& f) {
    Eigen::Matrix<double, 3, 2> m;
    for (int k = 0; k < 3; ++k) {
        m(k, 0) = f.Xu[k];
        m(k, 1) = f.Xv[k];
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(m, Eigen::ComputeFullU);
    const auto sv = svd.singularValues();
    if (!(sv(0) > 0.0)) return {Vec3d{}, std::numeric_limits<double>::infinity()};
    const auto u = svd.matrixU().col(0);
    return {Vec3d{u(0), u(1), u(2)}, sv(1) / sv(0)};
}

inline constexpr double kFrontalTol = 1e-6;

}  // namespace detail

/// Unit normal of the map at a jet. At regular points (P_u x P_v)/|.|; at a
/// rank-one point the limit of that quotient, i.e. the common direction of
/// the derivatives of P_u x P_v. Without a reference the sign makes
/// <nu, d_eta(P_u x P_v)> negative, otherwise it follows the reference.
inline Vec3d evolutoid_normal(const JetPoint& ejet, const std::optional<Vec3d>& reference = std::nullopt,
                              double tol = 1e-8) {
    if (ejet.order() < 1) fail(ErrorCode::InsufficientJetOrder, "need a jet of order >= 1");
    const Vec3d Pu = ejet.partial(1, 0), Pv = ejet.partial(0, 1);
    const Vec3d X = cross(Pu, Pv);
    const double sc = std::max(1.0, dot(Pu, Pu) + dot(Pv, Pv));
    Vec3d nu;
    if (norm(X) > tol * sc) {
        nu = normalized(X);
    } else {
        if (ejet.order() < 2) fail(ErrorCode::InsufficientJetOrder, "normal at a singular point needs order >= 2");
        const auto f = detail::first_order(ejet);
        auto [dir, ratio] = detail::limit_direction(f);
        if (!(ratio < detail::kFrontalTol))
            fail(ErrorCode::NormalUndefined, "P_u x P_v has no limiting direction (not a frontal here)");
        nu = dir;
        if (!reference) {
            const auto d = detail::differential(Pu, Pv);
            const Vec3d Xeta = d.kernel[0] * f.Xu + d.kernel[1] * f.Xv;
            if (dot(nu, Xeta) > 0) nu = -nu;
        }
    }
    if (reference && dot(nu, *reference) < 0) nu = -nu;
    return nu;
}

struct LambdaValue {
    double lambda = 0.0;
    std::array<double, 2> grad{};
};

/// lambda = det(P_u, P_v, nu) and its gradient, with nu the normal of the map
/// at (u, v) or, if given, a reference normal held fixed.
inline LambdaValue lambda_field(const SurfaceMap& map, double u, double v,
                                const std::optional<Vec3d>& reference = std::nullopt) {
    const JetPoint j = map.jet(u, v, 2);
    const auto f = detail::first_order(j);
    const Vec3d nu = reference ? *reference : evolutoid_normal(j);
    return {dot(f.X, nu), {dot(f.Xu, nu), dot(f.Xv, nu)}};
}

inline LambdaValue lambda_field(const SurfaceChart& chart, double alpha, Branch branch, double u, double v) {
    return lambda_field(evolutoid_map(chart, alpha, branch), u, v);
}

/// Cross-cap / frontal classification of one point. The Whitney test uses the
/// frame (xi, eta) with eta the null direction, so P_xi, P_eta eta and P_xi eta
/// play the roles of P_v, P_uu, P_uv in the usual statement.
inline SingularityClass classify_point(const SingularitySample& sample, const JetPoint& ejet2,
                                       const TraceOptions& opts = {}) {
    if (ejet2.order() < 2) fail(ErrorCode::InsufficientJetOrder, "classification needs a jet of order >= 2");
    SingularityClass c;
    c.mu = sample.mu;
    c.mu_dot = sample.mu_dot;
    const Vec3d Pu = ejet2.partial(1, 0), Pv = ejet2.partial(0, 1);
    const auto d = detail::differential(Pu, Pv);
    c.rank_ratio = d.s1 > 0 ? d.s2 / d.s1 : 0.0;
    if (c.rank_ratio > opts.rank_tol) {
        c.kind = SingularityKind::RegularPoint;
        return c;
    }
    const double e1 = sample.eta[0], e2 = sample.eta[1];
    const double x1 = e2, x2 = -e1;
    const Vec3d Puu = ejet2.partial(2, 0), Puv = ejet2.partial(1, 1), Pvv = ejet2.partial(0, 2);
    const Vec3d Pxi = x1 * Pu + x2 * Pv;
    const Vec3d Pee = e1 * e1 * Puu + 2.0 * e1 * e2 * Puv + e2 * e2 * Pvv;
    const Vec3d Pxe = x1 * e1 * Puu + (x1 * e2 + x2 * e1) * Puv + x2 * e2 * Pvv;
    c.whitney = det3(Pxi, Pee, Pxe);
    const double den = norm(Pxi) * (dot(Pee, Pee) + dot(Pxe, Pxe));
    c.whitney_normalized = den > 0 ? c.whitney / den : 0.0;
    if (std::abs(c.whitney_normalized) > opts.whitney_tol) {
        c.kind = SingularityKind::CrossCap;
    } else if (!sample.frontal) {
        c.kind = SingularityKind::Unclassified;
    } else if (std::abs(sample.mu) > opts.mu_tol) {
        c.kind = SingularityKind::CuspidalEdge;
    } else if (std::abs(sample.mu_dot) > opts.mu_tol) {
        c.kind = SingularityKind::Swallowtail;
    } else {
        c.kind = SingularityKind::Unclassified;
    }
    return c;
}

namespace detail {

struct TracePoint {
    std::array<double, 2> uv{};
    Vec3d nu;
    LambdaValue lv;
    std::array<double, 2> tangent{};
    std::array<double, 2> eta{};
};

inline std::array<double, 2> unit_tangent(const LambdaValue& lv) {
    const double g = std::hypot(lv.grad[0], lv.grad[1]);
    return {lv.grad[1] / g, -lv.grad[0] / g};
}

/// Newton on lambda along its gradient, with the reference normal fixed.
inline bool correct(const SurfaceMap& map, std::array<double, 2>& q, const Vec3d& ref, double gscale) {
    for (int it = 0; it < 30; ++it) {
        if (!map.domain.contains(q[0], q[1])) return false;
        const LambdaValue lv = lambda_field(map, q[0], q[1], ref);
        const double g2 = lv.grad[0] * lv.grad[0] + lv.grad[1] * lv.grad[1];
        if (!(g2 > 1e-24 * gscale * gscale)) fail(ErrorCode::GradientVanished, "grad lambda vanished while correcting");
        const double s = lv.lambda / g2;
        q[0] -= s * lv.grad[0];
        q[1] -= s * lv.grad[1];
        if (std::abs(s) * std::sqrt(g2) < 1e-15) return map.domain.contains(q[0], q[1]);
    }
    return map.domain.contains(q[0], q[1]);
}

}  // namespace detail

/// Predictor-corrector trace of the singular curve {lambda = 0} through the
/// seed, in both directions. Samples are ordered by t, with t = 0 at the seed
/// and t measured by the accumulated step length.
inline std::vector<SingularitySample> trace_singular_curve(const SurfaceMap& map, std::array<double, 2> seed,
                                                           const TraceOptions& opts = {}) {
    if (!map.domain.contains(seed[0], seed[1])) fail(ErrorCode::OutOfDomain, "seed outside the parameter domain");
    const JetPoint j0 = map.jet(seed[0], seed[1], 2);
    const auto f0 = detail::first_order(j0);
    if (norm(f0.X) > opts.tol * detail::scale2(f0))
        fail(ErrorCode::SeedNotSingular, "lambda at the seed exceeds the capture tolerance");
    detail::TracePoint p0;
    p0.uv = seed;
    p0.nu = evolutoid_normal(j0);
    p0.lv = lambda_field(map, seed[0], seed[1], p0.nu);
    const double gscale = std::max(1.0, norm(f0.Xu) + norm(f0.Xv));
    if (!(std::hypot(p0.lv.grad[0], p0.lv.grad[1]) > 1e-12 * gscale))
        fail(ErrorCode::GradientVanished, "grad lambda vanishes at the seed");
    p0.tangent = detail::unit_tangent(p0.lv);
    p0.eta = detail::differential(f0.Pu, f0.Pv).kernel;
    const double mu0 = p0.tangent[0] * p0.eta[1] - p0.tangent[1] * p0.eta[0];
    if (mu0 < 0) p0.eta = {-p0.eta[0], -p0.eta[1]};

    auto walk = [&](double dir) {
        std::vector<detail::TracePoint> pts;
        detail::TracePoint prev = p0;
        for (int k = 0; k < opts.max_steps; ++k) {
            std::array<double, 2> q = {prev.uv[0] + dir * opts.step * prev.tangent[0],
                                       prev.uv[1] + dir * opts.step * prev.tangent[1]};
            if (!map.domain.contains(q[0], q[1])) break;
            // Alternate the corrector with the normal update until the
            // reference normal is stationary.
            detail::TracePoint cur;
            cur.nu = prev.nu;
            bool inside = true;
            detail::FirstOrder f;
            for (int pass = 0; pass < 8; ++pass) {
                inside = detail::correct(map, q, cur.nu, gscale);
                if (!inside) break;
                f = detail::first_order(map.jet(q[0], q[1], 2));
                Vec3d dirn = detail::limit_direction(f).first;
                if (dot(dirn, cur.nu) < 0) dirn = -dirn;
                const double change = norm(dirn - cur.nu);
                cur.nu = dirn;
                if (change < 1e-15) break;
            }
            if (!inside) break;
            cur.uv = q;
            cur.lv = lambda_field(map, q[0], q[1], cur.nu);
            if (!(std::hypot(cur.lv.grad[0], cur.lv.grad[1]) > 1e-12 * gscale)) break;
            cur.tangent = detail::unit_tangent(cur.lv);
            if (cur.tangent[0] * prev.tangent[0] + cur.tangent[1] * prev.tangent[1] < 0)
                cur.tangent = {-cur.tangent[0], -cur.tangent[1]};
            cur.eta = detail::differential(f.Pu, f.Pv).kernel;
            if (cur.eta[0] * prev.eta[0] + cur.eta[1] * prev.eta[1] < 0) cur.eta = {-cur.eta[0], -cur.eta[1]};
            pts.push_back(cur);
            prev = cur;
            if (k > 2 && std::hypot(q[0] - seed[0], q[1] - seed[1]) < 0.5 * opts.step) break;
        }
        return pts;
    };

    const auto back = walk(-1.0);
    const auto fwd = walk(1.0);
    std::vector<detail::TracePoint> all(back.rbegin(), back.rend());
    all.push_back(p0);
    all.insert(all.end(), fwd.begin(), fwd.end());
    const int n0 = static_cast<int>(back.size());

    std::vector<SingularitySample> out(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        auto& s = out[i];
        const auto& p = all[i];
        s.t = (static_cast<int>(i) - n0) * opts.step;
        s.uv = p.uv;
        s.lambda = p.lv.lambda;
        s.grad_lambda = p.lv.grad;
        s.gamma_dot = p.tangent;
        s.eta = p.eta;
        s.nu = p.nu;
        s.mu = p.tangent[0] * p.eta[1] - p.tangent[1] * p.eta[0];
        s.frontal = true;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t a = i > 0 ? i - 1 : i, b = i + 1 < out.size() ? i + 1 : i;
        out[i].mu_dot = b > a ? (out[b].mu - out[a].mu) / (out[b].t - out[a].t) : 0.0;
        out[i].cls = classify_point(out[i], map.jet(out[i].uv[0], out[i].uv[1], 2), opts);
    }
    return out;
}

inline std::vector<SingularitySample> trace_singular_curve(const SurfaceChart& chart, double alpha, Branch branch,
                                                           std::array<double, 2> seed, const TraceOptions& opts = {}) {
    return trace_singular_curve(evolutoid_map(chart, alpha, branch), seed, opts);
}

/// Pointwise analysis of a rank-one point without tracing (used where the
/// normal has no limit, e.g. at a cross cap).
inline SingularitySample analyze_point(const SurfaceMap& map, std::array<double, 2> uv, const TraceOptions& opts = {}) {
    const JetPoint j = map.jet(uv[0], uv[1], 2);
    const auto f = detail::first_order(j);
    SingularitySample s;
    s.uv = uv;
    s.lambda = norm(f.X);
    s.eta = detail::differential(f.Pu, f.Pv).kernel;
    s.frontal = false;
    s.cls = classify_point(s, j, opts);
    return s;
}

/// Traces through the seed if the normal extends there; otherwise returns the
/// single pointwise sample.
inline std::vector<SingularitySample> singular_samples(const SurfaceMap& map, std::array<double, 2> seed,
                                                       const TraceOptions& opts = {}) {
    try {
        return trace_singular_curve(map, seed, opts);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NormalUndefined) throw;
    }
    return {analyze_point(map, seed, opts)};
}

inline const SingularitySample& sample_at_seed(const std::vector<SingularitySample>& samples) {
    for (const auto& s : samples)
        if (s.t == 0.0) return s;
    return samples.front();
}

struct TheoremSingReport {
    SingularityKind kind = SingularityKind::Unclassified;
    double whitney = 0.0;
    double whitney_normalized = 0.0;
    double mu0 = 0.0;
    std::array<double, 2> eta0{};
    Vec3d nu0;
    std::array<double, 2> grad_lambda0{};
    std::size_t samples = 0;
    const char* side_condition = "SideConditionVacuous";
};

/// Builds the Monge patch of mc (a03 = 0), traces the evolutoid's singular
/// curve through the origin and checks that the origin is a cuspidal edge.
inline TheoremSingReport verify_theorem_sing(const MongeCoefficients& mc, double alpha, const TraceOptions& opts = {}) {
    mc.validate_for_evolutoid();
    check_alpha(alpha);
    if (mc.a03 != 0.0) fail(ErrorCode::PreconditionViolated, "a03 must vanish");
    TheoremSingReport rep;
    // With k1 > k2 the ratio k1 / (k2 - k1) is positive only when k1 < 0.
    const double ratio = mc.k1 / (mc.k2 - mc.k1);
    if (ratio > 0) {
        const double t = std::tan(alpha);
        rep.side_condition = "SideConditionHolds";
        if (std::abs(t * t - ratio) < 1e-9 * std::max(1.0, ratio))
            fail(ErrorCode::PreconditionViolated, "tan^2(alpha) = k1 / (k2 - k1)");
    }
    const auto samples = trace_singular_curve(monge_patch_chart(mc), alpha, Branch::Beta0, {0.0, 0.0}, opts);
    const auto& s = sample_at_seed(samples);
    rep.kind = s.cls.kind;
    rep.whitney = s.cls.whitney;
    rep.whitney_normalized = s.cls.whitney_normalized;
    rep.mu0 = s.mu;
    rep.eta0 = s.eta;
    rep.nu0 = s.nu;
    rep.grad_lambda0 = s.grad_lambda;
    rep.samples = samples.size();
    const bool ok = rep.kind == SingularityKind::CuspidalEdge && std::abs(rep.whitney_normalized) < opts.whitney_tol &&
                    std::abs(rep.eta0[0]) < 1e-9;
    if (!ok) {
        std::ostringstream os;
        os.precision(17);
        os << "class=" << to_string(rep.kind) << " whitney=" << rep.whitney
           << " whitney_normalized=" << rep.whitney_normalized << " mu0=" << rep.mu0 << " eta0=(" << rep.eta0[0]
           << "," << rep.eta0[1] << ") nu0=(" << rep.nu0[0] << "," << rep.nu0[1] << "," << rep.nu0[2]
           << ") grad_lambda0=(" << rep.grad_lambda0[0] << "," << rep.grad_lambda0[1] << ")";
        fail(ErrorCode::AssertionFailure, os.str());
    }
    return rep;
}

}  // namespace evolutoid

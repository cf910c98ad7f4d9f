#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "evolutoid/jets.hpp"
#include "oracles.hpp"

using namespace evolutoid;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_vec(const Vec3d& a, const Vec3d& b, double tol) {
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], tol) << "component " << k;
}

MongeCoefficients monge21() {
    MongeCoefficients mc;
    mc.k1 = 2.0;
    mc.k2 = 1.0;
    return mc;
}

std::vector<SurfaceChart> catalog() {
    MongeCoefficients mc = monge21();
    mc.a30 = 0.3;
    mc.a12 = -0.4;
    mc.a03 = 0.7;
    mc.a22 = 0.2;
    mc.a41 = -0.5;
    return {chart_from_catalog("torus", {2, 1}),
            chart_from_catalog("sphere", {1.5}),
            chart_from_catalog("surface_of_revolution", {-1, 1, 3, 2, 0, 1, 0, 1}),
            monge_patch_chart(mc),
            chart_from_catalog("graph_surface", {0.5, 1, 1, 1, 3, 0, 0.2})};
}

}  // namespace

TEST(Jets, MongePatchSecondDerivatives) {
    const JetPoint j = eval_jet(monge_patch_chart(monge21()), 0, 0, 2);
    expect_vec(j.partial(2, 0), {0, 0, 2}, 0);
    expect_vec(j.partial(0, 2), {0, 0, 1}, 0);
    expect_vec(j.partial(1, 1), {0, 0, 0}, 0);
}

TEST(Jets, TorusFirstOrderByHand) {
    const JetPoint j = eval_jet(torus_chart(2, 1), kPi / 2, 0, 1);
    expect_vec(j.position(), {2, 0, 1}, 1e-15);
    expect_vec(j.partial(1, 0), {-1, 0, 0}, 1e-15);
    expect_vec(j.partial(0, 1), {0, 2, 0}, 1e-15);
}

TEST(Jets, OrderOneHasThreeEntries) {
    for (const auto& c : catalog()) {
        const auto& d = c.domain();
        const double u = d.periodic_u ? 0.4 : 0.5 * (d.u0 + d.u1) + 0.01;
        const double v = d.periodic_v ? 0.3 : 0.5 * (d.v0 + d.v1) - 0.01;
        EXPECT_EQ(eval_jet(c, u, v, 1).size(), 3u) << c.name();
    }
}

TEST(Jets, OrderBounds) {
    const auto t = torus_chart(2, 1);
    EXPECT_THROW(eval_jet(t, 0, 0, 0), Error);
    EXPECT_THROW(eval_jet(t, 0, 0, 7), Error);
    EXPECT_EQ(eval_jet(t, 0, 0, 6).size(), 28u);
}

TEST(Jets, OutOfDomain) {
    try {
        eval_jet(monge_patch_chart(monge21()), 0.5, 0, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
    }
}

TEST(Jets, RankDeficientChart) {
    const SurfaceChart folded("folded", {}, {-1, 1, -1, 1}, [](const Jet& u, const Jet& v) {
        return Vec3<Jet>{u * u, v, Jet(0.0, u.order())};
    });
    try {
        eval_jet(folded, 0, 0.2, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankDeficientChart);
    }
    EXPECT_NO_THROW(eval_jet(folded, 0.3, 0.2, 2));
}

TEST(Jets, DeterministicEvaluation) {
    for (const auto& c : catalog()) {
        const double u = c.domain().periodic_u ? 1.1 : 0.05, v = c.domain().periodic_v ? 2.3 : -0.07;
        const JetPoint a = eval_jet(c, u, v, 6), b = eval_jet(c, u, v, 6);
        for (int n = 0; n <= 6; ++n)
            for (int i = 0; i <= n; ++i)
                for (int k = 0; k < 3; ++k) EXPECT_EQ(a.partial(i, n - i)[k], b.partial(i, n - i)[k]);
    }
}

TEST(Jets, ConcurrentEvaluationMatchesSerial) {
    const auto t = torus_chart(2, 1);
    const JetPoint ref = eval_jet(t, 0.7, 1.9, 5);
    std::vector<int> same(8, 0);
    std::vector<std::thread> pool;
    for (int k = 0; k < 8; ++k)
        pool.emplace_back([&, k] {
            int ok = 1;
            for (int r = 0; r < 50; ++r) {
                const JetPoint j = eval_jet(t, 0.7, 1.9, 5);
                for (int i = 0; i <= 5; ++i)
                    for (int c = 0; c < 3; ++c) ok &= j.partial(i, 5 - i)[c] == ref.partial(i, 5 - i)[c];
            }
            same[k] = ok;
        });
    for (auto& th : pool) th.join();
    for (int ok : same) EXPECT_EQ(ok, 1);
}

TEST(Jets, PartialsMatchFiniteDifferences) {
    std::mt19937 rng(11);
    for (const auto& c : catalog()) {
        const auto& d = c.domain();
        auto pick = [&](double a, double b, bool periodic) {
            std::uniform_real_distribution<double> U(periodic ? 0.0 : a + 0.1 * (b - a),
                                                     periodic ? 6.2 : b - 0.1 * (b - a));
            return U(rng);
        };
        for (int r = 0; r < 10; ++r) {
            const double u = pick(d.u0, d.u1, d.periodic_u), v = pick(d.v0, d.v1, d.periodic_v);
            const JetPoint j = eval_jet(c, u, v, 2);
            auto P = [&](double a, double b) { return c.position(a, b); };
            auto check = [&](const Vec3d& exact, const Vec3d& approx, const char* what) {
                const double scale = std::max(1.0, norm(exact));
                EXPECT_LT(norm(exact - approx) / scale, 1e-6) << c.name() << " " << what << " at " << u << "," << v;
            };
            check(j.partial(1, 0), oracle::fd(std::function<Vec3d(double)>([&](double s) { return P(s, v); }), u), "u");
            check(j.partial(0, 1), oracle::fd(std::function<Vec3d(double)>([&](double s) { return P(u, s); }), v), "v");
            Vec3d uu, vv, uv;
            for (int k = 0; k < 3; ++k) {
                uu[k] = oracle::fd2([&](double s) { return P(s, v)[k]; }, u);
                vv[k] = oracle::fd2([&](double s) { return P(u, s)[k]; }, v);
                uv[k] = oracle::fd([&](double s) { return c.series(u, s, 1)[k].partial(1, 0); }, v);
            }
            check(j.partial(2, 0), uu, "uu");
            check(j.partial(0, 2), vv, "vv");
            check(j.partial(1, 1), uv, "uv");
        }
    }
}

TEST(Jets, MixedPartialsCommute) {
    const Vec3<Jet> s = torus_chart(2, 1).series(0.4, 1.3, 4);
    const Vec3<Jet> a = d_dv(d_du(s)), b = d_du(d_dv(s));
    for (int k = 0; k < 3; ++k)
        for (int n = 0; n <= 2; ++n)
            for (int i = 0; i <= n; ++i) EXPECT_EQ(a[k].coeff(i, n - i), b[k].coeff(i, n - i));
}

TEST(Jets, TruncationCommutesWithComposition) {
    const Jet u = Jet::variable_u(0.3, 6), v = Jet::variable_v(-0.2, 6);
    const Jet x = 1.5 + u * v + sin(u) * 0.5 - v * v * v;
    for (int k = 1; k <= 6; ++k) {
        const Jet lhs = sqrt(x).truncated(k), rhs = sqrt(x.truncated(k));
        const Jet lq = (x / (x * x + 1.0)).truncated(k), rq = x.truncated(k) / (x.truncated(k) * x.truncated(k) + 1.0);
        for (int n = 0; n <= k; ++n)
            for (int i = 0; i <= n; ++i) {
                EXPECT_NEAR(lhs.coeff(i, n - i), rhs.coeff(i, n - i), 1e-14);
                EXPECT_NEAR(lq.coeff(i, n - i), rq.coeff(i, n - i), 1e-14);
            }
    }
}

TEST(Jets, SeriesIdentities) {
    const Jet u = Jet::variable_u(0.7, 6), v = Jet::variable_v(0.1, 6);
    const Jet x = 2.0 + u * v + v;
    const Jet one = sin(u) * sin(u) + cos(u) * cos(u);
    const Jet r = sqrt(x) * sqrt(x) - x;
    const Jet q = reciprocal(x) * x;
    const Jet l = log(exp(x)) - x;
    for (int n = 0; n <= 6; ++n)
        for (int i = 0; i <= n; ++i) {
            EXPECT_NEAR(one.coeff(i, n - i), n == 0 ? 1.0 : 0.0, 1e-14);
            EXPECT_NEAR(r.coeff(i, n - i), 0.0, 1e-13);
            EXPECT_NEAR(q.coeff(i, n - i), n == 0 ? 1.0 : 0.0, 1e-14);
            EXPECT_NEAR(l.coeff(i, n - i), 0.0, 1e-12);
        }
}

TEST(Jets, UnitNormalizationChainRule) {
    // d/du of p/|p| for p = (cos u, sin u, 1) * (2 + u) stays unit to all orders.
    const Jet u = Jet::variable_u(0.4, 5), v = Jet::variable_v(0.0, 5);
    const Vec3<Jet> p{cos(u) * (2.0 + u), sin(u) * (2.0 + u), 1.0 + v};
    const Vec3<Jet> n = p * reciprocal(sqrt(dot(p, p)));
    const Jet nn = dot(n, n);
    for (int k = 0; k <= 5; ++k)
        for (int i = 0; i <= k; ++i) EXPECT_NEAR(nn.coeff(i, k - i), k == 0 ? 1.0 : 0.0, 1e-14);
}

TEST(Catalog, TorusDomainAndMetric) {
    const auto t = chart_from_catalog("torus", {2, 1});
    EXPECT_DOUBLE_EQ(t.domain().u0, 0.0);
    EXPECT_DOUBLE_EQ(t.domain().u1, 2 * kPi);
    EXPECT_TRUE(t.domain().periodic_u && t.domain().periodic_v);
    for (double u : {0.0, 0.5, 2.0, 4.0}) {
        const Vec3d pu = eval_jet(t, u, 1.0, 1).partial(1, 0);
        EXPECT_NEAR(dot(pu, pu), 1.0, 1e-15);
    }
}

TEST(Catalog, InvalidAndUnknown) {
    try {
        chart_from_catalog("torus", {1, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
    }
    try {
        chart_from_catalog("klein_bottle", {1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownSurface);
    }
    EXPECT_THROW(chart_from_catalog("surface_of_revolution", {-1, 1, 2, 0, 1, 0, 1}), Error);
}

TEST(Catalog, MongePatchFromList) {
    const auto c = chart_from_catalog("monge_patch", {2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    EXPECT_NEAR(c.position(0.1, 0.1)[2], 0.015, 1e-16);
    EXPECT_DOUBLE_EQ(c.domain().u1, 0.2);
}

TEST(MongePatch, Evaluation) {
    const auto c = monge_patch_chart(monge21());
    EXPECT_NEAR(c.position(0.1, 0.1)[2], 0.015, 1e-16);
    MongeCoefficients mc = monge21();
    mc.a03 = 6.0;
    EXPECT_NEAR(monge_patch_chart(mc).position(0, 0.1)[2], 0.006, 1e-16);
}

TEST(MongePatch, SecondOrderIsPrincipal) {
    std::mt19937 rng(4);
    for (int r = 0; r < 20; ++r) {
        const MongeCoefficients mc = oracle::random_monge(rng);
        const JetPoint j = eval_jet(monge_patch_chart(mc), 0, 0, 2);
        expect_vec(j.partial(2, 0), {0, 0, mc.k1}, 1e-15);
        expect_vec(j.partial(0, 2), {0, 0, mc.k2}, 1e-15);
        expect_vec(j.partial(1, 1), {0, 0, 0}, 1e-15);
    }
}

TEST(MongePatch, RejectsInadmissible) {
    MongeCoefficients mc = monge21();
    mc.k1 = 0.5;
    EXPECT_THROW(monge_patch_chart(mc), Error);
}

TEST(Catalog, RegularOnAdvertisedDomain) {
    for (const auto& c : catalog()) {
        const auto& d = c.domain();
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j <= 20; ++j) {
                const double u = d.u0 + (d.u1 - d.u0) * i / 20.0, v = d.v0 + (d.v1 - d.v0) * j / 20.0;
                EXPECT_NO_THROW(eval_jet(c, u, v, 1)) << c.name() << " " << u << "," << v;
            }
    }
}

TEST(Catalog, SwappedChartExchangesParameters) {
    const auto t = torus_chart(2, 1);
    const auto s = swapped_chart(t);
    const JetPoint a = eval_jet(t, 0.3, 1.2, 2), b = eval_jet(s, 1.2, 0.3, 2);
    expect_vec(a.partial(1, 0), b.partial(0, 1), 0);
    expect_vec(a.partial(2, 0), b.partial(0, 2), 0);
    EXPECT_EQ(s.orientation(), -t.orientation());
}

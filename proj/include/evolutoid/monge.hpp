#pragma once

#include <array>
#include <initializer_list>
#include <cmath>
#include <string>
#include <utility>

#include "errors.hpp"

namespace evolutoid {

/// Principal curvatures and higher Taylor coefficients of a surface written as
/// a graph z = f(x, y) over its tangent plane with principal axes along x, y:
///
///   f = (k1 x^2 + k2 y^2)/2 + sum a_ij x^i y^j / (i! j!),   3 <= i+j <= 4,
///
/// plus the single fifth-order coefficient a41 that the cusp-of-Gauss
/// classification of the evolutoid depends on.
struct MongeCoefficients {
    double k1 = 0.0;
    double k2 = 0.0;
    double a30 = 0.0, a21 = 0.0, a12 = 0.0, a03 = 0.0;
    double a40 = 0.0, a31 = 0.0, a22 = 0.0, a13 = 0.0, a04 = 0.0;
    double a41 = 0.0;

    /// Multi-indices of the stored a_ij, in field order.
    static constexpr std::array<std::pair<int, int>, 10> kIndices{{
        {3, 0}, {2, 1}, {1, 2}, {0, 3}, {4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}, {4, 1}}};

    double a(int i, int j) const { return const_cast<MongeCoefficients*>(this)->a(i, j); }
    double& a(int i, int j) {
        switch (i * 10 + j) {
            case 30: return a30;
            case 21: return a21;
            case 12: return a12;
            case 3: return a03;
            case 40: return a40;
            case 31: return a31;
            case 22: return a22;
            case 13: return a13;
            case 4: return a04;
            case 41: return a41;
            default: fail(ErrorCode::InvalidParams, "no Monge coefficient a" + std::to_string(i) + std::to_string(j));
        }
    }

    bool finite() const {
        if (!std::isfinite(k1) || !std::isfinite(k2)) return false;
        for (auto [i, j] : kIndices)
            if (!std::isfinite(a(i, j))) return false;
        return true;
    }

    /// Throws InadmissibleMonge unless k1 > k2 and all entries are finite.
    void validate() const {
        if (!finite()) fail(ErrorCode::InadmissibleMonge, "non-finite Monge coefficient");
        if (!(k1 > k2)) fail(ErrorCode::InadmissibleMonge, "requires k1 > k2");
    }

    /// Additionally requires a non-parabolic, non-umbilic base point (k2 != 0).
    void validate_for_evolutoid() const {
        validate();
        if (k2 == 0.0) fail(ErrorCode::InadmissibleMonge, "k2 = 0: base point is parabolic");
    }
};

/// Applies the reflections x -> -x and/or y -> -y of the tangent-plane frame.
inline MongeCoefficients reflect(const MongeCoefficients& mc, bool flip_x, bool flip_y) {
    MongeCoefficients r = mc;
    for (auto [i, j] : MongeCoefficients::kIndices) {
        double s = 1.0;
        if (flip_x && (i % 2)) s = -s;
        if (flip_y && (j % 2)) s = -s;
        r.a(i, j) = s * mc.a(i, j);
    }
    return r;
}

/// Canonical representative under the frame reflections: the x-reflection is
/// fixed by the first of a30, a12 that is not zero (made positive), the
/// y-reflection by the first of a21, a03; if either is still free, a31 then
/// a13 (odd in both) decide it.
inline MongeCoefficients canonical_signs(const MongeCoefficients& mc, double tol = 1e-9) {
    auto first_sign = [tol](std::initializer_list<double> values) {
        for (double x : values)
            if (std::abs(x) > tol) return x > 0 ? 1 : -1;
        return 0;
    };
    int sx = first_sign({mc.a30, mc.a12});
    int sy = first_sign({mc.a21, mc.a03});
    if (sx == 0 || sy == 0) {
        // The free flip makes the first non-zero of a31, a13 positive; both are
        // odd in x and in y.
        const int mixed = first_sign({mc.a31, mc.a13});
        if (sx == 0 && sy == 0) {
            sx = 1;
            sy = mixed == 0 ? 1 : mixed;
        } else if (sx == 0) {
            sx = mixed == 0 ? 1 : mixed * sy;
        } else {
            sy = mixed == 0 ? 1 : mixed * sx;
        }
    }
    return reflect(mc, sx < 0, sy < 0);
}

}  // namespace evolutoid

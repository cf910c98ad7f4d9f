#pragma once

// Truncated bivariate Taylor series ("jets") in the local offsets (du, dv)
// around a base point. Coefficients are the normalized Taylor coefficients
// c_ij, so that d^{i+j}/du^i dv^j = i! j! c_ij at the base point.
//
// Nonlinear functions are applied by composing the univariate Taylor
// expansion of the function at the constant term with the nilpotent part,
// which is exact to the stored order.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <ostream>

namespace evolutoid {

template <typename T, int MaxOrder>
class Taylor2 {
    static_assert(MaxOrder >= 0, "order must be non-negative");

public:
    static constexpr int kMaxOrder = MaxOrder;
    static constexpr int kCapacity = (MaxOrder + 1) * (MaxOrder + 2) / 2;

    /// Graded index: all terms of total degree n are stored contiguously.
    static constexpr int index(int i, int j) {
        const int n = i + j;
        return n * (n + 1) / 2 + j;
    }
    static constexpr int terms(int order) { return (order + 1) * (order + 2) / 2; }

    Taylor2() = default;
    explicit Taylor2(int order) : order_(order) { assert(order >= 0 && order <= MaxOrder); }
    Taylor2(T value, int order) : order_(order) {
        assert(order >= 0 && order <= MaxOrder);
        c_[0] = value;
    }

    static Taylor2 constant(T value, int order) { return Taylor2(value, order); }
    /// The coordinate function u0 + du.
    static Taylor2 variable_u(T u0, int order) {
        Taylor2 t(u0, order);
        if (order >= 1) t.c_[index(1, 0)] = T(1);
        return t;
    }
    /// The coordinate function v0 + dv.
    static Taylor2 variable_v(T v0, int order) {
        Taylor2 t(v0, order);
        if (order >= 1) t.c_[index(0, 1)] = T(1);
        return t;
    }

    int order() const { return order_; }
    T value() const { return c_[0]; }

    T coeff(int i, int j) const {
        assert(i >= 0 && j >= 0 && i + j <= order_);
        return c_[index(i, j)];
    }
    T& coeff(int i, int j) {
        assert(i >= 0 && j >= 0 && i + j <= order_);
        return c_[index(i, j)];
    }

    /// Partial derivative d^{i+j}/du^i dv^j at the base point.
    T partial(int i, int j) const { return coeff(i, j) * factorial(i) * factorial(j); }

    Taylor2 truncated(int order) const {
        Taylor2 t(std::min(order, order_));
        std::copy_n(c_.begin(), terms(t.order_), t.c_.begin());
        return t;
    }

    /// d/du as a series; loses one order.
    Taylor2 d_du() const {
        assert(order_ >= 1);
        Taylor2 t(order_ - 1);
        for (int n = 0; n <= order_ - 1; ++n)
            for (int j = 0; j <= n; ++j) t.c_[index(n - j, j)] = T(n - j + 1) * c_[index(n - j + 1, j)];
        return t;
    }
    /// d/dv as a series; loses one order.
    Taylor2 d_dv() const {
        assert(order_ >= 1);
        Taylor2 t(order_ - 1);
        for (int n = 0; n <= order_ - 1; ++n)
            for (int j = 0; j <= n; ++j) t.c_[index(n - j, j)] = T(j + 1) * c_[index(n - j, j + 1)];
        return t;
    }

    /// Evaluates the truncated polynomial at an offset.
    T evaluate(T du, T dv) const {
        T sum = T(0);
        for (int n = order_; n >= 0; --n)
            for (int j = 0; j <= n; ++j) sum += c_[index(n - j, j)] * ipow(du, n - j) * ipow(dv, j);
        return sum;
    }

    Taylor2& operator+=(const Taylor2& o) {
        order_ = std::min(order_, o.order_);
        for (int k = 0; k < terms(order_); ++k) c_[k] += o.c_[k];
        clear_tail();
        return *this;
    }
    Taylor2& operator-=(const Taylor2& o) {
        order_ = std::min(order_, o.order_);
        for (int k = 0; k < terms(order_); ++k) c_[k] -= o.c_[k];
        clear_tail();
        return *this;
    }
    Taylor2& operator*=(const Taylor2& o) { return *this = *this * o; }
    Taylor2& operator/=(const Taylor2& o) { return *this = *this * reciprocal(o); }

    Taylor2& operator+=(T s) {
        c_[0] += s;
        return *this;
    }
    Taylor2& operator-=(T s) {
        c_[0] -= s;
        return *this;
    }
    Taylor2& operator*=(T s) {
        for (int k = 0; k < terms(order_); ++k) c_[k] *= s;
        return *this;
    }
    Taylor2& operator/=(T s) {
        for (int k = 0; k < terms(order_); ++k) c_[k] /= s;
        return *this;
    }

    friend Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
    friend Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
    friend Taylor2 operator-(Taylor2 a) {
        for (int k = 0; k < terms(a.order_); ++k) a.c_[k] = -a.c_[k];
        return a;
    }
    friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
        Taylor2 r(std::min(a.order_, b.order_));
        for (int n1 = 0; n1 <= r.order_; ++n1)
            for (int j1 = 0; j1 <= n1; ++j1) {
                const T x = a.c_[index(n1 - j1, j1)];
                if (x == T(0)) continue;
                for (int n2 = 0; n2 <= r.order_ - n1; ++n2)
                    for (int j2 = 0; j2 <= n2; ++j2)
                        r.c_[index(n1 - j1 + n2 - j2, j1 + j2)] += x * b.c_[index(n2 - j2, j2)];
            }
        return r;
    }
    friend Taylor2 operator/(const Taylor2& a, const Taylor2& b) { return a * reciprocal(b); }

    friend Taylor2 operator+(Taylor2 a, T s) { return a += s; }
    friend Taylor2 operator+(T s, Taylor2 a) { return a += s; }
    friend Taylor2 operator-(Taylor2 a, T s) { return a -= s; }
    friend Taylor2 operator-(T s, Taylor2 a) { return (-a) += s; }
    friend Taylor2 operator*(Taylor2 a, T s) { return a *= s; }
    friend Taylor2 operator*(T s, Taylor2 a) { return a *= s; }
    friend Taylor2 operator/(Taylor2 a, T s) { return a /= s; }
    friend Taylor2 operator/(T s, const Taylor2& a) { return reciprocal(a) *= s; }

    /// Applies g(c0 + h) = sum_k coef[k] h^k, with coef[k] = g^(k)(c0)/k!.
    template <typename CoefFn>
    friend Taylor2 compose_univariate(const Taylor2& x, CoefFn coef) {
        Taylor2 h = x;
        h.c_[0] = T(0);
        Taylor2 r(coef(x.order_), x.order_);
        for (int k = x.order_ - 1; k >= 0; --k) {
            r = r * h;
            r.c_[0] += coef(k);
        }
        return r;
    }

    friend Taylor2 reciprocal(const Taylor2& x) {
        const T x0 = x.c_[0];
        return compose_univariate(x, [x0](int k) {
            return ((k % 2) ? T(-1) : T(1)) / ipow(x0, k + 1);
        });
    }
    friend Taylor2 pow(const Taylor2& x, T p) {
        const T x0 = x.c_[0];
        return compose_univariate(x, [x0, p](int k) {
            T binom = T(1);
            for (int i = 0; i < k; ++i) binom *= (p - T(i)) / T(i + 1);
            using std::pow;
            return binom * pow(x0, p - T(k));
        });
    }
    friend Taylor2 sqrt(const Taylor2& x) { return pow(x, T(0.5)); }
    friend Taylor2 exp(const Taylor2& x) {
        using std::exp;
        const T e0 = exp(x.c_[0]);
        return compose_univariate(x, [e0](int k) { return e0 / factorial(k); });
    }
    friend Taylor2 log(const Taylor2& x) {
        using std::log;
        const T x0 = x.c_[0];
        return compose_univariate(x, [x0](int k) {
            if (k == 0) return log(x0);
            return ((k % 2) ? T(1) : T(-1)) / (T(k) * ipow(x0, k));
        });
    }
    friend Taylor2 sin(const Taylor2& x) {
        using std::cos;
        using std::sin;
        const T s0 = sin(x.c_[0]);
        const T c0 = cos(x.c_[0]);
        return compose_univariate(x, [s0, c0](int k) {
            const T cyc[4] = {s0, c0, -s0, -c0};
            return cyc[k % 4] / factorial(k);
        });
    }
    friend Taylor2 cos(const Taylor2& x) {
        using std::cos;
        using std::sin;
        const T s0 = sin(x.c_[0]);
        const T c0 = cos(x.c_[0]);
        return compose_univariate(x, [s0, c0](int k) {
            const T cyc[4] = {c0, -s0, -c0, s0};
            return cyc[k % 4] / factorial(k);
        });
    }

    /// Substitutes series (with zero constant term) for du and dv.
    friend Taylor2 compose(const Taylor2& p, const Taylor2& du, const Taylor2& dv) {
        assert(du.c_[0] == T(0) && dv.c_[0] == T(0));
        const int order = std::min(du.order_, dv.order_);
        std::array<Taylor2, MaxOrder + 1> du_pow, dv_pow;
        du_pow[0] = Taylor2(T(1), order);
        dv_pow[0] = Taylor2(T(1), order);
        for (int k = 1; k <= order; ++k) {
            du_pow[k] = du_pow[k - 1] * du;
            dv_pow[k] = dv_pow[k - 1] * dv;
        }
        Taylor2 r(order);
        for (int n = 0; n <= std::min(order, p.order_); ++n)
            for (int j = 0; j <= n; ++j) {
                const T c = p.c_[index(n - j, j)];
                if (c != T(0)) r += c * (du_pow[n - j] * dv_pow[j]);
            }
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const Taylor2& t) {
        os << "Taylor2[order " << t.order_ << "](";
        for (int n = 0; n <= t.order_; ++n)
            for (int j = 0; j <= n; ++j) os << (n + j ? ", " : "") << t.c_[index(n - j, j)];
        return os << ")";
    }

    static T factorial(int n) {
        T f = T(1);
        for (int k = 2; k <= n; ++k) f *= T(k);
        return f;
    }

private:
    static T ipow(T x, int n) {
        T r = T(1);
        for (int k = 0; k < n; ++k) r *= x;
        return r;
    }
    void clear_tail() {
        for (int k = terms(order_); k < kCapacity; ++k) c_[k] = T(0);
    }

    int order_ = MaxOrder;
    std::array<T, kCapacity> c_{};
};

/// Highest derivative order any chart has to deliver.
inline constexpr int kMaxJetOrder = 6;

using Jet = Taylor2<double, kMaxJetOrder>;

}  // namespace evolutoid

#pragma once

#include <array>
#include <cmath>
#include <algorithm>
#include <cstddef>
#include <utility>

namespace evolutoid {

/// Three-component vector over an arbitrary scalar (double or a Taylor series).
template <typename S>
struct Vec3 {
    std::array<S, 3> c{};

    Vec3() = default;
    Vec3(S x, S y, S z) : c{std::move(x), std::move(y), std::move(z)} {}

    S& operator[](std::size_t i) { return c[i]; }
    const S& operator[](std::size_t i) const { return c[i]; }

    const S& x() const { return c[0]; }
    const S& y() const { return c[1]; }
    const S& z() const { return c[2]; }

    Vec3& operator+=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec3& operator-=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
        return *this;
    }
    template <typename K>
    Vec3& operator*=(const K& k) {
        for (std::size_t i = 0; i < 3; ++i) c[i] *= k;
        return *this;
    }
    template <typename K>
    Vec3& operator/=(const K& k) {
        for (std::size_t i = 0; i < 3; ++i) c[i] /= k;
        return *this;
    }

    friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend Vec3 operator-(Vec3 a) {
        for (std::size_t i = 0; i < 3; ++i) a.c[i] = -a.c[i];
        return a;
    }
    template <typename K>
    friend Vec3 operator*(Vec3 a, const K& k) { return a *= k; }
    template <typename K>
    friend Vec3 operator*(const K& k, Vec3 a) { return a *= k; }
    template <typename K>
    friend Vec3 operator/(Vec3 a, const K& k) { return a /= k; }
};

using Vec3d = Vec3<double>;

template <typename S>
S dot(const Vec3<S>& a, const Vec3<S>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <typename S>
Vec3<S> cross(const Vec3<S>& a, const Vec3<S>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <typename S>
S det3(const Vec3<S>& a, const Vec3<S>& b, const Vec3<S>& c) {
    return dot(a, cross(b, c));
}

template <typename S>
S norm(const Vec3<S>& a) {
    using std::sqrt;
    return sqrt(dot(a, a));
}

template <typename S>
Vec3<S> normalized(const Vec3<S>& a) {
    return a / norm(a);
}

inline double max_abs(const Vec3d& a) {
    return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

}  // namespace evolutoid

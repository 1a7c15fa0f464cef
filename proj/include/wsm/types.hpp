#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace wsm {

template <int Dim>
using Vec = std::array<double, Dim>;

template <int Dim>
using Mat = std::array<std::array<double, Dim>, Dim>;

template <std::size_t Dim>
constexpr double dot(const std::array<double, Dim>& a, const std::array<double, Dim>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t Dim>
inline double norm(const std::array<double, Dim>& a) {
    return std::sqrt(dot(a, a));
}

template <std::size_t Dim>
constexpr std::array<double, Dim> operator+(const std::array<double, Dim>& a, const std::array<double, Dim>& b) {
    std::array<double, Dim> r{};
    for (std::size_t i = 0; i < Dim; ++i) r[i] = a[i] + b[i];
    return r;
}

template <std::size_t Dim>
constexpr std::array<double, Dim> operator-(const std::array<double, Dim>& a, const std::array<double, Dim>& b) {
    std::array<double, Dim> r{};
    for (std::size_t i = 0; i < Dim; ++i) r[i] = a[i] - b[i];
    return r;
}

template <std::size_t Dim>
constexpr std::array<double, Dim> operator*(double s, const std::array<double, Dim>& a) {
    std::array<double, Dim> r{};
    for (std::size_t i = 0; i < Dim; ++i) r[i] = s * a[i];
    return r;
}

inline Vec<3> cross(const Vec<3>& a, const Vec<3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

constexpr int ipow(int base, int exp) {
    int r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace wsm

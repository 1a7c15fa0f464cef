#pragma once

// Displacement of a finite rectangular dislocation in an elastic half-space
// z <= 0 with a traction-free surface (Okada 1992 formulation, displacement
// part only). Templated on the scalar so dual numbers can produce gradients.
//
// Local frame: x along strike, z up; the fault plane passes through
// (0, 0, -depth), dips at `dip` from the horizontal and spans
// x in [l1, l2] along strike, eta in [w1, w2] up-dip.

#include "wsm/dual.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace wsm::okada {

struct Source {
    double alpha = 2.0 / 3.0;  // (lambda + mu) / (lambda + 2 mu)
    double depth = 0.0;
    double dip_rad = 0.0;
    double l1 = 0.0, l2 = 0.0;
    double w1 = 0.0, w2 = 0.0;
    double strike_slip = 0.0;
    double dip_slip = 0.0;
    double tensile = 0.0;
};

namespace detail {

using std::atan;
using std::log;
using std::sqrt;

inline constexpr double kEps = 1e-6;

struct Constants {
    double alp1, alp2, alp3, alp4, alp5;
    double sd, cd, sdsd, cdcd, sdcd;
};

inline Constants make_constants(double alpha, double dip_rad) {
    Constants c{};
    c.alp1 = (1.0 - alpha) / 2.0;
    c.alp2 = alpha / 2.0;
    c.alp3 = (1.0 - alpha) / alpha;
    c.alp4 = 1.0 - alpha;
    c.alp5 = alpha;
    c.sd = std::sin(dip_rad);
    c.cd = std::cos(dip_rad);
    if (std::abs(c.cd) < 1e-6) {
        c.cd = 0.0;
        c.sd = c.sd > 0.0 ? 1.0 : -1.0;
    }
    c.sdsd = c.sd * c.sd;
    c.cdcd = c.cd * c.cd;
    c.sdcd = c.sd * c.cd;
    return c;
}

template <class T>
struct Geometry {
    T xi, et, q;
    T xi2, et2, q2, r, r2, r3;
    T y, d, tt, alx, ale, x11, y11, x32, y32;
};

template <class T>
bool make_geometry(T xi, T et, T q, const Constants& c, bool kxi, bool ket, Geometry<T>& g) {
    if (std::abs(value_of(xi)) < kEps) xi = T(0.0) + (xi - T(value_of(xi)));
    if (std::abs(value_of(et)) < kEps) et = T(0.0) + (et - T(value_of(et)));
    if (std::abs(value_of(q)) < kEps) q = T(0.0) + (q - T(value_of(q)));
    g.xi = xi;
    g.et = et;
    g.q = q;
    g.xi2 = xi * xi;
    g.et2 = et * et;
    g.q2 = q * q;
    g.r2 = g.xi2 + g.et2 + g.q2;
    if (value_of(g.r2) == 0.0) return false;
    g.r = sqrt(g.r2);
    g.r3 = g.r * g.r2;
    g.y = et * c.cd + q * c.sd;
    g.d = et * c.sd - q * c.cd;
    if (value_of(q) == 0.0)
        g.tt = T(0.0);
    else
        g.tt = atan(xi * et / (q * g.r));
    if (kxi) {
        g.alx = -log(g.r - xi);
        g.x11 = T(0.0);
        g.x32 = T(0.0);
    } else {
        const T rxi = g.r + xi;
        g.alx = log(rxi);
        g.x11 = 1.0 / (g.r * rxi);
        g.x32 = (g.r + rxi) * g.x11 * g.x11 / g.r;
    }
    if (ket) {
        g.ale = -log(g.r - et);
        g.y11 = T(0.0);
        g.y32 = T(0.0);
    } else {
        const T ret = g.r + et;
        g.ale = log(ret);
        g.y11 = 1.0 / (g.r * ret);
        g.y32 = (g.r + ret) * g.y11 * g.y11 / g.r;
    }
    return true;
}

// Infinite-medium term (part A).
template <class T>
std::array<T, 3> part_a(const Geometry<T>& g, const Constants& c, const Source& s) {
    const T qx = g.q * g.x11;
    const T qy = g.q * g.y11;
    std::array<T, 3> u{};
    const double pi2 = 2.0 * std::numbers::pi;
    if (s.strike_slip != 0.0) {
        const double f = s.strike_slip / pi2;
        u[0] += f * (g.tt / 2.0 + c.alp2 * g.xi * qy);
        u[1] += f * (c.alp2 * g.q / g.r);
        u[2] += f * (c.alp1 * g.ale - c.alp2 * g.q * qy);
    }
    if (s.dip_slip != 0.0) {
        const double f = s.dip_slip / pi2;
        u[0] += f * (c.alp2 * g.q / g.r);
        u[1] += f * (g.tt / 2.0 + c.alp2 * g.et * qx);
        u[2] += f * (c.alp1 * g.alx - c.alp2 * g.q * qx);
    }
    if (s.tensile != 0.0) {
        const double f = s.tensile / pi2;
        u[0] += f * (-c.alp1 * g.ale - c.alp2 * g.q * qy);
        u[1] += f * (-c.alp1 * g.alx - c.alp2 * g.q * qx);
        u[2] += f * (g.tt / 2.0 - c.alp2 * (g.et * qx + g.xi * qy));
    }
    return u;
}

// Surface-deformation-related term (part B).
template <class T>
std::array<T, 3> part_b(const Geometry<T>& g, const Constants& c, const Source& s) {
    const T rd = g.r + g.d;
    T ai3, ai4;
    if (c.cd != 0.0) {
        if (value_of(g.xi) == 0.0) {
            ai4 = T(0.0);
        } else {
            const T x = sqrt(g.xi2 + g.q2);
            ai4 = 1.0 / c.cdcd *
                  (g.xi / rd * c.sdcd +
                   2.0 * atan((g.et * (x + g.q * c.cd) + x * (g.r + x) * c.sd) / (g.xi * (g.r + x) * c.cd)));
        }
        ai3 = (g.y * c.cd / rd - g.ale + c.sd * log(rd)) / c.cdcd;
    } else {
        const T rd2 = rd * rd;
        ai3 = (g.et / rd + g.y * g.q / rd2 - g.ale) / 2.0;
        ai4 = g.xi * g.y / rd2 / 2.0;
    }
    const T ai1 = -g.xi / rd * c.cd - ai4 * c.sd;
    const T ai2 = log(rd) + ai3 * c.sd;
    const T qx = g.q * g.x11;
    const T qy = g.q * g.y11;

    std::array<T, 3> u{};
    const double pi2 = 2.0 * std::numbers::pi;
    if (s.strike_slip != 0.0) {
        const double f = s.strike_slip / pi2;
        u[0] += f * (-g.xi * qy - g.tt - c.alp3 * ai1 * c.sd);
        u[1] += f * (-g.q / g.r + c.alp3 * g.y / rd * c.sd);
        u[2] += f * (g.q * qy - c.alp3 * ai2 * c.sd);
    }
    if (s.dip_slip != 0.0) {
        const double f = s.dip_slip / pi2;
        u[0] += f * (-g.q / g.r + c.alp3 * ai3 * c.sdcd);
        u[1] += f * (-g.et * qx - g.tt - c.alp3 * g.xi / rd * c.sdcd);
        u[2] += f * (g.q * qx + c.alp3 * ai4 * c.sdcd);
    }
    if (s.tensile != 0.0) {
        const double f = s.tensile / pi2;
        u[0] += f * (g.q * qy - c.alp3 * ai3 * c.sdsd);
        u[1] += f * (g.q * qx + c.alp3 * g.xi / rd * c.sdsd);
        u[2] += f * (g.et * qx + g.xi * qy - g.tt - c.alp3 * ai4 * c.sdsd);
    }
    return u;
}

// Depth-dependent term (part C), multiplied by z in the assembly.
template <class T>
std::array<T, 3> part_c(const Geometry<T>& g, const Constants& c, const Source& s, const T& z) {
    const T cc = g.d + z;
    const T h = g.q * c.cd - z;
    const T z32 = c.sd / g.r3 - h * g.y32;
    const T xy = g.xi * g.y11;
    const T qy = g.q * g.y11;

    std::array<T, 3> u{};
    const double pi2 = 2.0 * std::numbers::pi;
    if (s.strike_slip != 0.0) {
        const double f = s.strike_slip / pi2;
        u[0] += f * (c.alp4 * xy * c.cd - c.alp5 * g.xi * g.q * z32);
        u[1] += f * (c.alp4 * (c.cd / g.r + 2.0 * qy * c.sd) - c.alp5 * cc * g.q / g.r3);
        u[2] += f * (c.alp4 * qy * c.cd - c.alp5 * (cc * g.et / g.r3 - z * g.y11 + g.xi2 * z32));
    }
    if (s.dip_slip != 0.0) {
        const double f = s.dip_slip / pi2;
        u[0] += f * (c.alp4 * c.cd / g.r - qy * c.sd - c.alp5 * cc * g.q / g.r3);
        u[1] += f * (c.alp4 * g.y * g.x11 - c.alp5 * cc * g.et * g.q * g.x32);
        u[2] += f * (-g.d * g.x11 - xy * c.sd - c.alp5 * cc * (g.x11 - g.q2 * g.x32));
    }
    if (s.tensile != 0.0) {
        const double f = s.tensile / pi2;
        u[0] += f * (-c.alp4 * (c.sd / g.r + qy * c.cd) - c.alp5 * (z * g.y11 - g.q2 * z32));
        u[1] += f * (c.alp4 * 2.0 * xy * c.sd + g.d * g.x11 - c.alp5 * cc * (g.x11 - g.q2 * g.x32));
        u[2] += f * (c.alp4 * (g.y * g.x11 + xy * c.cd) + c.alp5 * g.q * (cc * g.et * g.x32 + g.xi * z32));
    }
    return u;
}

template <class T>
void singular_flags(const std::array<T, 2>& xi, const std::array<T, 2>& et, const T& q, std::array<bool, 2>& kxi,
                    std::array<bool, 2>& ket) {
    const double q2 = value_of(q) * value_of(q);
    auto rr = [&](const T& a, const T& b) { return std::sqrt(value_of(a) * value_of(a) + value_of(b) * value_of(b) + q2); };
    const double r12 = rr(xi[0], et[1]);
    const double r21 = rr(xi[1], et[0]);
    const double r22 = rr(xi[1], et[1]);
    kxi = {false, false};
    ket = {false, false};
    if (value_of(xi[0]) < 0.0 && r21 + value_of(xi[1]) < kEps) kxi[0] = true;
    if (value_of(xi[0]) < 0.0 && r22 + value_of(xi[1]) < kEps) kxi[1] = true;
    if (value_of(et[0]) < 0.0 && r12 + value_of(et[1]) < kEps) ket[0] = true;
    if (value_of(et[0]) < 0.0 && r22 + value_of(et[1]) < kEps) ket[1] = true;
}

}  // namespace detail

/// Displacement at (x, y, z), z <= 0, in the local frame.
template <class T>
std::array<T, 3> displacement(const Source& s, const T& x, const T& y, const T& z) {
    using namespace detail;
    const Constants c = make_constants(s.alpha, s.dip_rad);
    std::array<T, 3> u{};

    for (int pass = 0; pass < 2; ++pass) {
        const bool image = pass == 1;
        const T d = image ? s.depth - z : s.depth + z;
        const T p = y * c.cd + d * c.sd;
        const T q = y * c.sd - d * c.cd;
        const std::array<T, 2> xi{x - s.l1, x - s.l2};
        const std::array<T, 2> et{p - s.w1, p - s.w2};
        std::array<bool, 2> kxi{}, ket{};
        singular_flags(xi, et, q, kxi, ket);

        for (int k = 0; k < 2; ++k) {
            for (int j = 0; j < 2; ++j) {
                Geometry<T> g;
                if (!make_geometry(xi[j], et[k], q, c, kxi[k], ket[j], g)) continue;
                std::array<T, 3> du;
                const auto ua = part_a(g, c, s);
                if (!image) {
                    du[0] = -ua[0];
                    du[1] = -ua[1] * c.cd + ua[2] * c.sd;
                    du[2] = -ua[1] * c.sd - ua[2] * c.cd;
                } else {
                    const auto ub = part_b(g, c, s);
                    const auto uc = part_c(g, c, s, z);
                    du[0] = ua[0] + ub[0] + z * uc[0];
                    du[1] = (ua[1] + ub[1] + z * uc[1]) * c.cd - (ua[2] + ub[2] + z * uc[2]) * c.sd;
                    du[2] = (ua[1] + ub[1] - z * uc[1]) * c.sd + (ua[2] + ub[2] - z * uc[2]) * c.cd;
                }
                const bool add = (j + k) != 1;
                for (int i = 0; i < 3; ++i) u[i] = add ? u[i] + du[i] : u[i] - du[i];
            }
        }
    }
    return u;
}

}  // namespace wsm::okada

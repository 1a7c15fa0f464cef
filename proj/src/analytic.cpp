#include "wsm/analytic.hpp"

#include <numbers>
#include <stdexcept>

namespace wsm {

namespace {

using std::atan;
using std::log;

constexpr double kOnPlane = 1e-13;

}  // namespace

PlaneStrainDislocation PlaneStrainDislocation::benchmark(double lambda, double mu, double b0) {
    PlaneStrainDislocation m;
    m.lambda = lambda;
    m.mu = mu;
    m.b0 = b0;
    m.origin = {0.0, 0.0};
    m.e_xi = {0.8, 0.6};
    m.e_eta = {-0.6, 0.8};
    return m;
}

template <class T>
std::array<T, 2> PlaneStrainDislocation::frame_displacement(const T& xi, const T& eta) const {
    // Second antiderivative (along xi) of the unit edge-dislocation field,
    // up to polynomials of degree <= 2 in xi, which cancel in the sum.
    const double l = lambda;
    const double m = mu;
    const double scale_xi = 1.0 / (4.0 * std::numbers::pi * (l + 2.0 * m));
    const double scale_eta = 1.0 / (8.0 * std::numbers::pi * (l + 2.0 * m));
    auto g2 = [&](const T& x, const T& y) {
        const T r2 = x * x + y * y;
        const T lr = value_of(r2) > 0.0 ? log(r2) : T(0.0);
        const T at = atan(x / y);
        std::array<T, 2> g;
        g[0] = scale_xi * (((3.0 * l + 4.0 * m) * y * y - (l + 2.0 * m) * x * x) * at + (2.0 * l + 3.0 * m) * x * y * lr);
        g[1] = scale_eta * (4.0 * l * x * y * at - ((2.0 * l + m) * y * y + m * x * x) * lr);
        return g;
    };
    constexpr std::array<double, 4> shift{0.5, 1.0 / 6.0, -1.0 / 6.0, -0.5};
    constexpr std::array<double, 4> coef{12.0, -36.0, 36.0, -12.0};
    std::array<T, 2> u{T(0.0), T(0.0)};
    for (int k = 0; k < 4; ++k) {
        const auto g = g2(xi - shift[k], eta);
        u[0] += coef[k] * g[0];
        u[1] += coef[k] * g[1];
    }
    u[0] = b0 * u[0];
    u[1] = b0 * u[1];
    return u;
}

namespace {

template <class T>
std::array<T, 2> planestrain_global(const PlaneStrainDislocation& model, const std::array<T, 2>& x,
                                    std::optional<Side> side) {
    const T rx = x[0] - model.origin[0];
    const T ry = x[1] - model.origin[1];
    const T xi = rx * model.e_xi[0] + ry * model.e_xi[1];
    T eta = rx * model.e_eta[0] + ry * model.e_eta[1];
    if (std::abs(value_of(eta)) < kOnPlane) {
        const bool on_segment = std::abs(value_of(xi)) <= 0.5;
        if (on_segment && !side) throw std::domain_error("eval_planestrain: point on the dislocation needs a side");
        const double target = (side && *side == Side::Minus) ? -kOnPlane : kOnPlane;
        eta = eta + (target - value_of(eta));
    }
    const auto uf = model.frame_displacement(xi, eta);
    return {uf[0] * model.e_xi[0] + uf[1] * model.e_eta[0], uf[0] * model.e_xi[1] + uf[1] * model.e_eta[1]};
}

}  // namespace

Vec<2> eval_planestrain(const PlaneStrainDislocation& model, const Vec<2>& x, std::optional<Side> side) {
    return planestrain_global<double>(model, x, side);
}

ExactSample<2> eval_planestrain_gradient(const PlaneStrainDislocation& model, const Vec<2>& x,
                                         std::optional<Side> side) {
    using D = Dual<2>;
    const std::array<D, 2> xd{D::variable(x[0], 0), D::variable(x[1], 1)};
    const auto u = planestrain_global<D>(model, xd, side);
    ExactSample<2> s;
    for (int i = 0; i < 2; ++i) {
        s.value[i] = u[i].v;
        for (int j = 0; j < 2; ++j) s.grad[i][j] = u[i].d[j];
    }
    return s;
}

Vec<3> HalfspaceSource::strike_dir() const {
    const double a = strike_deg * std::numbers::pi / 180.0;
    return {std::sin(a), std::cos(a), 0.0};
}

namespace {

Vec<3> left_of(const Vec<3>& strike) { return {-strike[1], strike[0], 0.0}; }

}  // namespace

Vec<3> HalfspaceSource::updip_dir() const {
    const double d = dip_deg * std::numbers::pi / 180.0;
    const auto left = left_of(strike_dir());
    return {std::cos(d) * left[0], std::cos(d) * left[1], std::sin(d)};
}

Vec<3> HalfspaceSource::normal() const {
    const double d = dip_deg * std::numbers::pi / 180.0;
    const auto left = left_of(strike_dir());
    return {std::sin(d) * left[0], std::sin(d) * left[1], -std::cos(d)};
}

Vec<3> HalfspaceSource::slip_vector() const {
    return strike_slip * strike_dir() + dip_slip * updip_dir() + tensile * (-1.0 * normal());
}

okada::Source HalfspaceSource::okada_source() const {
    okada::Source s;
    s.alpha = (lambda + mu) / (lambda + 2.0 * mu);
    s.depth = -reference[2];
    s.dip_rad = dip_deg * std::numbers::pi / 180.0;
    s.l1 = l1;
    s.l2 = l2;
    s.w1 = w1;
    s.w2 = w2;
    // Okada's slip is the motion of the hanging wall relative to the footwall.
    s.strike_slip = strike_slip;
    s.dip_slip = dip_slip;
    s.tensile = tensile;
    return s;
}

namespace {

template <class T>
std::array<T, 3> halfspace_global(const HalfspaceSource& src, std::array<T, 3> x, std::optional<Side> side) {
    if (value_of(x[2]) > 1e-12) throw std::domain_error("eval_halfspace: point above the free surface");
    if (value_of(x[2]) > 0.0) x[2] = x[2] - value_of(x[2]);
    const auto nu = src.normal();
    // distance to the plane and in-plane coordinates relative to the patch
    double dist = 0.0;
    for (int i = 0; i < 3; ++i) dist += (value_of(x[i]) - src.reference[i]) * nu[i];
    // the source routine averages both sides within okada::detail::kEps of the plane
    constexpr double snap = 2.0 * okada::detail::kEps;
    if (std::abs(dist) < snap) {
        const auto sd = src.strike_dir();
        const auto ud = src.updip_dir();
        double s = 0.0, w = 0.0;
        for (int i = 0; i < 3; ++i) {
            s += (value_of(x[i]) - src.reference[i]) * sd[i];
            w += (value_of(x[i]) - src.reference[i]) * ud[i];
        }
        const bool on_patch = s >= src.l1 && s <= src.l2 && w >= src.w1 && w <= src.w2;
        if (on_patch) {
            if (!side && std::abs(dist) < kOnPlane)
                throw std::domain_error("eval_halfspace: point on the dislocation needs a side");
            const Side which = side ? *side : (dist < 0.0 ? Side::Plus : Side::Minus);
            const double target = which == Side::Minus ? snap : -snap;
            for (int i = 0; i < 3; ++i) x[i] = x[i] + (target - dist) * nu[i];
            if (value_of(x[2]) > 0.0) x[2] = x[2] - value_of(x[2]);
        }
    }
    const auto strike = src.strike_dir();
    const auto left = left_of(strike);
    const T rx = x[0] - src.reference[0];
    const T ry = x[1] - src.reference[1];
    const T lx = rx * strike[0] + ry * strike[1];
    const T ly = rx * left[0] + ry * left[1];
    const auto u = okada::displacement<T>(src.okada_source(), lx, ly, x[2]);
    std::array<T, 3> g;
    for (int i = 0; i < 3; ++i) g[i] = u[0] * strike[i] + u[1] * left[i];
    g[2] = g[2] + u[2];
    return g;
}

}  // namespace

Vec<3> eval_halfspace(const HalfspaceSource& src, const Vec<3>& x, std::optional<Side> side) {
    return halfspace_global<double>(src, x, side);
}

ExactSample<3> eval_halfspace_gradient(const HalfspaceSource& src, const Vec<3>& x, std::optional<Side> side) {
    using D = Dual<3>;
    const std::array<D, 3> xd{D::variable(x[0], 0), D::variable(x[1], 1), D::variable(x[2], 2)};
    const auto u = halfspace_global<D>(src, xd, side);
    ExactSample<3> s;
    for (int i = 0; i < 3; ++i) {
        s.value[i] = u[i].v;
        for (int j = 0; j < 3; ++j) s.grad[i][j] = u[i].d[j];
    }
    return s;
}

}  // namespace wsm

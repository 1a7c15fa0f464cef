#pragma once

#include "wsm/dual.hpp"
#include "wsm/okada.hpp"
#include "wsm/types.hpp"

#include <optional>

namespace wsm {

/// Displacement and its gradient (grad[i][j] = d u_i / d x_j).
template <int Dim>
struct ExactSample {
    Vec<Dim> value{};
    Mat<Dim> grad{};
};

/// Which side of a fault to evaluate on: Plus is the side the fault normal
/// points away from.
enum class Side { Plus, Minus };

/// Plane-strain field of a straight dislocation of unit length carrying the
/// piecewise quadratic tangential slip of `smooth_slip_2d`, in an infinite
/// isotropic medium.
///
/// Built by superposing edge dislocations: with G the classical edge field
/// and G2 its second antiderivative along the slip line, the slip's second
/// derivative is piecewise constant and
///   u = b0 [12 G2(xi - 1/2) - 36 G2(xi - 1/6) + 36 G2(xi + 1/6) - 12 G2(xi + 1/2)].
/// With U = 4 pi G2 the same field reads
///   u = b0 / (2 pi) [6 U(xi - 1/2) - 18 U(xi - 1/6) + 18 U(xi + 1/6) - 6 U(xi + 1/2)].
struct PlaneStrainDislocation {
    double lambda = 1.0;
    double mu = 1.0;
    double b0 = 0.1;
    Vec<2> origin{0.0, 0.0};
    Vec<2> e_xi{0.8, 0.6};   // along the dislocation
    Vec<2> e_eta{-0.6, 0.8};  // plus side is eta > 0

    /// Unit dislocation through the origin at arctan(3/4) to the x axis.
    static PlaneStrainDislocation benchmark(double lambda, double mu, double b0);

    /// Fault-frame displacement (u_xi, u_eta); eta must be nonzero.
    template <class T>
    std::array<T, 2> frame_displacement(const T& xi, const T& eta) const;
};

/// Throws std::domain_error on the dislocation segment unless a side is given.
Vec<2> eval_planestrain(const PlaneStrainDislocation& model, const Vec<2>& x, std::optional<Side> side = std::nullopt);
ExactSample<2> eval_planestrain_gradient(const PlaneStrainDislocation& model, const Vec<2>& x,
                                         std::optional<Side> side = std::nullopt);

/// Uniform-slip rectangular source in the half-space z <= 0 with a
/// traction-free surface z = 0.
///
/// Geometry in global coordinates: strike measured clockwise from +y, the
/// plane dips to the right of strike, `reference` is a point of the plane and
/// the patch spans [l1, l2] along strike and [w1, w2] up-dip from it.
/// Slip components are the jump u+ - u- along the strike and up-dip unit
/// vectors (and the normal, for opening), with the plus side the hanging
/// wall, i.e. the side above the plane.
struct HalfspaceSource {
    double lambda = 1.0;
    double mu = 1.0;
    Vec<3> reference{0.0, 0.0, -0.5};
    double strike_deg = 15.0;
    double dip_deg = 30.0;
    double l1 = -0.5, l2 = 0.5;
    double w1 = -0.5, w2 = 0.5;
    double strike_slip = 0.2;
    double dip_slip = 0.1;
    double tensile = 0.0;

    Vec<3> strike_dir() const;
    Vec<3> updip_dir() const;
    /// Unit normal pointing from the hanging wall into the footwall.
    Vec<3> normal() const;
    /// Jump u+ - u- in global coordinates.
    Vec<3> slip_vector() const;
    okada::Source okada_source() const;
};

/// Throws std::domain_error above the surface and on the patch without a side.
Vec<3> eval_halfspace(const HalfspaceSource& src, const Vec<3>& x, std::optional<Side> side = std::nullopt);
ExactSample<3> eval_halfspace_gradient(const HalfspaceSource& src, const Vec<3>& x,
                                       std::optional<Side> side = std::nullopt);

}  // namespace wsm

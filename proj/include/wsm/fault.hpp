#pragma once

#include "wsm/elasticity.hpp"
#include "wsm/linsys.hpp"
#include "wsm/mesh.hpp"

#include <functional>
#include <vector>

namespace wsm {

template <int Dim>
using PlaneCoords = std::array<double, Dim - 1>;

/// Planar fault patch with a prescribed slip distribution.
///
/// The slip b is the displacement jump u+ - u- across the fault, where the
/// plus side is the half-space the normal points away from (the normal is
/// directed into the minus side). The dislocation is the patch
/// bounds[0] x ... in the in-plane coordinates measured from `origin` along
/// `axes`; the slip function must vanish outside it.
template <int Dim>
struct FaultModel {
    Vec<Dim> origin{};
    std::array<Vec<Dim>, Dim - 1> axes{};
    Vec<Dim> normal{};
    std::array<std::array<double, 2>, Dim - 1> bounds{};
    std::function<Vec<Dim>(const PlaneCoords<Dim>&)> slip;
    /// In-plane coordinates (per axis) where the slip is not smooth; fault
    /// quadrature splits there. Only honoured along axis 0 in 2D.
    std::array<std::vector<double>, Dim - 1> slip_breaks{};

    /// Throws std::invalid_argument unless the frame is orthonormal and the
    /// patch bounds are non-empty.
    void validate() const;

    PlaneCoords<Dim> plane_coords(const Vec<Dim>& x) const;
    Vec<Dim> point(const PlaneCoords<Dim>& s) const;
    /// Positive on the minus side.
    double signed_distance(const Vec<Dim>& x) const { return dot(x - origin, normal); }
    Vec<Dim> slip_at(const Vec<Dim>& x) const { return slip(plane_coords(x)); }
    /// Euclidean distance from x to the closed dislocation patch.
    double distance_to_dislocation(const Vec<Dim>& x) const;
    /// Length (2D) or area (3D) of the patch.
    double patch_measure() const;
    /// Patch corners: 2 end points in 2D, 4 counter-clockwise corners in 3D.
    std::vector<Vec<Dim>> patch_vertices() const;
};

enum class SegmentKind { Interior, Face };

/// Piece of the dislocation inside one element (Interior) or on a face shared
/// by two elements (Face), with a quadrature rule in global coordinates.
template <int Dim>
struct FaultSegment {
    std::vector<Vec<Dim>> vertices;
    SegmentKind kind = SegmentKind::Interior;
    int elem_plus = -1;
    int elem_minus = -1;
    double measure = 0.0;
    std::vector<Vec<Dim>> points;
    std::vector<double> weights;
    std::uint64_t mesh_id = 0;
};

inline constexpr int kDefaultFaultQuadrature = 4;

/// Clips the dislocation against every element box. `quad_order` is the
/// number of Gauss points per segment (2D) or per collapsed-triangle
/// direction (3D, exact to degree 2 * quad_order - 1).
template <int Dim>
std::vector<FaultSegment<Dim>> segment_fault(const StructuredMesh<Dim>& mesh, const FaultModel<Dim>& fault,
                                             int quad_order = kDefaultFaultQuadrature);

/// Load vector of -integral_fault b . <sigma_nu(phi_i)>: one-sided traction on
/// interior segments, the mean of both sides on face segments. Throws
/// std::invalid_argument for segments built on a different mesh.
template <int Dim>
std::vector<double> wsm_rhs(const FeSystem<Dim>& system, const FaultModel<Dim>& fault,
                            const std::vector<FaultSegment<Dim>>& segments, const IsotropicElasticity& mat);

/// (sum_s h_s^{-1} ||b||_s^2)^{1/2} with h_s the harmonic combination
/// 1/h_s = 1/diam(k+) + 1/diam(k-).
template <int Dim>
double fault_quality_norm(const StructuredMesh<Dim>& mesh, const std::vector<FaultSegment<Dim>>& segments,
                          const FaultModel<Dim>& fault);

/// Piecewise quadratic, C1 slip magnitude of the 2D benchmark, supported on
/// |xi| < 1/2 and peaking at b0 for xi = 0.
double smooth_slip_2d(double xi, double b0);

}  // namespace wsm

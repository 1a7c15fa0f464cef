#pragma once

#include "wsm/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace wsm {

enum class BoundaryTag : std::uint8_t { Dirichlet, FreeSurface };

/// One side of an axis-aligned box: the face normal to `axis` at the low or high end.
struct BoxSide {
    int axis = 0;
    bool high = true;
};

struct BoundaryFacet {
    int element = 0;
    int local_face = 0;  // 2 * axis + (high ? 1 : 0)
    BoundaryTag tag = BoundaryTag::Dirichlet;
};

template <int Dim>
struct PointLocation {
    int element = 0;
    Vec<Dim> local{};  // reference coordinates in [-1, 1]^Dim
};

/// Tensor-product mesh of an axis-aligned box with identical box elements.
///
/// Nodes and elements are numbered lexicographically with the x index running
/// fastest. Element-local node order follows the same rule, so in 2D the
/// corners are (lo,lo), (hi,lo), (lo,hi), (hi,hi).
template <int Dim>
class StructuredMesh {
public:
    static constexpr int kNodesPerElement = ipow(2, Dim);

    StructuredMesh(const Vec<Dim>& lo, const Vec<Dim>& hi, const std::array<int, Dim>& counts,
                   std::optional<BoxSide> free_surface = std::nullopt);

    const Vec<Dim>& lo() const { return lo_; }
    const Vec<Dim>& hi() const { return hi_; }
    const std::array<int, Dim>& counts() const { return counts_; }
    const std::optional<BoxSide>& free_surface() const { return free_surface_; }

    /// Edge lengths of every element.
    Vec<Dim> element_size() const;

    /// Process-unique identity used to detect data built for another mesh.
    std::uint64_t id() const { return id_; }

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_elements() const { return static_cast<int>(elements_.size()); }
    const std::vector<Vec<Dim>>& nodes() const { return nodes_; }
    const std::vector<std::array<int, kNodesPerElement>>& elements() const { return elements_; }
    const std::vector<BoundaryFacet>& boundary_facets() const { return facets_; }

    std::array<int, Dim> element_index(int element) const;
    int element_at(const std::array<int, Dim>& index) const;

    /// Element across `local_face`, or -1 at the box boundary.
    int neighbor(int element, int local_face) const;

    Vec<Dim> element_lo(int element) const;
    Vec<Dim> element_hi(int element) const;

    /// Grid coordinate lo + i * (hi - lo) / n along one axis.
    double grid_coordinate(int axis, int i, int n) const {
        return lo_[axis] + i * (hi_[axis] - lo_[axis]) / n;
    }

    Vec<Dim> to_local(int element, const Vec<Dim>& x) const;
    Vec<Dim> to_global(int element, const Vec<Dim>& local) const;

    /// Element whose closed box contains x; ties go to the lowest element
    /// index. Throws std::out_of_range outside the box.
    PointLocation<Dim> element_containing(const Vec<Dim>& x) const;

    /// Simple text dump: node count, coordinates, element count, connectivity.
    void dump(std::ostream& os) const;

private:
    Vec<Dim> lo_;
    Vec<Dim> hi_;
    std::array<int, Dim> counts_;
    std::optional<BoxSide> free_surface_;
    std::uint64_t id_;
    std::vector<Vec<Dim>> nodes_;
    std::vector<std::array<int, kNodesPerElement>> elements_;
    std::vector<BoundaryFacet> facets_;
};

template <int Dim>
StructuredMesh<Dim> build_box_mesh(const Vec<Dim>& lo, const Vec<Dim>& hi, const std::array<int, Dim>& counts,
                                   std::optional<BoxSide> free_surface = std::nullopt) {
    return StructuredMesh<Dim>(lo, hi, counts, free_surface);
}

/// Maximum element diameter (box diagonal).
template <int Dim>
double mesh_size(const StructuredMesh<Dim>& mesh);

/// Meshes of one box with element counts doubling per level.
template <int Dim>
struct MeshSequence {
    std::vector<StructuredMesh<Dim>> meshes;
};

template <int Dim>
MeshSequence<Dim> build_mesh_sequence(const Vec<Dim>& lo, const Vec<Dim>& hi, const std::array<int, Dim>& coarsest,
                                      int levels, std::optional<BoxSide> free_surface = std::nullopt);

}  // namespace wsm

#include "wsm/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <stdexcept>
#include <string>

namespace wsm {

namespace {

std::uint64_t next_mesh_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

template <int Dim>
StructuredMesh<Dim>::StructuredMesh(const Vec<Dim>& lo, const Vec<Dim>& hi, const std::array<int, Dim>& counts,
                                    std::optional<BoxSide> free_surface)
    : lo_(lo), hi_(hi), counts_(counts), free_surface_(free_surface), id_(next_mesh_id()) {
    for (int d = 0; d < Dim; ++d) {
        if (!(lo[d] < hi[d])) throw std::invalid_argument("mesh: degenerate box along axis " + std::to_string(d));
        if (counts[d] < 1) throw std::invalid_argument("mesh: element count must be positive");
    }
    if (free_surface && (free_surface->axis < 0 || free_surface->axis >= Dim))
        throw std::invalid_argument("mesh: free-surface axis out of range");

    std::array<int, Dim> npts{};
    int total_nodes = 1;
    int total_elems = 1;
    for (int d = 0; d < Dim; ++d) {
        npts[d] = counts[d] + 1;
        total_nodes *= npts[d];
        total_elems *= counts[d];
    }

    nodes_.resize(total_nodes);
    for (int n = 0; n < total_nodes; ++n) {
        int rest = n;
        for (int d = 0; d < Dim; ++d) {
            const int i = rest % npts[d];
            rest /= npts[d];
            nodes_[n][d] = grid_coordinate(d, i, counts[d]);
        }
    }

    elements_.resize(total_elems);
    for (int e = 0; e < total_elems; ++e) {
        const auto idx = element_index(e);
        for (int c = 0; c < kNodesPerElement; ++c) {
            int node = 0;
            int stride = 1;
            for (int d = 0; d < Dim; ++d) {
                node += (idx[d] + ((c >> d) & 1)) * stride;
                stride *= npts[d];
            }
            elements_[e][c] = node;
        }
    }

    for (int axis = 0; axis < Dim; ++axis) {
        for (int side = 0; side < 2; ++side) {
            const bool high = side == 1;
            const BoundaryTag tag = (free_surface && free_surface->axis == axis && free_surface->high == high)
                                        ? BoundaryTag::FreeSurface
                                        : BoundaryTag::Dirichlet;
            for (int e = 0; e < total_elems; ++e) {
                const auto idx = element_index(e);
                if (idx[axis] == (high ? counts[axis] - 1 : 0)) facets_.push_back({e, 2 * axis + side, tag});
            }
        }
    }
}

template <int Dim>
Vec<Dim> StructuredMesh<Dim>::element_size() const {
    Vec<Dim> h{};
    for (int d = 0; d < Dim; ++d) h[d] = (hi_[d] - lo_[d]) / counts_[d];
    return h;
}

template <int Dim>
std::array<int, Dim> StructuredMesh<Dim>::element_index(int element) const {
    std::array<int, Dim> idx{};
    for (int d = 0; d < Dim; ++d) {
        idx[d] = element % counts_[d];
        element /= counts_[d];
    }
    return idx;
}

template <int Dim>
int StructuredMesh<Dim>::element_at(const std::array<int, Dim>& index) const {
    int e = 0;
    int stride = 1;
    for (int d = 0; d < Dim; ++d) {
        e += index[d] * stride;
        stride *= counts_[d];
    }
    return e;
}

template <int Dim>
int StructuredMesh<Dim>::neighbor(int element, int local_face) const {
    auto idx = element_index(element);
    const int axis = local_face / 2;
    idx[axis] += (local_face % 2 == 1) ? 1 : -1;
    if (idx[axis] < 0 || idx[axis] >= counts_[axis]) return -1;
    return element_at(idx);
}

template <int Dim>
Vec<Dim> StructuredMesh<Dim>::element_lo(int element) const {
    const auto idx = element_index(element);
    Vec<Dim> x{};
    for (int d = 0; d < Dim; ++d) x[d] = grid_coordinate(d, idx[d], counts_[d]);
    return x;
}

template <int Dim>
Vec<Dim> StructuredMesh<Dim>::element_hi(int element) const {
    const auto idx = element_index(element);
    Vec<Dim> x{};
    for (int d = 0; d < Dim; ++d) x[d] = grid_coordinate(d, idx[d] + 1, counts_[d]);
    return x;
}

template <int Dim>
Vec<Dim> StructuredMesh<Dim>::to_local(int element, const Vec<Dim>& x) const {
    const Vec<Dim> elo = element_lo(element);
    const Vec<Dim> h = element_size();
    Vec<Dim> xi{};
    for (int d = 0; d < Dim; ++d) xi[d] = std::clamp(2.0 * (x[d] - elo[d]) / h[d] - 1.0, -1.0, 1.0);
    return xi;
}

template <int Dim>
Vec<Dim> StructuredMesh<Dim>::to_global(int element, const Vec<Dim>& local) const {
    const Vec<Dim> elo = element_lo(element);
    const Vec<Dim> h = element_size();
    Vec<Dim> x{};
    for (int d = 0; d < Dim; ++d) x[d] = elo[d] + 0.5 * (local[d] + 1.0) * h[d];
    return x;
}

template <int Dim>
PointLocation<Dim> StructuredMesh<Dim>::element_containing(const Vec<Dim>& x) const {
    const Vec<Dim> h = element_size();
    const double snap = 1e-12 * mesh_size(*this);
    std::array<int, Dim> idx{};
    for (int d = 0; d < Dim; ++d) {
        if (x[d] < lo_[d] - snap || x[d] > hi_[d] + snap)
            throw std::out_of_range("element_containing: point outside the mesh box");
        const double t = (x[d] - lo_[d]) / h[d];
        const int i = static_cast<int>(std::ceil(t - snap / h[d])) - 1;
        idx[d] = std::clamp(i, 0, counts_[d] - 1);
    }
    const int e = element_at(idx);
    return {e, to_local(e, x)};
}

template <int Dim>
void StructuredMesh<Dim>::dump(std::ostream& os) const {
    os << num_nodes() << '\n';
    for (const auto& x : nodes_) {
        for (int d = 0; d < Dim; ++d) os << (d ? " " : "") << x[d];
        os << '\n';
    }
    os << num_elements() << '\n';
    for (const auto& el : elements_) {
        for (int c = 0; c < kNodesPerElement; ++c) os << (c ? " " : "") << el[c];
        os << '\n';
    }
}

template <int Dim>
double mesh_size(const StructuredMesh<Dim>& mesh) {
    return norm(mesh.element_size());
}

template <int Dim>
MeshSequence<Dim> build_mesh_sequence(const Vec<Dim>& lo, const Vec<Dim>& hi, const std::array<int, Dim>& coarsest,
                                      int levels, std::optional<BoxSide> free_surface) {
    MeshSequence<Dim> seq;
    std::array<int, Dim> counts = coarsest;
    for (int k = 0; k < levels; ++k) {
        seq.meshes.emplace_back(lo, hi, counts, free_surface);
        for (auto& c : counts) c *= 2;
    }
    return seq;
}

template class StructuredMesh<2>;
template class StructuredMesh<3>;
template double mesh_size<2>(const StructuredMesh<2>&);
template double mesh_size<3>(const StructuredMesh<3>&);
template MeshSequence<2> build_mesh_sequence<2>(const Vec<2>&, const Vec<2>&, const std::array<int, 2>&, int,
                                                std::optional<BoxSide>);
template MeshSequence<3> build_mesh_sequence<3>(const Vec<3>&, const Vec<3>&, const std::array<int, 3>&, int,
                                                std::optional<BoxSide>);

}  // namespace wsm

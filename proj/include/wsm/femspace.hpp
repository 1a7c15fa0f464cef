#pragma once

#include "wsm/mesh.hpp"

#include <functional>
#include <memory>
#include <type_traits>
#include <span>
#include <vector>

namespace wsm {

/// Tensor-product Gauss-Legendre rule on the reference box [-1, 1]^Dim.
template <int Dim>
struct QuadratureRule {
    std::vector<Vec<Dim>> points;
    std::vector<double> weights;
    int degree = 0;  // exact for polynomials of this degree in each variable
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights);

/// Throws std::invalid_argument unless 1 <= points_per_axis <= 6.
template <int Dim>
QuadratureRule<Dim> gauss_rule(int points_per_axis);

/// Values and reference-coordinate gradients of the Q_p Lagrange basis.
template <int Dim>
struct ShapeValues {
    std::vector<double> values;
    std::vector<Vec<Dim>> gradients;
};

/// Lagrange basis of order 1 or 2 on [-1, 1]^Dim. Local nodes sit at
/// -1, (0,) 1 per axis and are numbered lexicographically, x fastest.
template <int Dim>
ShapeValues<Dim> shape_eval(int order, const Vec<Dim>& local);

/// Continuous vector-valued Q_p space on a structured mesh.
///
/// Scalar nodes form the refined grid (p * counts + 1 points per axis) and
/// vector DOF `node * Dim + component` holds one displacement component.
template <int Dim>
class FeSpace {
public:
    FeSpace(std::shared_ptr<const StructuredMesh<Dim>> mesh, int order);

    const StructuredMesh<Dim>& mesh() const { return *mesh_; }
    const std::shared_ptr<const StructuredMesh<Dim>>& mesh_ptr() const { return mesh_; }
    int order() const { return order_; }

    int nodes_per_element() const { return nodes_per_element_; }
    int num_nodes() const { return static_cast<int>(dof_coords_.size()); }
    int num_dofs() const { return num_nodes() * Dim; }

    const std::vector<Vec<Dim>>& dof_coords() const { return dof_coords_; }
    std::span<const int> element_nodes(int element) const {
        return {elem_nodes_.data() + static_cast<std::size_t>(element) * nodes_per_element_,
                static_cast<std::size_t>(nodes_per_element_)};
    }
    const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }

    /// u_h and its global gradient (grad[i][j] = d u_i / d x_j) inside an element.
    void evaluate(std::span<const double> coeffs, int element, const Vec<Dim>& local, Vec<Dim>& value,
                  Mat<Dim>& grad) const;

    /// u_h at an arbitrary point of the box.
    Vec<Dim> evaluate_at(std::span<const double> coeffs, const Vec<Dim>& x) const;

private:
    std::shared_ptr<const StructuredMesh<Dim>> mesh_;
    int order_;
    int nodes_per_element_;
    std::vector<Vec<Dim>> dof_coords_;
    std::vector<int> elem_nodes_;
    std::vector<int> dirichlet_dofs_;
};

template <int Dim>
using VectorField = std::function<Vec<Dim>(const Vec<Dim>&)>;

/// Nodal interpolant of f.
template <int Dim>
std::vector<double> interpolate(const FeSpace<Dim>& space, const std::type_identity_t<VectorField<Dim>>& f);

/// Nodal interpolant of f on the Dirichlet DOFs only; every other entry is zero.
template <int Dim>
std::vector<double> interpolate_dirichlet(const FeSpace<Dim>& space, const std::type_identity_t<VectorField<Dim>>& f);

}  // namespace wsm

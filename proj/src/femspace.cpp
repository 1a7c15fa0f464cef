#include "wsm/femspace.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace wsm {

void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights) {
    points.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged root
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        points[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // symmetric cleanup
    for (int i = 0; i < n / 2; ++i) {
        const double a = 0.5 * (points[n - 1 - i] - points[i]);
        points[i] = -a;
        points[n - 1 - i] = a;
        const double w = 0.5 * (weights[i] + weights[n - 1 - i]);
        weights[i] = weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) points[n / 2] = 0.0;
}

template <int Dim>
QuadratureRule<Dim> gauss_rule(int points_per_axis) {
    if (points_per_axis < 1 || points_per_axis > 6)
        throw std::invalid_argument("gauss_rule: points per axis must be in [1, 6]");
    std::vector<double> x, w;
    gauss_legendre(points_per_axis, x, w);
    QuadratureRule<Dim> rule;
    rule.degree = 2 * points_per_axis - 1;
    const int total = ipow(points_per_axis, Dim);
    for (int q = 0; q < total; ++q) {
        Vec<Dim> pt{};
        double wt = 1.0;
        int rest = q;
        for (int d = 0; d < Dim; ++d) {
            const int i = rest % points_per_axis;
            rest /= points_per_axis;
            pt[d] = x[i];
            wt *= w[i];
        }
        rule.points.push_back(pt);
        rule.weights.push_back(wt);
    }
    return rule;
}

namespace {

void lagrange_1d(int order, double t, double* val, double* der) {
    if (order == 1) {
        val[0] = 0.5 * (1.0 - t);
        val[1] = 0.5 * (1.0 + t);
        der[0] = -0.5;
        der[1] = 0.5;
    } else {
        val[0] = 0.5 * t * (t - 1.0);
        val[1] = 1.0 - t * t;
        val[2] = 0.5 * t * (t + 1.0);
        der[0] = t - 0.5;
        der[1] = -2.0 * t;
        der[2] = t + 0.5;
    }
}

}  // namespace

template <int Dim>
ShapeValues<Dim> shape_eval(int order, const Vec<Dim>& local) {
    if (order != 1 && order != 2) throw std::invalid_argument("shape_eval: only orders 1 and 2 are supported");
    const int n1 = order + 1;
    double val[Dim][3];
    double der[Dim][3];
    for (int d = 0; d < Dim; ++d) lagrange_1d(order, local[d], val[d], der[d]);

    const int total = ipow(n1, Dim);
    ShapeValues<Dim> out;
    out.values.resize(total);
    out.gradients.resize(total);
    for (int a = 0; a < total; ++a) {
        int idx[Dim];
        int rest = a;
        for (int d = 0; d < Dim; ++d) {
            idx[d] = rest % n1;
            rest /= n1;
        }
        double v = 1.0;
        for (int d = 0; d < Dim; ++d) v *= val[d][idx[d]];
        out.values[a] = v;
        for (int g = 0; g < Dim; ++g) {
            double dg = 1.0;
            for (int d = 0; d < Dim; ++d) dg *= (d == g) ? der[d][idx[d]] : val[d][idx[d]];
            out.gradients[a][g] = dg;
        }
    }
    return out;
}

template <int Dim>
FeSpace<Dim>::FeSpace(std::shared_ptr<const StructuredMesh<Dim>> mesh, int order)
    : mesh_(std::move(mesh)), order_(order), nodes_per_element_(ipow(order + 1, Dim)) {
    if (!mesh_) throw std::invalid_argument("FeSpace: null mesh");
    if (order != 1 && order != 2) throw std::invalid_argument("FeSpace: only orders 1 and 2 are supported");
    const auto& counts = mesh_->counts();

    std::array<int, Dim> npts{};
    int total = 1;
    for (int d = 0; d < Dim; ++d) {
        npts[d] = order * counts[d] + 1;
        total *= npts[d];
    }
    dof_coords_.resize(total);
    for (int n = 0; n < total; ++n) {
        int rest = n;
        for (int d = 0; d < Dim; ++d) {
            const int i = rest % npts[d];
            rest /= npts[d];
            dof_coords_[n][d] = mesh_->grid_coordinate(d, i, order * counts[d]);
        }
    }

    const int ne = mesh_->num_elements();
    elem_nodes_.resize(static_cast<std::size_t>(ne) * nodes_per_element_);
    for (int e = 0; e < ne; ++e) {
        const auto eidx = mesh_->element_index(e);
        for (int a = 0; a < nodes_per_element_; ++a) {
            int rest = a;
            int node = 0;
            int stride = 1;
            for (int d = 0; d < Dim; ++d) {
                const int i = rest % (order + 1);
                rest /= order + 1;
                node += (order * eidx[d] + i) * stride;
                stride *= npts[d];
            }
            elem_nodes_[static_cast<std::size_t>(e) * nodes_per_element_ + a] = node;
        }
    }

    std::vector<char> on_dirichlet(total, 0);
    for (const auto& facet : mesh_->boundary_facets()) {
        if (facet.tag != BoundaryTag::Dirichlet) continue;
        const int axis = facet.local_face / 2;
        const int want = (facet.local_face % 2 == 1) ? order : 0;
        const auto nodes = element_nodes(facet.element);
        for (int a = 0; a < nodes_per_element_; ++a) {
            int rest = a;
            int i_axis = 0;
            for (int d = 0; d <= axis; ++d) {
                i_axis = rest % (order + 1);
                rest /= order + 1;
            }
            if (i_axis == want) on_dirichlet[nodes[a]] = 1;
        }
    }
    for (int n = 0; n < total; ++n)
        if (on_dirichlet[n])
            for (int c = 0; c < Dim; ++c) dirichlet_dofs_.push_back(n * Dim + c);
}

template <int Dim>
void FeSpace<Dim>::evaluate(std::span<const double> coeffs, int element, const Vec<Dim>& local, Vec<Dim>& value,
                            Mat<Dim>& grad) const {
    const auto sv = shape_eval<Dim>(order_, local);
    const auto h = mesh_->element_size();
    const auto nodes = element_nodes(element);
    value = {};
    grad = {};
    for (int a = 0; a < nodes_per_element_; ++a) {
        const std::size_t base = static_cast<std::size_t>(nodes[a]) * Dim;
        for (int i = 0; i < Dim; ++i) {
            const double c = coeffs[base + i];
            value[i] += c * sv.values[a];
            for (int j = 0; j < Dim; ++j) grad[i][j] += c * sv.gradients[a][j] * 2.0 / h[j];
        }
    }
}

template <int Dim>
Vec<Dim> FeSpace<Dim>::evaluate_at(std::span<const double> coeffs, const Vec<Dim>& x) const {
    const auto loc = mesh_->element_containing(x);
    Vec<Dim> value;
    Mat<Dim> grad;
    evaluate(coeffs, loc.element, loc.local, value, grad);
    return value;
}

template <int Dim>
std::vector<double> interpolate(const FeSpace<Dim>& space, const std::type_identity_t<VectorField<Dim>>& f) {
    std::vector<double> coeffs(space.num_dofs(), 0.0);
    const auto& xs = space.dof_coords();
    for (std::size_t n = 0; n < xs.size(); ++n) {
        const auto v = f(xs[n]);
        for (int c = 0; c < Dim; ++c) coeffs[n * Dim + c] = v[c];
    }
    return coeffs;
}

template <int Dim>
std::vector<double> interpolate_dirichlet(const FeSpace<Dim>& space, const std::type_identity_t<VectorField<Dim>>& f) {
    std::vector<double> coeffs(space.num_dofs(), 0.0);
    const auto& xs = space.dof_coords();
    const auto& dofs = space.dirichlet_dofs();
    for (std::size_t k = 0; k < dofs.size(); k += Dim) {
        const int node = dofs[k] / Dim;
        const auto v = f(xs[node]);
        for (int c = 0; c < Dim; ++c) coeffs[static_cast<std::size_t>(node) * Dim + c] = v[c];
    }
    return coeffs;
}

template QuadratureRule<2> gauss_rule<2>(int);
template QuadratureRule<3> gauss_rule<3>(int);
template QuadratureRule<1> gauss_rule<1>(int);
template ShapeValues<1> shape_eval<1>(int, const Vec<1>&);
template ShapeValues<2> shape_eval<2>(int, const Vec<2>&);
template ShapeValues<3> shape_eval<3>(int, const Vec<3>&);
template class FeSpace<2>;
template class FeSpace<3>;
template std::vector<double> interpolate<2>(const FeSpace<2>&, const VectorField<2>&);
template std::vector<double> interpolate<3>(const FeSpace<3>&, const VectorField<3>&);
template std::vector<double> interpolate_dirichlet<2>(const FeSpace<2>&, const VectorField<2>&);
template std::vector<double> interpolate_dirichlet<3>(const FeSpace<3>&, const VectorField<3>&);

}  // namespace wsm

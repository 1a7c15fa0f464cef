#pragma once

#include "wsm/types.hpp"

#include <type_traits>
#include <utility>

namespace wsm {

/// Homogeneous isotropic linear-elastic material.
///
/// In two dimensions the material is read in plane strain: the in-plane stress
/// is lambda * tr(e) * I + 2 * mu * e with the trace taken over the two in-plane
/// components, which is the 3D Hooke law restricted to e_zz = e_xz = e_yz = 0.
struct IsotropicElasticity {
    double lambda = 1.0;
    double mu = 1.0;
    int dim = 2;

    /// Throws std::invalid_argument unless mu > 0 and lambda + 2 mu / dim > 0.
    static IsotropicElasticity make(double lambda, double mu, int dim);
};

/// Symmetric second-order tensor, stored as the upper triangle.
template <int Dim>
class SymTensor {
public:
    static constexpr int kSize = Dim * (Dim + 1) / 2;

    SymTensor() = default;

    static SymTensor identity() {
        SymTensor t;
        for (int i = 0; i < Dim; ++i) t(i, i) = 1.0;
        return t;
    }

    /// Symmetric part of an arbitrary matrix.
    static SymTensor symmetric_part(const Mat<Dim>& m) {
        SymTensor t;
        for (int i = 0; i < Dim; ++i)
            for (int j = i; j < Dim; ++j) t(i, j) = 0.5 * (m[i][j] + m[j][i]);
        return t;
    }

    double& operator()(int i, int j) { return data_[index(i, j)]; }
    double operator()(int i, int j) const { return data_[index(i, j)]; }

    double trace() const {
        double s = 0.0;
        for (int i = 0; i < Dim; ++i) s += (*this)(i, i);
        return s;
    }

    /// Full contraction e:f.
    double contract(const SymTensor& f) const {
        double s = 0.0;
        for (int i = 0; i < Dim; ++i)
            for (int j = 0; j < Dim; ++j) s += (*this)(i, j) * f(i, j);
        return s;
    }

    Vec<Dim> apply(const Vec<Dim>& n) const {
        Vec<Dim> r{};
        for (int i = 0; i < Dim; ++i)
            for (int j = 0; j < Dim; ++j) r[i] += (*this)(i, j) * n[j];
        return r;
    }

    bool operator==(const SymTensor&) const = default;

private:
    static constexpr int index(int i, int j) {
        if (i > j) std::swap(i, j);
        return i * Dim - i * (i - 1) / 2 + (j - i);
    }

    std::array<double, kSize> data_{};
};

/// Small-strain tensor of a displacement gradient, grad_u[i][j] = d u_i / d x_j.
template <int Dim>
SymTensor<Dim> strain(const Mat<Dim>& grad_u) {
    return SymTensor<Dim>::symmetric_part(grad_u);
}

template <int Dim>
SymTensor<Dim> stress(const SymTensor<Dim>& e, const IsotropicElasticity& mat) {
    SymTensor<Dim> s;
    const double vol = mat.lambda * e.trace();
    for (int i = 0; i < Dim; ++i)
        for (int j = i; j < Dim; ++j) s(i, j) = 2.0 * mat.mu * e(i, j) + (i == j ? vol : 0.0);
    return s;
}

/// Traction sigma(e) . n on a plane with unit normal n. Rejects |n| != 1.
template <int Dim>
Vec<Dim> traction(const SymTensor<Dim>& e, const IsotropicElasticity& mat, const std::type_identity_t<Vec<Dim>>& n);

/// Extremal eigenvalues (c_lower, c_upper) of the Hooke map on symmetric
/// tensors: 2 mu on the deviatoric part and 2 mu + dim * lambda on the
/// volumetric one. Ordered so that c_lower <= c_upper.
std::pair<double, double> positivity_constants(const IsotropicElasticity& mat);

}  // namespace wsm

#include "wsm/elasticity.hpp"

#include <algorithm>
#include <stdexcept>

namespace wsm {

IsotropicElasticity IsotropicElasticity::make(double lambda, double mu, int dim) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("elasticity: dim must be 2 or 3");
    if (!(mu > 0.0)) throw std::invalid_argument("elasticity: shear modulus must be positive");
    if (!(lambda + 2.0 * mu / dim > 0.0))
        throw std::invalid_argument("elasticity: bulk modulus must be positive");
    return IsotropicElasticity{lambda, mu, dim};
}

template <int Dim>
Vec<Dim> traction(const SymTensor<Dim>& e, const IsotropicElasticity& mat, const std::type_identity_t<Vec<Dim>>& n) {
    if (std::abs(norm(n) - 1.0) > 1e-12) throw std::invalid_argument("traction: normal is not a unit vector");
    return stress(e, mat).apply(n);
}

template Vec<2> traction<2>(const SymTensor<2>&, const IsotropicElasticity&, const Vec<2>&);
template Vec<3> traction<3>(const SymTensor<3>&, const IsotropicElasticity&, const Vec<3>&);

std::pair<double, double> positivity_constants(const IsotropicElasticity& mat) {
    const double shear = 2.0 * mat.mu;
    const double volumetric = 2.0 * mat.mu + mat.dim * mat.lambda;
    return {std::min(shear, volumetric), std::max(shear, volumetric)};
}

}  // namespace wsm

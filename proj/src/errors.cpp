#include "wsm/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace wsm {

template <int Dim>
Side side_of(const FaultModel<Dim>& fault, Vec<Dim>& x, double h) {
    const double s = fault.signed_distance(x);
    if (std::abs(s) < 1e-13) {
        x = x - (1e-10 * h) * fault.normal;
        return Side::Plus;
    }
    return s < 0.0 ? Side::Plus : Side::Minus;
}

template <int Dim>
NormSet error_norms(const FeSpace<Dim>& space, std::span<const double> uh, const ExactField<Dim>& exact,
                    double exclusion_radius, const FaultModel<Dim>& fault, bool surface, int extra_points) {
    if (exclusion_radius < 0.0) throw std::invalid_argument("error_norms: negative exclusion radius");
    const auto& mesh = space.mesh();
    const double h = mesh_size(mesh);
    const auto esz = mesh.element_size();
    double jac = 1.0;
    for (int d = 0; d < Dim; ++d) jac *= 0.5 * esz[d];

    const auto rule = gauss_rule<Dim>(space.order() + extra_points);
    double l2g = 0.0, h1g = 0.0, l2l = 0.0, h1l = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            Vec<Dim> x = mesh.to_global(e, rule.points[q]);
            const bool excluded = fault.distance_to_dislocation(x) <= exclusion_radius;
            Vec<Dim> xe = x;
            const Side side = side_of<Dim>(fault, xe, h);
            const auto ex = exact(xe, side);
            Vec<Dim> val;
            Mat<Dim> grad;
            space.evaluate(uh, e, rule.points[q], val, grad);
            double du = 0.0, dg = 0.0;
            for (int i = 0; i < Dim; ++i) {
                du += (ex.value[i] - val[i]) * (ex.value[i] - val[i]);
                for (int j = 0; j < Dim; ++j) dg += (ex.grad[i][j] - grad[i][j]) * (ex.grad[i][j] - grad[i][j]);
            }
            const double w = rule.weights[q] * jac;
            l2g += w * du;
            h1g += w * dg;
            if (!excluded) {
                l2l += w * du;
                h1l += w * dg;
            }
        }
    }

    NormSet out;
    out.l2_global = std::sqrt(l2g);
    out.h1_global = std::sqrt(h1g);
    out.l2_local = std::sqrt(l2l);
    out.h1_local = std::sqrt(h1l);

    if (surface) {
        const auto face_rule = gauss_rule<Dim - 1>(space.order() + extra_points);
        double sg = 0.0, sl = 0.0;
        for (const auto& facet : mesh.boundary_facets()) {
            if (facet.tag != BoundaryTag::FreeSurface) continue;
            const int axis = facet.local_face / 2;
            const double fixed = (facet.local_face % 2 == 1) ? 1.0 : -1.0;
            double fjac = 1.0;
            for (int d = 0; d < Dim; ++d)
                if (d != axis) fjac *= 0.5 * esz[d];
            for (std::size_t q = 0; q < face_rule.points.size(); ++q) {
                Vec<Dim> local{};
                int k = 0;
                for (int d = 0; d < Dim; ++d) local[d] = (d == axis) ? fixed : face_rule.points[q][k++];
                const Vec<Dim> x = mesh.to_global(facet.element, local);
                const bool excluded = fault.distance_to_dislocation(x) <= exclusion_radius;
                Vec<Dim> xe = x;
                const Side side = side_of<Dim>(fault, xe, h);
                const auto ex = exact(xe, side);
                Vec<Dim> val;
                Mat<Dim> grad;
                space.evaluate(uh, facet.element, local, val, grad);
                double du = 0.0;
                for (int i = 0; i < Dim; ++i) du += (ex.value[i] - val[i]) * (ex.value[i] - val[i]);
                const double w = face_rule.weights[q] * fjac;
                sg += w * du;
                if (!excluded) sl += w * du;
            }
        }
        out.l2_surf_global = std::sqrt(sg);
        out.l2_surf_local = std::sqrt(sl);
    }
    return out;
}

template <int Dim>
double pointwise_error(const FeSpace<Dim>& space, std::span<const double> uh, const ExactField<Dim>& exact,
                       const Vec<Dim>& x, Side side) {
    const auto ex = exact(x, side);
    const auto val = space.evaluate_at(uh, x);
    return norm(ex.value - val);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs, std::string metric) {
    if (pairs.size() < 3) throw std::invalid_argument("fit_rate: need at least three (h, error) pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!(pairs[i].second > 0.0) || !(pairs[i].first > 0.0))
            throw std::invalid_argument("fit_rate: mesh sizes and errors must be positive");
        if (i > 0 && !(pairs[i].first < pairs[i - 1].first))
            throw std::invalid_argument("fit_rate: mesh sizes must be strictly decreasing");
    }
    RateFit fit;
    fit.metric = std::move(metric);
    fit.pairs = pairs;
    const std::size_t first = pairs.size() - 3;
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = first; i < pairs.size(); ++i) {
        sx += std::log(pairs[i].first);
        sy += std::log(pairs[i].second);
    }
    const double mx = sx / 3.0, my = sy / 3.0;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = first; i < pairs.size(); ++i) {
        const double dx = std::log(pairs[i].first) - mx;
        const double dy = std::log(pairs[i].second) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    fit.slope = sxy / sxx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

template Side side_of<2>(const FaultModel<2>&, Vec<2>&, double);
template Side side_of<3>(const FaultModel<3>&, Vec<3>&, double);
template NormSet error_norms<2>(const FeSpace<2>&, std::span<const double>, const ExactField<2>&, double,
                                const FaultModel<2>&, bool, int);
template NormSet error_norms<3>(const FeSpace<3>&, std::span<const double>, const ExactField<3>&, double,
                                const FaultModel<3>&, bool, int);
template double pointwise_error<2>(const FeSpace<2>&, std::span<const double>, const ExactField<2>&, const Vec<2>&,
                                   Side);
template double pointwise_error<3>(const FeSpace<3>&, std::span<const double>, const ExactField<3>&, const Vec<3>&,
                                   Side);

}  // namespace wsm

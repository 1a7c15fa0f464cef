#pragma once

#include "wsm/analytic.hpp"
#include "wsm/fault.hpp"
#include "wsm/femspace.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wsm {

/// Reference solution evaluated on a chosen side of the fault.
template <int Dim>
using ExactField = std::function<ExactSample<Dim>(const Vec<Dim>&, Side)>;

struct NormSet {
    double l2_global = 0.0;
    double h1_global = 0.0;  // H1 seminorm
    double l2_local = 0.0;
    double h1_local = 0.0;
    std::optional<double> l2_surf_global;
    std::optional<double> l2_surf_local;
};

/// Side of the fault a point belongs to; points within 1e-13 of the plane are
/// moved 1e-10 * h onto the plus side first.
template <int Dim>
Side side_of(const FaultModel<Dim>& fault, Vec<Dim>& x, double h);

/// L2 and H1-seminorm errors by element-wise Gauss quadrature with
/// (order + extra_points) points per axis. Local norms skip quadrature points
/// within `exclusion_radius` (closed ball) of the dislocation. With
/// `surface` set, the L2 error is also integrated over the free-surface
/// facets, globally and with the same exclusion.
template <int Dim>
NormSet error_norms(const FeSpace<Dim>& space, std::span<const double> uh, const ExactField<Dim>& exact,
                    double exclusion_radius, const FaultModel<Dim>& fault, bool surface, int extra_points = 2);

/// |u(x) - u_h(x)| with u taken on the given side.
template <int Dim>
double pointwise_error(const FeSpace<Dim>& space, std::span<const double> uh, const ExactField<Dim>& exact,
                       const Vec<Dim>& x, Side side);

struct RateFit {
    std::string metric;
    std::vector<std::pair<double, double>> pairs;  // (h, error)
    double slope = 0.0;
    double r2 = 0.0;
};

/// Least-squares slope of log(error) against log(h) over the last three
/// pairs. Requires at least three pairs, strictly decreasing h and positive
/// errors; throws std::invalid_argument otherwise.
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs, std::string metric = {});

}  // namespace wsm

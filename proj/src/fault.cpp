#include "wsm/fault.hpp"

#include <algorithm>
#include <stdexcept>

namespace wsm {

template <int Dim>
void FaultModel<Dim>::validate() const {
    constexpr double tol = 1e-12;
    if (std::abs(norm(normal) - 1.0) > tol) throw std::invalid_argument("fault: normal is not a unit vector");
    for (int a = 0; a < Dim - 1; ++a) {
        if (std::abs(norm(axes[a]) - 1.0) > tol) throw std::invalid_argument("fault: in-plane axis is not unit");
        if (std::abs(dot(axes[a], normal)) > tol) throw std::invalid_argument("fault: axis not orthogonal to normal");
        for (int b = a + 1; b < Dim - 1; ++b)
            if (std::abs(dot(axes[a], axes[b])) > tol) throw std::invalid_argument("fault: axes not orthogonal");
        if (!(bounds[a][0] < bounds[a][1])) throw std::invalid_argument("fault: empty patch");
    }
    if (!slip) throw std::invalid_argument("fault: missing slip function");
}

template <int Dim>
PlaneCoords<Dim> FaultModel<Dim>::plane_coords(const Vec<Dim>& x) const {
    PlaneCoords<Dim> s{};
    const auto r = x - origin;
    for (int a = 0; a < Dim - 1; ++a) s[a] = dot(r, axes[a]);
    return s;
}

template <int Dim>
Vec<Dim> FaultModel<Dim>::point(const PlaneCoords<Dim>& s) const {
    Vec<Dim> x = origin;
    for (int a = 0; a < Dim - 1; ++a) x = x + s[a] * axes[a];
    return x;
}

template <int Dim>
double FaultModel<Dim>::distance_to_dislocation(const Vec<Dim>& x) const {
    const auto s = plane_coords(x);
    const double n = signed_distance(x);
    double d2 = n * n;
    for (int a = 0; a < Dim - 1; ++a) {
        const double excess = std::max({bounds[a][0] - s[a], 0.0, s[a] - bounds[a][1]});
        d2 += excess * excess;
    }
    return std::sqrt(d2);
}

template <int Dim>
double FaultModel<Dim>::patch_measure() const {
    double m = 1.0;
    for (int a = 0; a < Dim - 1; ++a) m *= bounds[a][1] - bounds[a][0];
    return m;
}

template <int Dim>
std::vector<Vec<Dim>> FaultModel<Dim>::patch_vertices() const {
    if constexpr (Dim == 2) {
        return {point({bounds[0][0]}), point({bounds[0][1]})};
    } else {
        return {point({bounds[0][0], bounds[1][0]}), point({bounds[0][1], bounds[1][0]}),
                point({bounds[0][1], bounds[1][1]}), point({bounds[0][0], bounds[1][1]})};
    }
}

double smooth_slip_2d(double xi, double b0) {
    constexpr double sixth = 1.0 / 6.0;
    if (xi <= -0.5 || xi >= 0.5) return 0.0;
    if (xi < -sixth) return b0 * (1.5 + 6.0 * xi + 6.0 * xi * xi);
    if (xi <= sixth) return b0 * (1.0 - 12.0 * xi * xi);
    return b0 * (1.5 - 6.0 * xi + 6.0 * xi * xi);
}

namespace {

// Half-space x[axis] >= bound (upper == false) or x[axis] <= bound.
template <int Dim>
std::vector<Vec<Dim>> clip_polygon(const std::vector<Vec<Dim>>& poly, int axis, double bound, bool upper, double tol) {
    std::vector<Vec<Dim>> out;
    const std::size_t n = poly.size();
    auto dist = [&](const Vec<Dim>& p) { return upper ? bound - p[axis] : p[axis] - bound; };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        const double da = dist(a);
        const double db = dist(b);
        const bool ina = da >= -tol;
        const bool inb = db >= -tol;
        if (ina) out.push_back(a);
        if (ina != inb && std::abs(da) > tol && std::abs(db) > tol) {
            const double t = da / (da - db);
            Vec<Dim> c = a + t * (b - a);
            c[axis] = bound;
            out.push_back(c);
        }
    }
    return out;
}

double polygon_area(const std::vector<Vec<3>>& poly) {
    Vec<3> acc{};
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) acc = acc + cross(poly[i] - poly[0], poly[i + 1] - poly[0]);
    return 0.5 * norm(acc);
}

template <int Dim>
bool on_face(const std::vector<Vec<Dim>>& poly, int axis, double coord, double tol) {
    return std::all_of(poly.begin(), poly.end(), [&](const Vec<Dim>& p) { return std::abs(p[axis] - coord) <= tol; });
}

template <int Dim>
void classify(const StructuredMesh<Dim>& mesh, const FaultModel<Dim>& fault, int e, FaultSegment<Dim>& seg,
              double tol, bool& keep) {
    keep = true;
    seg.kind = SegmentKind::Interior;
    seg.elem_plus = seg.elem_minus = e;
    const auto elo = mesh.element_lo(e);
    const auto ehi = mesh.element_hi(e);
    for (int axis = 0; axis < Dim; ++axis) {
        for (int side = 0; side < 2; ++side) {
            const double coord = side ? ehi[axis] : elo[axis];
            if (!on_face<Dim>(seg.vertices, axis, coord, tol)) continue;
            const int nb = mesh.neighbor(e, 2 * axis + side);
            if (nb < 0) return;
            if (nb < e) {
                keep = false;  // emitted by the neighbour
                return;
            }
            seg.kind = SegmentKind::Face;
            Vec<Dim> ce = 0.5 * (elo + ehi);
            const bool e_plus = fault.signed_distance(ce) < 0.0;
            seg.elem_plus = e_plus ? e : nb;
            seg.elem_minus = e_plus ? nb : e;
            return;
        }
    }
}

}  // namespace

template <int Dim>
std::vector<FaultSegment<Dim>> segment_fault(const StructuredMesh<Dim>& mesh, const FaultModel<Dim>& fault,
                                             int quad_order) {
    fault.validate();
    if (quad_order < 1 || quad_order > 5) throw std::invalid_argument("segment_fault: quadrature order out of range");
    const double h = mesh_size(mesh);
    const double tol = 1e-12 * h;
    const auto patch = fault.patch_vertices();

    // candidate element index ranges from the patch bounding box
    std::array<int, Dim> first{}, last{};
    const auto esz = mesh.element_size();
    for (int d = 0; d < Dim; ++d) {
        double mn = patch[0][d], mx = patch[0][d];
        for (const auto& v : patch) {
            mn = std::min(mn, v[d]);
            mx = std::max(mx, v[d]);
        }
        first[d] = std::clamp(static_cast<int>(std::floor((mn - mesh.lo()[d]) / esz[d])) - 1, 0, mesh.counts()[d] - 1);
        last[d] = std::clamp(static_cast<int>(std::floor((mx - mesh.lo()[d]) / esz[d])) + 1, 0, mesh.counts()[d] - 1);
    }

    std::vector<double> gx, gw;
    gauss_legendre(quad_order, gx, gw);
    std::vector<double> sx, sw;
    gauss_legendre(quad_order + 1, sx, sw);

    std::vector<FaultSegment<Dim>> segments;
    std::array<int, Dim> idx = first;
    while (true) {
        const int e = mesh.element_at(idx);
        const auto elo = mesh.element_lo(e);
        const auto ehi = mesh.element_hi(e);

        auto poly = patch;
        for (int d = 0; d < Dim && !poly.empty(); ++d) {
            poly = clip_polygon<Dim>(poly, d, elo[d], false, tol);
            if (!poly.empty()) poly = clip_polygon<Dim>(poly, d, ehi[d], true, tol);
        }

        FaultSegment<Dim> seg;
        seg.mesh_id = mesh.id();
        if constexpr (Dim == 2) {
            if (poly.size() >= 2) {
                // the clipped "polygon" of a segment is its two end points (possibly repeated)
                double t0 = fault.plane_coords(poly[0])[0], t1 = t0;
                for (const auto& v : poly) {
                    const double t = fault.plane_coords(v)[0];
                    t0 = std::min(t0, t);
                    t1 = std::max(t1, t);
                }
                seg.measure = t1 - t0;
                seg.vertices = {fault.point({t0}), fault.point({t1})};
                if (seg.measure > tol) {
                    std::vector<double> cuts{t0};
                    for (double br : fault.slip_breaks[0])
                        if (br > t0 + tol && br < t1 - tol) cuts.push_back(br);
                    cuts.push_back(t1);
                    std::sort(cuts.begin(), cuts.end());
                    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                        const double a = cuts[k], b = cuts[k + 1];
                        for (int q = 0; q < quad_order; ++q) {
                            seg.points.push_back(fault.point({0.5 * (a + b) + 0.5 * (b - a) * gx[q]}));
                            seg.weights.push_back(0.5 * (b - a) * gw[q]);
                        }
                    }
                }
            }
        } else {
            if (poly.size() >= 3) {
                seg.measure = polygon_area(poly);
                seg.vertices = poly;
                if (seg.measure > tol * h) {
                    Vec<3> c{};
                    for (const auto& v : poly) c = c + (1.0 / poly.size()) * v;
                    for (std::size_t i = 0; i < poly.size(); ++i) {
                        const auto& v1 = poly[i];
                        const auto& v2 = poly[(i + 1) % poly.size()];
                        const double area = 0.5 * norm(cross(v1 - c, v2 - c));
                        if (area <= 0.0) continue;
                        for (int a = 0; a <= quad_order; ++a) {
                            const double s = 0.5 * (sx[a] + 1.0);
                            for (int b = 0; b < quad_order; ++b) {
                                const double t = 0.5 * (gx[b] + 1.0);
                                const Vec<3> x = c + s * ((1.0 - t) * (v1 - c) + t * (v2 - c));
                                seg.points.push_back(x);
                                seg.weights.push_back(0.25 * sw[a] * gw[b] * 2.0 * area * s);
                            }
                        }
                    }
                }
            }
        }

        if (!seg.points.empty()) {
            bool keep = true;
            classify(mesh, fault, e, seg, tol, keep);
            if (keep) segments.push_back(std::move(seg));
        }

        int d = 0;
        while (d < Dim && ++idx[d] > last[d]) {
            idx[d] = first[d];
            ++d;
        }
        if (d == Dim) break;
    }
    return segments;
}

template <int Dim>
std::vector<double> wsm_rhs(const FeSystem<Dim>& system, const FaultModel<Dim>& fault,
                            const std::vector<FaultSegment<Dim>>& segments, const IsotropicElasticity& mat) {
    const auto& space = *system.space;
    const auto& mesh = space.mesh();
    std::vector<double> rhs(space.num_dofs(), 0.0);
    const auto h = mesh.element_size();
    const auto& nu = fault.normal;
    for (const auto& seg : segments) {
        if (seg.mesh_id != mesh.id()) throw std::invalid_argument("wsm_rhs: segment belongs to another mesh");
        const bool face = seg.kind == SegmentKind::Face;
        const std::array<int, 2> elems{seg.elem_plus, seg.elem_minus};
        const int nsides = face ? 2 : 1;
        const double share = face ? 0.5 : 1.0;
        for (std::size_t q = 0; q < seg.points.size(); ++q) {
            const auto& x = seg.points[q];
            const Vec<Dim> b = fault.slip_at(x);
            const double bn = dot(b, nu);
            for (int side = 0; side < nsides; ++side) {
                const int e = elems[side];
                const auto sv = shape_eval<Dim>(space.order(), mesh.to_local(e, x));
                const auto nodes = space.element_nodes(e);
                const double w = seg.weights[q] * share;
                for (int a = 0; a < space.nodes_per_element(); ++a) {
                    Vec<Dim> g{};
                    for (int d = 0; d < Dim; ++d) g[d] = sv.gradients[a][d] * 2.0 / h[d];
                    const double bg = dot(b, g);
                    const double gn = dot(g, nu);
                    for (int c = 0; c < Dim; ++c) {
                        // b . sigma(phi e_c) nu
                        const double val = mat.lambda * g[c] * bn + mat.mu * (bg * nu[c] + b[c] * gn);
                        rhs[static_cast<std::size_t>(nodes[a]) * Dim + c] -= w * val;
                    }
                }
            }
        }
    }
    return rhs;
}

template <int Dim>
double fault_quality_norm(const StructuredMesh<Dim>& mesh, const std::vector<FaultSegment<Dim>>& segments,
                          const FaultModel<Dim>& fault) {
    const double diam = mesh_size(mesh);  // all elements share one diameter
    double total = 0.0;
    for (const auto& seg : segments) {
        const double hs = 1.0 / (1.0 / diam + 1.0 / diam);
        double b2 = 0.0;
        for (std::size_t q = 0; q < seg.points.size(); ++q) {
            const auto b = fault.slip_at(seg.points[q]);
            b2 += seg.weights[q] * dot(b, b);
        }
        total += b2 / hs;
    }
    return std::sqrt(total);
}

template struct FaultModel<2>;
template struct FaultModel<3>;
template std::vector<FaultSegment<2>> segment_fault<2>(const StructuredMesh<2>&, const FaultModel<2>&, int);
template std::vector<FaultSegment<3>> segment_fault<3>(const StructuredMesh<3>&, const FaultModel<3>&, int);
template std::vector<double> wsm_rhs<2>(const FeSystem<2>&, const FaultModel<2>&, const std::vector<FaultSegment<2>>&,
                                        const IsotropicElasticity&);
template std::vector<double> wsm_rhs<3>(const FeSystem<3>&, const FaultModel<3>&, const std::vector<FaultSegment<3>>&,
                                        const IsotropicElasticity&);
template double fault_quality_norm<2>(const StructuredMesh<2>&, const std::vector<FaultSegment<2>>&,
                                      const FaultModel<2>&);
template double fault_quality_norm<3>(const StructuredMesh<3>&, const std::vector<FaultSegment<3>>&,
                                      const FaultModel<3>&);

}  // namespace wsm

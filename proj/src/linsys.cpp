#include "wsm/linsys.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace wsm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

SparseSymMatrix::SparseSymMatrix(int n, std::vector<int> row_ptr, std::vector<int> cols, std::vector<double> vals)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(std::move(vals)) {
    if (static_cast<int>(row_ptr_.size()) != n_ + 1 || cols_.size() != vals_.size() ||
        static_cast<std::size_t>(row_ptr_.back()) != cols_.size())
        throw std::invalid_argument("SparseSymMatrix: inconsistent CSR arrays");
}

double SparseSymMatrix::at(int i, int j) const {
    const auto first = cols_.begin() + row_ptr_[i];
    const auto last = cols_.begin() + row_ptr_[i + 1];
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return vals_[it - cols_.begin()];
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
        y[i] = s;
    }
}

std::vector<double> SparseSymMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

std::vector<double> SparseSymMatrix::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (int i = 0; i < n_; ++i) d[i] = at(i, i);
    return d;
}

double SparseSymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : vals_) m = std::max(m, std::abs(v));
    return m;
}

template <int Dim>
std::vector<double> element_stiffness(const FeSpace<Dim>& space, const IsotropicElasticity& mat) {
    const int p = space.order();
    const int npe = space.nodes_per_element();
    const int ndof = npe * Dim;
    const auto rule = gauss_rule<Dim>(p + 1);
    const auto h = space.mesh().element_size();
    double jac = 1.0;
    for (int d = 0; d < Dim; ++d) jac *= 0.5 * h[d];

    std::vector<double> ke(static_cast<std::size_t>(ndof) * ndof, 0.0);
    std::vector<Vec<Dim>> grads(npe);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto sv = shape_eval<Dim>(p, rule.points[q]);
        for (int a = 0; a < npe; ++a)
            for (int d = 0; d < Dim; ++d) grads[a][d] = sv.gradients[a][d] * 2.0 / h[d];
        const double w = rule.weights[q] * jac;
        for (int a = 0; a < npe; ++a) {
            for (int b = 0; b < npe; ++b) {
                const double gg = dot(grads[a], grads[b]);
                for (int c = 0; c < Dim; ++c) {
                    const std::size_t row = static_cast<std::size_t>(a * Dim + c) * ndof;
                    for (int d = 0; d < Dim; ++d) {
                        double v = mat.lambda * grads[b][d] * grads[a][c] + mat.mu * grads[b][c] * grads[a][d];
                        if (c == d) v += mat.mu * gg;
                        ke[row + b * Dim + d] += w * v;
                    }
                }
            }
        }
    }
    return ke;
}

template <int Dim>
SparseSymMatrix assemble_stiffness(const FeSpace<Dim>& space, const IsotropicElasticity& mat) {
    const int nn = space.num_nodes();
    const int npe = space.nodes_per_element();
    const int ne = space.mesh().num_elements();

    // node-level pattern
    std::vector<std::vector<int>> adj(nn);
    for (int e = 0; e < ne; ++e) {
        const auto nodes = space.element_nodes(e);
        for (int a : nodes) adj[a].insert(adj[a].end(), nodes.begin(), nodes.end());
    }
    std::vector<int> node_ptr(nn + 1, 0);
    for (int i = 0; i < nn; ++i) {
        auto& row = adj[i];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        node_ptr[i + 1] = node_ptr[i] + static_cast<int>(row.size());
    }

    const int n = nn * Dim;
    std::vector<int> row_ptr(n + 1, 0);
    for (int i = 0; i < nn; ++i) {
        const int len = static_cast<int>(adj[i].size()) * Dim;
        for (int c = 0; c < Dim; ++c) row_ptr[i * Dim + c + 1] = len;
    }
    std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
    std::vector<int> cols(row_ptr.back());
    for (int i = 0; i < nn; ++i)
        for (int c = 0; c < Dim; ++c) {
            int k = row_ptr[i * Dim + c];
            for (int m : adj[i])
                for (int d = 0; d < Dim; ++d) cols[k++] = m * Dim + d;
        }
    std::vector<double> vals(cols.size(), 0.0);

    const auto ke = element_stiffness(space, mat);
    const int ndof = npe * Dim;
    std::vector<int> pos(static_cast<std::size_t>(npe) * npe);
    for (int e = 0; e < ne; ++e) {
        const auto nodes = space.element_nodes(e);
        for (int a = 0; a < npe; ++a) {
            const auto& row = adj[nodes[a]];
            for (int b = 0; b < npe; ++b)
                pos[a * npe + b] =
                    static_cast<int>(std::lower_bound(row.begin(), row.end(), nodes[b]) - row.begin());
        }
        for (int a = 0; a < npe; ++a)
            for (int c = 0; c < Dim; ++c) {
                const int r = row_ptr[nodes[a] * Dim + c];
                const double* kr = &ke[static_cast<std::size_t>(a * Dim + c) * ndof];
                for (int b = 0; b < npe; ++b) {
                    const int base = r + pos[a * npe + b] * Dim;
                    for (int d = 0; d < Dim; ++d) vals[base + d] += kr[b * Dim + d];
                }
            }
    }
    return SparseSymMatrix(n, std::move(row_ptr), std::move(cols), std::move(vals));
}

namespace {

std::vector<char> constraint_mask(int n, std::span<const int> dofs) {
    std::vector<char> mask(n, 0);
    for (int c : dofs) {
        if (c < 0 || c >= n) throw std::out_of_range("Dirichlet DOF index out of range");
        mask[c] = 1;
    }
    return mask;
}

}  // namespace

SparseSymMatrix constrain_matrix(const SparseSymMatrix& k, std::span<const int> dofs) {
    const auto mask = constraint_mask(k.size(), dofs);
    SparseSymMatrix out = k;
    auto& vals = out.values();
    const auto& rp = k.row_ptr();
    const auto& cols = k.cols();
    for (int i = 0; i < k.size(); ++i)
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            const int j = cols[p];
            if (mask[i] || mask[j]) vals[p] = (i == j) ? 1.0 : 0.0;
        }
    return out;
}

std::vector<double> lift_rhs(const SparseSymMatrix& k, std::span<const double> rhs, std::span<const double> g,
                             std::span<const int> dofs) {
    const auto mask = constraint_mask(k.size(), dofs);
    std::vector<double> out(rhs.begin(), rhs.end());
    const auto& rp = k.row_ptr();
    const auto& cols = k.cols();
    const auto& vals = k.values();
    for (int i = 0; i < k.size(); ++i) {
        if (mask[i]) {
            out[i] = g[i];
            continue;
        }
        for (int p = rp[i]; p < rp[i + 1]; ++p)
            if (mask[cols[p]]) out[i] -= vals[p] * g[cols[p]];
    }
    return out;
}

ConstrainedSystem apply_dirichlet(const SparseSymMatrix& k, std::span<const double> rhs, std::span<const double> g,
                                  std::span<const int> dofs) {
    return {constrain_matrix(k, dofs), lift_rhs(k, rhs, g, dofs)};
}

Preconditioner::Preconditioner(std::shared_ptr<const SparseSymMatrix> matrix, PreconditionerKind kind)
    : matrix_(std::move(matrix)), kind_(kind) {
    const auto diag = matrix_->diagonal();
    inv_diag_.resize(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        if (diag[i] == 0.0) throw std::runtime_error("preconditioner: zero diagonal entry");
        inv_diag_[i] = 1.0 / diag[i];
    }
}

void Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
    const int n = static_cast<int>(inv_diag_.size());
    if (kind_ == PreconditionerKind::Jacobi) {
        for (int i = 0; i < n; ++i) z[i] = inv_diag_[i] * r[i];
        return;
    }
    const auto& rp = matrix_->row_ptr();
    const auto& cols = matrix_->cols();
    const auto& vals = matrix_->values();
    // forward sweep: (D + L) y = r
    for (int i = 0; i < n; ++i) {
        double s = r[i];
        for (int p = rp[i]; p < rp[i + 1] && cols[p] < i; ++p) s -= vals[p] * z[cols[p]];
        z[i] = s * inv_diag_[i];
    }
    // backward sweep: (D + U) z = D y
    for (int i = n - 1; i >= 0; --i) {
        double s = 0.0;
        for (int p = rp[i + 1] - 1; p >= rp[i] && cols[p] > i; --p) s += vals[p] * z[cols[p]];
        z[i] -= s * inv_diag_[i];
    }
}

Preconditioner build_preconditioner(std::shared_ptr<const SparseSymMatrix> matrix, PreconditionerKind kind) {
    return Preconditioner(std::move(matrix), kind);
}

SolveResult cg_solve(const SparseSymMatrix& k, const Preconditioner& pc, std::span<const double> rhs, double rel_tol,
                     int max_iter, const CgMonitor& monitor) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("cg_solve: tolerance must lie in (0, 1)");
    const auto start = Clock::now();
    const int n = k.size();
    SolveResult result;
    result.solution.assign(n, 0.0);
    auto& x = result.solution;
    const double bnorm = norm2(rhs);
    if (bnorm == 0.0) {
        result.report.solve_ms = elapsed_ms(start);
        return result;
    }

    std::vector<double> r(rhs.begin(), rhs.end());
    std::vector<double> z(n), p(n), q(n);
    int it = 0;
    double rel = 1.0;
    while (true) {
        pc.apply(r, z);
        p = z;
        double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        bool converged = false;
        while (it < max_iter) {
            k.multiply(p, q);
            const double alpha = rz / std::inner_product(p.begin(), p.end(), q.begin(), 0.0);
            for (int i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            ++it;
            if (monitor) monitor(it, x);
            if (norm2(r) <= rel_tol * bnorm) {
                converged = true;
                break;
            }
            pc.apply(r, z);
            const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        // true residual; restart from it if the recurrence drifted
        k.multiply(x, q);
        for (int i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
        rel = norm2(r) / bnorm;
        if (rel <= rel_tol) break;
        if (!converged || it >= max_iter) {
            result.report = {it, rel, elapsed_ms(start)};
            throw SolverError("cg_solve: no convergence within the iteration limit", result.report);
        }
    }
    result.report = {it, rel, elapsed_ms(start)};
    return result;
}

template <int Dim>
FeSystem<Dim> build_fe_system(std::shared_ptr<const FeSpace<Dim>> space, const IsotropicElasticity& mat,
                              PreconditionerKind kind) {
    FeSystem<Dim> sys;
    sys.space = std::move(space);
    sys.material = mat;
    auto start = Clock::now();
    sys.stiffness = std::make_shared<const SparseSymMatrix>(assemble_stiffness(*sys.space, mat));
    sys.constrained = std::make_shared<const SparseSymMatrix>(constrain_matrix(*sys.stiffness, sys.dirichlet_dofs()));
    sys.assembly_ms = elapsed_ms(start);
    start = Clock::now();
    sys.preconditioner = build_preconditioner(sys.constrained, kind);
    sys.factor_ms = elapsed_ms(start);
    return sys;
}

template <int Dim>
SolveResult solve(const FeSystem<Dim>& system, std::span<const double> load, std::span<const double> g,
                  double rel_tol, int max_iter) {
    const auto rhs = lift_rhs(*system.stiffness, load, g, system.dirichlet_dofs());
    return cg_solve(*system.constrained, system.preconditioner, rhs, rel_tol, max_iter);
}

template std::vector<double> element_stiffness<2>(const FeSpace<2>&, const IsotropicElasticity&);
template std::vector<double> element_stiffness<3>(const FeSpace<3>&, const IsotropicElasticity&);
template SparseSymMatrix assemble_stiffness<2>(const FeSpace<2>&, const IsotropicElasticity&);
template SparseSymMatrix assemble_stiffness<3>(const FeSpace<3>&, const IsotropicElasticity&);
template FeSystem<2> build_fe_system<2>(std::shared_ptr<const FeSpace<2>>, const IsotropicElasticity&,
                                        PreconditionerKind);
template FeSystem<3> build_fe_system<3>(std::shared_ptr<const FeSpace<3>>, const IsotropicElasticity&,
                                        PreconditionerKind);
template SolveResult solve<2>(const FeSystem<2>&, std::span<const double>, std::span<const double>, double, int);
template SolveResult solve<3>(const FeSystem<3>&, std::span<const double>, std::span<const double>, double, int);

}  // namespace wsm

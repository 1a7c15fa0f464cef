#pragma once

#include "wsm/elasticity.hpp"
#include "wsm/femspace.hpp"

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace wsm {

/// Square sparse matrix with a symmetric pattern, stored as full CSR rows
/// with sorted column indices.
class SparseSymMatrix {
public:
    SparseSymMatrix() = default;
    SparseSymMatrix(int n, std::vector<int> row_ptr, std::vector<int> cols, std::vector<double> vals);

    int size() const { return n_; }
    std::size_t nnz() const { return cols_.size(); }
    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& cols() const { return cols_; }
    const std::vector<double>& values() const { return vals_; }
    std::vector<double>& values() { return vals_; }

    /// Entry (i, j); zero outside the pattern.
    double at(int i, int j) const;

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    std::vector<double> diagonal() const;

    /// Largest absolute entry.
    double max_abs() const;

    bool operator==(const SparseSymMatrix&) const = default;

private:
    int n_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> cols_;
    std::vector<double> vals_;
};

/// Dense element matrix of a(u, v) = integral sigma(u) : grad v over one box
/// element, ordered like the element DOFs (local node major, component minor).
template <int Dim>
std::vector<double> element_stiffness(const FeSpace<Dim>& space, const IsotropicElasticity& mat);

/// Global stiffness K_ij = a(phi_j, phi_i). Elements of a structured mesh are
/// congruent, so one element matrix is scattered in element order.
template <int Dim>
SparseSymMatrix assemble_stiffness(const FeSpace<Dim>& space, const IsotropicElasticity& mat);

/// Constrained rows and columns zeroed, unit diagonal on constrained rows.
SparseSymMatrix constrain_matrix(const SparseSymMatrix& k, std::span<const int> dofs);

/// rhs_i -= sum_c K_ic g_c on free rows; rhs_c = g_c on constrained rows.
/// `k` is the unconstrained matrix.
std::vector<double> lift_rhs(const SparseSymMatrix& k, std::span<const double> rhs, std::span<const double> g,
                             std::span<const int> dofs);

struct ConstrainedSystem {
    SparseSymMatrix matrix;
    std::vector<double> rhs;
};

/// Symmetric elimination of Dirichlet DOFs. Throws std::out_of_range on a bad index.
ConstrainedSystem apply_dirichlet(const SparseSymMatrix& k, std::span<const double> rhs, std::span<const double> g,
                                  std::span<const int> dofs);

enum class PreconditionerKind { Jacobi, SymmetricGaussSeidel };

/// Reusable preconditioner state for one constrained matrix.
class Preconditioner {
public:
    Preconditioner() = default;
    /// Throws std::runtime_error on a zero diagonal entry.
    Preconditioner(std::shared_ptr<const SparseSymMatrix> matrix, PreconditionerKind kind);

    PreconditionerKind kind() const { return kind_; }
    const std::vector<double>& inverse_diagonal() const { return inv_diag_; }

    /// z = M^{-1} r.
    void apply(std::span<const double> r, std::span<double> z) const;

private:
    std::shared_ptr<const SparseSymMatrix> matrix_;
    PreconditionerKind kind_ = PreconditionerKind::Jacobi;
    std::vector<double> inv_diag_;
};

Preconditioner build_preconditioner(std::shared_ptr<const SparseSymMatrix> matrix,
                                    PreconditionerKind kind = PreconditionerKind::Jacobi);

struct SolveReport {
    int iterations = 0;
    double final_relative_residual = 0.0;
    double solve_ms = 0.0;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, SolveReport report) : std::runtime_error(what), report_(report) {}
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

struct SolveResult {
    std::vector<double> solution;
    SolveReport report;
};

/// Preconditioned conjugate gradients from a zero initial guess. Stops when
/// the true relative residual ||rhs - K x|| / ||rhs|| drops to rel_tol;
/// throws SolverError after max_iter iterations. `monitor`, if set, sees
/// every iterate.
using CgMonitor = std::function<void(int iteration, std::span<const double> x)>;

SolveResult cg_solve(const SparseSymMatrix& k, const Preconditioner& pc, std::span<const double> rhs, double rel_tol,
                     int max_iter, const CgMonitor& monitor = {});

/// Fault-independent part of a solve: the FE space, its stiffness, the
/// constrained operator and its preconditioner. Immutable once built.
template <int Dim>
struct FeSystem {
    std::shared_ptr<const FeSpace<Dim>> space;
    IsotropicElasticity material;
    std::shared_ptr<const SparseSymMatrix> stiffness;
    std::shared_ptr<const SparseSymMatrix> constrained;
    Preconditioner preconditioner;
    double assembly_ms = 0.0;
    double factor_ms = 0.0;

    const std::vector<int>& dirichlet_dofs() const { return space->dirichlet_dofs(); }
};

template <int Dim>
FeSystem<Dim> build_fe_system(std::shared_ptr<const FeSpace<Dim>> space, const IsotropicElasticity& mat,
                              PreconditionerKind kind = PreconditionerKind::Jacobi);

inline constexpr double kDefaultCgTolerance = 1e-10;

/// Solves K u = load with u = g on the Dirichlet DOFs, reusing the system's
/// matrices; only the right-hand side depends on the data.
template <int Dim>
SolveResult solve(const FeSystem<Dim>& system, std::span<const double> load, std::span<const double> g,
                  double rel_tol = kDefaultCgTolerance, int max_iter = 100000);

}  // namespace wsm

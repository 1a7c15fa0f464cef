#pragma once

#include "wsm/analytic.hpp"
#include "wsm/errors.hpp"
#include "wsm/fault.hpp"
#include "wsm/linsys.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wsm {

enum class CaseId { I, II, III };

/// "I", "II" or "III"; throws std::invalid_argument for anything else.
CaseId parse_case(const std::string& name);
std::string to_string(CaseId id);
inline int case_dim(CaseId id) { return id == CaseId::I ? 2 : 3; }

/// Plane-strain benchmark: unit fault through the origin of (-1, 1)^2,
/// Dirichlet data everywhere.
struct PlaneStrainCase {
    IsotropicElasticity material;
    Vec<2> lo{-1.0, -1.0};
    Vec<2> hi{1.0, 1.0};
    PlaneStrainDislocation exact;
    FaultModel<2> fault;
};
PlaneStrainCase make_case_i(double b0 = 0.1, double lambda = 1.0, double mu = 1.0);

/// Half-space benchmarks in [-1, 1] x [-1, 1] x [-1, 0] with a free surface
/// at z = 0. Case II is buried (depth 0.25 to 0.75); case III reaches the
/// surface and reverses the dip slip.
struct HalfspaceCase {
    IsotropicElasticity material;
    Vec<3> lo{-1.0, -1.0, -1.0};
    Vec<3> hi{1.0, 1.0, 0.0};
    BoxSide free_surface{2, true};
    HalfspaceSource exact;
    FaultModel<3> fault;
};
HalfspaceCase make_case_ii();
HalfspaceCase make_case_iii();

/// Fault model for a uniform-slip rectangle described by a half-space source.
FaultModel<3> fault_from_source(const HalfspaceSource& src);

struct ErrorReport {
    CaseId case_id = CaseId::I;
    int order = 1;
    std::array<int, 3> counts{};  // nz = 0 in 2D
    double h = 0.0;
    NormSet norms;
    double slip_norm = 0.0;
    SolveReport solve;
    double assembly_ms = 0.0;
    bool assembly_reused = false;
    bool failed = false;
    std::string failure;
};

struct RunOptions {
    CaseId case_id = CaseId::I;
    int order = 1;
    /// Refinement parameters N: (N, N) in 2D, (N, N, N/2) in 3D.
    std::vector<int> counts;
    double exclusion_radius = 0.1;
    PreconditionerKind preconditioner = PreconditionerKind::Jacobi;
    double cg_tolerance = kDefaultCgTolerance;
    int fault_quadrature = kDefaultFaultQuadrature;
    int max_iterations = 100000;
};

/// Discrete solution of one level, kept for post-processing.
template <int Dim>
struct LevelSolution {
    std::shared_ptr<const FeSpace<Dim>> space;
    std::vector<double> u;
};

/// Runs every level of a case. Solver failures are recorded in the report
/// (and the CSV row) rather than thrown.
std::vector<ErrorReport> run_case(const RunOptions& opts);

/// Single plane-strain level, also returning the discrete field.
ErrorReport run_case_i_level(const PlaneStrainCase& c, int order, int n, const RunOptions& opts,
                             LevelSolution<2>* keep = nullptr);
ErrorReport run_halfspace_level(CaseId id, const HalfspaceCase& c, int order, int n, const RunOptions& opts,
                                LevelSolution<3>* keep = nullptr);

inline constexpr const char* kCsvHeader =
    "case,p,nx,ny,nz,h,l2_global,h1_global,l2_local,h1_local,l2_surf_global,l2_surf_local,slip_norm,cg_iters,"
    "cg_residual,assemble_ms,solve_ms,assembly_reused";

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ErrorReport& r);

/// One parsed CSV row, keyed by column name.
struct CsvRow {
    std::vector<std::string> fields;
};
struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
    /// Column index; throws std::invalid_argument naming a missing column.
    std::size_t column(const std::string& name) const;
};
CsvTable read_csv(std::istream& is);

/// Rate fits of one metric per (case, order) group, in first-seen order.
/// Rows with an empty metric are skipped.
struct GroupFit {
    std::string case_name;
    int order = 0;
    RateFit fit;
};
std::vector<GroupFit> fit_table(const CsvTable& table, const std::string& metric);

struct ReuseEntry {
    double angle = 0.0;
    Vec<2> center{};
    int segments = 0;
    double rhs_ms = 0.0;    // segmentation and load vector
    double solve_ms = 0.0;
    double reuse_ms = 0.0;  // whole per-fault cost on the shared system
    double cold_ms = 0.0;   // the same fault solved from scratch, assembly included
    int iterations = 0;
    bool assembly_reused = false;
    const SparseSymMatrix* stiffness = nullptr;
};

struct ReuseReport {
    std::array<int, 2> counts{};
    int order = 1;
    int repeats = 1;
    double assembly_ms = 0.0;  // mesh, stiffness and preconditioner of the shared system
    std::vector<ReuseEntry> faults;
    double total_reuse_ms = 0.0;  // assembly_ms plus every per-fault cost
    double total_cold_ms = 0.0;
    /// True when every fault used the same stiffness object.
    bool shared_stiffness = false;
};

/// Unit plane-strain faults with random orientation and centre, solved on one
/// shared system of (n, n) elements over (-1, 1)^2 with homogeneous boundary
/// data. Requires at least two faults. Every timing is the fastest of
/// `repeats` runs.
ReuseReport reuse_demo(int n, int order, int faults, std::uint64_t seed, int repeats = 3);

void print_reuse_report(std::ostream& os, const ReuseReport& r);

}  // namespace wsm

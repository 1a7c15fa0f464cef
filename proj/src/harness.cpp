#include "wsm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wsm {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

std::string fmt_ms(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

FaultModel<2> plane_strain_fault(const Vec<2>& center, const Vec<2>& e_xi, double b0) {
    FaultModel<2> f;
    f.origin = center;
    f.axes = {e_xi};
    f.normal = {e_xi[1], -e_xi[0]};  // minus side is eta < 0
    f.bounds = {{{-0.5, 0.5}}};
    f.slip = [e_xi, b0](const PlaneCoords<2>& s) { return smooth_slip_2d(s[0], b0) * e_xi; };
    f.slip_breaks[0] = {-0.5, -1.0 / 6.0, 1.0 / 6.0, 0.5};
    f.validate();
    return f;
}

template <int Dim>
ErrorReport finish_level(CaseId id, int order, const std::array<int, Dim>& counts, const FeSystem<Dim>& system,
                         const FaultModel<Dim>& fault, const std::vector<double>& g,
                         const ExactField<Dim>& exact, const RunOptions& opts, bool surface,
                         LevelSolution<Dim>* keep) {
    const auto& mesh = system.space->mesh();
    ErrorReport r;
    r.case_id = id;
    r.order = order;
    for (int d = 0; d < Dim; ++d) r.counts[d] = counts[d];
    r.h = mesh_size(mesh);
    r.assembly_ms = system.assembly_ms + system.factor_ms;

    const auto t0 = Clock::now();
    const auto segments = segment_fault(mesh, fault, opts.fault_quadrature);
    const auto rhs = wsm_rhs(system, fault, segments, system.material);
    r.assembly_ms += ms_since(t0);
    r.slip_norm = fault_quality_norm(mesh, segments, fault);

    SolveResult res;
    try {
        res = solve(system, rhs, g, opts.cg_tolerance, opts.max_iterations);
    } catch (const SolverError& e) {
        r.failed = true;
        r.failure = e.what();
        r.solve = e.report();
        return r;
    }
    r.solve = res.report;
    r.norms = error_norms<Dim>(*system.space, res.solution, exact, opts.exclusion_radius, fault, surface);
    if (keep) {
        keep->space = system.space;
        keep->u = std::move(res.solution);
    }
    return r;
}

}  // namespace

CaseId parse_case(const std::string& name) {
    if (name == "I") return CaseId::I;
    if (name == "II") return CaseId::II;
    if (name == "III") return CaseId::III;
    throw std::invalid_argument("unknown case '" + name + "' (expected I, II or III)");
}

std::string to_string(CaseId id) {
    switch (id) {
        case CaseId::I: return "I";
        case CaseId::II: return "II";
        case CaseId::III: return "III";
    }
    return "?";
}

PlaneStrainCase make_case_i(double b0, double lambda, double mu) {
    PlaneStrainCase c;
    c.material = IsotropicElasticity::make(lambda, mu, 2);
    c.exact = PlaneStrainDislocation::benchmark(lambda, mu, b0);
    c.fault = plane_strain_fault(c.exact.origin, c.exact.e_xi, b0);
    return c;
}

FaultModel<3> fault_from_source(const HalfspaceSource& src) {
    FaultModel<3> f;
    f.origin = src.reference;
    f.axes = {src.strike_dir(), src.updip_dir()};
    f.normal = src.normal();
    f.bounds = {{{src.l1, src.l2}, {src.w1, src.w2}}};
    const Vec<3> b = src.slip_vector();
    const auto bounds = f.bounds;
    f.slip = [b, bounds](const PlaneCoords<3>& s) {
        constexpr double tol = 1e-12;
        for (int k = 0; k < 2; ++k)
            if (s[k] < bounds[k][0] - tol || s[k] > bounds[k][1] + tol) return Vec<3>{};
        return b;
    };
    f.validate();
    return f;
}

HalfspaceCase make_case_ii() {
    HalfspaceCase c;
    c.material = IsotropicElasticity::make(1.0, 1.0, 3);
    HalfspaceSource& s = c.exact;
    s.lambda = 1.0;
    s.mu = 1.0;
    s.reference = {0.0, 0.0, -0.5};
    s.strike_deg = 15.0;
    s.dip_deg = 30.0;
    const double len = 1.0 / std::sqrt(3.0);
    s.l1 = -0.5 * len;
    s.l2 = 0.5 * len;
    s.w1 = -0.5;
    s.w2 = 0.5;
    s.strike_slip = 0.2;
    s.dip_slip = 0.1;
    s.tensile = 0.0;
    c.fault = fault_from_source(s);
    return c;
}

HalfspaceCase make_case_iii() {
    HalfspaceCase c = make_case_ii();
    c.exact.w2 = 1.0;
    c.exact.dip_slip = -0.1;
    c.fault = fault_from_source(c.exact);
    return c;
}

ErrorReport run_case_i_level(const PlaneStrainCase& c, int order, int n, const RunOptions& opts,
                             LevelSolution<2>* keep) {
    const std::array<int, 2> counts{n, n};
    auto mesh = std::make_shared<const StructuredMesh<2>>(c.lo, c.hi, counts);
    auto space = std::make_shared<const FeSpace<2>>(mesh, order);
    const auto system = build_fe_system<2>(space, c.material, opts.preconditioner);
    const auto& model = c.exact;
    const auto g = interpolate_dirichlet<2>(*space, [&model](const Vec<2>& x) { return eval_planestrain(model, x); });
    const ExactField<2> exact = [&model](const Vec<2>& x, Side side) {
        return eval_planestrain_gradient(model, x, side);
    };
    return finish_level<2>(CaseId::I, order, counts, system, c.fault, g, exact, opts, false, keep);
}

ErrorReport run_halfspace_level(CaseId id, const HalfspaceCase& c, int order, int n, const RunOptions& opts,
                                LevelSolution<3>* keep) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("3D refinement parameter must be even and >= 2");
    const std::array<int, 3> counts{n, n, n / 2};
    auto mesh = std::make_shared<const StructuredMesh<3>>(c.lo, c.hi, counts, c.free_surface);
    auto space = std::make_shared<const FeSpace<3>>(mesh, order);
    const auto system = build_fe_system<3>(space, c.material, opts.preconditioner);
    const auto& src = c.exact;
    const auto g = interpolate_dirichlet<3>(*space, [&src](const Vec<3>& x) { return eval_halfspace(src, x); });
    const ExactField<3> exact = [&src](const Vec<3>& x, Side side) { return eval_halfspace_gradient(src, x, side); };
    return finish_level<3>(id, order, counts, system, c.fault, g, exact, opts, true, keep);
}

std::vector<ErrorReport> run_case(const RunOptions& opts) {
    if (opts.order != 1 && opts.order != 2) throw std::invalid_argument("order must be 1 or 2");
    if (opts.counts.empty()) throw std::invalid_argument("no mesh counts given");
    std::vector<ErrorReport> out;
    if (opts.case_id == CaseId::I) {
        const auto c = make_case_i();
        for (int n : opts.counts) out.push_back(run_case_i_level(c, opts.order, n, opts));
    } else {
        const auto c = opts.case_id == CaseId::II ? make_case_ii() : make_case_iii();
        for (int n : opts.counts) out.push_back(run_halfspace_level(opts.case_id, c, opts.order, n, opts));
    }
    return out;
}

void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const ErrorReport& r) {
    const bool three_d = case_dim(r.case_id) == 3;
    auto norm_field = [&](double v) { return r.failed ? std::string() : fmt(v); };
    auto opt_field = [&](const std::optional<double>& v) { return (r.failed || !v) ? std::string() : fmt(*v); };
    os << to_string(r.case_id) << ',' << r.order << ',' << r.counts[0] << ',' << r.counts[1] << ',';
    if (three_d) os << r.counts[2];
    os << ',' << fmt(r.h) << ',' << norm_field(r.norms.l2_global) << ',' << norm_field(r.norms.h1_global) << ','
       << norm_field(r.norms.l2_local) << ',' << norm_field(r.norms.h1_local) << ','
       << opt_field(r.norms.l2_surf_global) << ',' << opt_field(r.norms.l2_surf_local) << ',' << fmt(r.slip_norm)
       << ',' << r.solve.iterations << ',' << fmt(r.solve.final_relative_residual) << ',' << fmt_ms(r.assembly_ms)
       << ',' << fmt_ms(r.solve.solve_ms) << ',' << (r.assembly_reused ? "true" : "false") << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::invalid_argument("CSV has no column '" + name + "'");
}

namespace {
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}
}  // namespace

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split(line);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        CsvRow row{split(line)};
        if (row.fields.size() != t.header.size())
            throw std::invalid_argument("CSV row has " + std::to_string(row.fields.size()) + " fields, header has " +
                                        std::to_string(t.header.size()));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<GroupFit> fit_table(const CsvTable& table, const std::string& metric) {
    const auto ci = table.column("case");
    const auto pi = table.column("p");
    const auto hi = table.column("h");
    const auto mi = table.column(metric);
    std::vector<GroupFit> groups;
    std::vector<std::vector<std::pair<double, double>>> data;
    for (const auto& row : table.rows) {
        const std::string& cname = row.fields[ci];
        const int p = std::stoi(row.fields[pi]);
        if (row.fields[mi].empty()) continue;
        std::size_t g = 0;
        while (g < groups.size() && !(groups[g].case_name == cname && groups[g].order == p)) ++g;
        if (g == groups.size()) {
            groups.push_back({cname, p, {}});
            data.emplace_back();
        }
        data[g].emplace_back(std::stod(row.fields[hi]), std::stod(row.fields[mi]));
    }
    for (std::size_t g = 0; g < groups.size(); ++g) groups[g].fit = fit_rate(data[g], metric);
    return groups;
}

ReuseReport reuse_demo(int n, int order, int faults, std::uint64_t seed, int repeats) {
    if (faults < 2) throw std::invalid_argument("reuse_demo needs at least two faults");
    if (repeats < 1) throw std::invalid_argument("reuse_demo needs at least one repeat");
    const auto mat = IsotropicElasticity::make(1.0, 1.0, 2);
    const Vec<2> lo{-1.0, -1.0}, hi{1.0, 1.0};
    const std::array<int, 2> counts{n, n};
    constexpr double b0 = 0.1;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle_dist(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> center_dist(-0.3, 0.3);
    std::vector<FaultModel<2>> models;
    ReuseReport report;
    report.counts = counts;
    report.order = order;
    report.repeats = repeats;
    for (int k = 0; k < faults; ++k) {
        ReuseEntry e;
        e.angle = angle_dist(rng);
        e.center = {center_dist(rng), center_dist(rng)};
        models.push_back(plane_strain_fault(e.center, {std::cos(e.angle), std::sin(e.angle)}, b0));
        report.faults.push_back(e);
    }

    auto cold_run = [&](const FaultModel<2>& fault) {
        const auto t0 = Clock::now();
        auto mesh = std::make_shared<const StructuredMesh<2>>(lo, hi, counts);
        auto space = std::make_shared<const FeSpace<2>>(mesh, order);
        const auto system = build_fe_system<2>(space, mat);
        const auto segs = segment_fault(*mesh, fault);
        const auto rhs = wsm_rhs(system, fault, segs, mat);
        const std::vector<double> g(space->num_dofs(), 0.0);
        (void)solve(system, rhs, g);
        return ms_since(t0);
    };

    const auto t0 = Clock::now();
    auto mesh = std::make_shared<const StructuredMesh<2>>(lo, hi, counts);
    auto space = std::make_shared<const FeSpace<2>>(mesh, order);
    const auto system = build_fe_system<2>(space, mat);
    report.assembly_ms = ms_since(t0);
    const std::vector<double> g(space->num_dofs(), 0.0);

    report.shared_stiffness = true;
    double total = report.assembly_ms;
    for (int k = 0; k < faults; ++k) {
        auto& e = report.faults[k];
        e.reuse_ms = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < repeats; ++rep) {
            const auto t1 = Clock::now();
            const auto segs = segment_fault(*mesh, models[k]);
            const auto rhs = wsm_rhs(system, models[k], segs, mat);
            const double rhs_ms = ms_since(t1);
            const auto res = solve(system, rhs, g);
            const double whole = ms_since(t1);
            if (whole < e.reuse_ms) {
                e.reuse_ms = whole;
                e.rhs_ms = rhs_ms;
                e.solve_ms = res.report.solve_ms;
            }
            e.segments = static_cast<int>(segs.size());
            e.iterations = res.report.iterations;
        }
        e.cold_ms = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < repeats; ++rep) e.cold_ms = std::min(e.cold_ms, cold_run(models[k]));
        e.assembly_reused = k > 0;
        e.stiffness = system.stiffness.get();
        if (e.stiffness != report.faults[0].stiffness) report.shared_stiffness = false;
        total += e.reuse_ms;
        report.total_cold_ms += e.cold_ms;
    }
    report.total_reuse_ms = total;
    return report;
}

void print_reuse_report(std::ostream& os, const ReuseReport& r) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "mesh %dx%d  p=%d  shared assembly %.2f ms  (fastest of %d runs)\n", r.counts[0],
                  r.counts[1], r.order, r.assembly_ms, r.repeats);
    os << buf;
    os << "fault  angle   center_x  center_y  segments  rhs_ms   solve_ms  reuse_ms  cold_ms   cg_iters  "
          "assembly_reused\n";
    for (std::size_t k = 0; k < r.faults.size(); ++k) {
        const auto& e = r.faults[k];
        std::snprintf(buf, sizeof buf, "%5zu  %6.3f  %8.4f  %8.4f  %8d  %7.2f  %8.2f  %8.2f  %8.2f  %8d  %s\n", k,
                      e.angle, e.center[0], e.center[1], e.segments, e.rhs_ms, e.solve_ms, e.reuse_ms, e.cold_ms,
                      e.iterations, e.assembly_reused ? "true" : "false");
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "total with reuse %.2f ms  vs %zu cold runs %.2f ms  shared stiffness: %s\n",
                  r.total_reuse_ms, r.faults.size(), r.total_cold_ms, r.shared_stiffness ? "yes" : "no");
    os << buf;
}

}  // namespace wsm

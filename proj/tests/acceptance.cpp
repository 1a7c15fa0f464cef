// Acceptance suite: one PASS/FAIL line per criterion, details indented below.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "wsm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

using namespace wsm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

doctest::TestRunStats g_last_run{};

struct RunStatsListener : doctest::IReporter {
    explicit RunStatsListener(const doctest::ContextOptions&) {}
    void report_query(const doctest::QueryData&) override {}
    void test_run_start() override {}
    void test_run_end(const doctest::TestRunStats& s) override { g_last_run = s; }
    void test_case_start(const doctest::TestCaseData&) override {}
    void test_case_reenter(const doctest::TestCaseData&) override {}
    void test_case_end(const doctest::CurrentTestCaseStats&) override {}
    void test_case_exception(const doctest::TestCaseException&) override {}
    void subcase_start(const doctest::SubcaseSignature&) override {}
    void subcase_end() override {}
    void log_assert(const doctest::AssertData&) override {}
    void log_message(const doctest::MessageData&) override {}
    void test_case_skipped(const doctest::TestCaseData&) override {}
};

REGISTER_LISTENER("run_stats", 1, RunStatsListener);

struct Criterion {
    explicit Criterion(std::string n) : name(std::move(n)) {}

    std::string name;
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what) {
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        pass = pass && ok;
    }
    void note(const std::string& what) { details.push_back("     " + what); }
};

std::string format(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

void slope(Criterion& c, const std::string& label, const std::vector<ErrorReport>& reports, auto metric, double lo,
           double hi) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& r : reports) pairs.push_back({r.h, metric(r)});
    const auto fit = fit_rate(pairs, label);
    c.check(fit.slope >= lo && fit.slope <= hi,
            format("%-28s slope %7.3f in [%.2f, %.2f] (r2 %.3f)", label.c_str(), fit.slope, lo, hi, fit.r2));
}

bool any_failed(Criterion& c, const std::vector<ErrorReport>& reports) {
    bool failed = false;
    for (const auto& r : reports)
        if (r.failed) {
            c.check(false, format("level N=%d solver failure: %s", r.counts[0], r.failure.c_str()));
            failed = true;
        }
    return failed;
}

auto l2g = [](const ErrorReport& r) { return r.norms.l2_global; };
auto h1g = [](const ErrorReport& r) { return r.norms.h1_global; };
auto l2l = [](const ErrorReport& r) { return r.norms.l2_local; };
auto h1l = [](const ErrorReport& r) { return r.norms.h1_local; };
auto sg = [](const ErrorReport& r) { return r.norms.l2_surf_global.value_or(0.0); };
auto sl = [](const ErrorReport& r) { return r.norms.l2_surf_local.value_or(0.0); };

void print_levels(Criterion& c, const std::vector<ErrorReport>& reports, bool surface) {
    for (const auto& r : reports) {
        std::string line = format("N=%-4d h=%.4e l2g=%.4e h1g=%.4e l2l=%.4e h1l=%.4e", r.counts[0], r.h,
                                  r.norms.l2_global, r.norms.h1_global, r.norms.l2_local, r.norms.h1_local);
        if (surface) line += format(" surf_g=%.4e surf_l=%.4e", sg(r), sl(r));
        c.note(line);
    }
}

Criterion case_i_rates(std::vector<LevelSolution<2>>& keep_p1, std::vector<LevelSolution<2>>& keep_p2,
                       std::vector<ErrorReport>& p2_reports) {
    Criterion c{"Test case I convergence rates (p=1,2; N=4..128)"};
    const auto t0 = Clock::now();
    const auto cs = make_case_i();
    const std::vector<int> counts{4, 8, 16, 32, 64, 128};
    for (int p : {1, 2}) {
        RunOptions opts;
        opts.order = p;
        opts.counts = counts;
        std::vector<ErrorReport> reports;
        auto& keep = p == 1 ? keep_p1 : keep_p2;
        for (int n : counts) {
            LevelSolution<2> sol;
            reports.push_back(run_case_i_level(cs, p, n, opts, &sol));
            keep.push_back(std::move(sol));
        }
        if (any_failed(c, reports)) continue;
        print_levels(c, reports, false);
        const std::string tag = "p=" + std::to_string(p) + " ";
        slope(c, tag + "global L2", reports, l2g, 0.35, 0.65);
        slope(c, tag + "global H1", reports, h1g, -0.65, -0.35);
        if (p == 1) {
            slope(c, tag + "local H1", reports, h1l, 0.8, 1.2);
            slope(c, tag + "local L2", reports, l2l, 1.8, 2.2);
        } else {
            slope(c, tag + "local H1", reports, h1l, 1.7, 2.3);
            slope(c, tag + "local L2", reports, l2l, 2.7, 3.3);
            p2_reports = reports;
        }
    }
    const double secs = seconds_since(t0);
    c.check(secs < 180.0, format("runtime %.1f s < 180 s", secs));
    return c;
}

Criterion case_i_pointwise(const std::vector<LevelSolution<2>>& p1, const std::vector<LevelSolution<2>>& p2) {
    Criterion c{"Test case I pointwise error at the dislocation midpoint (N>=16)"};
    const auto cs = make_case_i();
    const ExactField<2> exact = [&cs](const Vec<2>& x, Side s) { return eval_planestrain_gradient(cs.exact, x, s); };
    const Vec<2> mid = cs.fault.point({0.0});
    for (const auto* levels : {&p1, &p2}) {
        for (Side side : {Side::Plus, Side::Minus}) {
            std::vector<double> errs;
            std::string line;
            for (const auto& sol : *levels) {
                if (!sol.space || sol.space->mesh().counts()[0] < 16) continue;
                const double e = pointwise_error<2>(*sol.space, sol.u, exact, mid, side);
                errs.push_back(e);
                line += format(" N=%d:%.5f", sol.space->mesh().counts()[0], e);
            }
            if (errs.empty()) {
                c.check(false, "no levels with N >= 16");
                continue;
            }
            const int p = levels->front().space->order();
            const char* sname = side == Side::Plus ? "plus" : "minus";
            c.note(format("p=%d %s side:", p, sname) + line);
            const auto [mn, mx] = std::minmax_element(errs.begin(), errs.end());
            double mean = 0.0;
            for (double e : errs) mean += e;
            mean /= errs.size();
            c.check(*mn >= 0.04 && *mx <= 0.06, format("p=%d %s side: all errors in [0.04, 0.06]", p, sname));
            c.check((*mx - *mn) / mean < 0.15,
                    format("p=%d %s side: spread %.2e%% < 15%%", p, sname, 100.0 * (*mx - *mn) / mean));
        }
    }
    return c;
}

Criterion halfspace_rates(CaseId id) {
    const bool buried = id == CaseId::II;
    Criterion c{buried ? "Test case II convergence rates (p=1; N=8,16,32)"
                       : "Test case III surface convergence rates (p=1; N=8,16,32)"};
    const auto t0 = Clock::now();
    RunOptions opts;
    opts.case_id = id;
    opts.order = 1;
    opts.counts = {8, 16, 32};
    const auto reports = run_case(opts);
    const double secs = seconds_since(t0);
    if (any_failed(c, reports)) return c;
    print_levels(c, reports, true);
    if (buried) {
        slope(c, "global L2", reports, l2g, 0.3, 0.7);
        slope(c, "local H1", reports, h1l, 0.75, 1.25);
        slope(c, "local L2", reports, l2l, 1.7, 2.3);
        slope(c, "surface L2", reports, sg, 1.7, 2.3);
        slope(c, "surface L2 outside exclusion", reports, sl, 1.7, 2.3);
        c.check(secs < 900.0, format("runtime %.1f s < 900 s", secs));
    } else {
        slope(c, "global surface L2", reports, sg, 0.35, 0.65);
        slope(c, "local surface L2", reports, sl, 1.7, 2.3);
        c.note(format("runtime %.1f s", secs));
    }
    return c;
}

Criterion reuse_contract() {
    Criterion c{"Reuse contract: one stiffness for many faults"};
    const auto mat = IsotropicElasticity::make(1.0, 1.0, 2);
    auto mesh = std::make_shared<const StructuredMesh<2>>(Vec<2>{-1.0, -1.0}, Vec<2>{1.0, 1.0}, std::array<int, 2>{32, 32});
    auto space = std::make_shared<const FeSpace<2>>(mesh, 1);
    const auto system = build_fe_system<2>(space, mat);
    const SparseSymMatrix* before = system.stiffness.get();
    const auto values = system.stiffness->values();

    auto a = make_case_i().fault;
    auto b = a;
    b.origin = {0.2, -0.1};
    b.axes = {Vec<2>{0.0, 1.0}};
    b.normal = {1.0, 0.0};
    const auto ra = wsm_rhs(system, a, segment_fault(*mesh, a), mat);
    const auto rb = wsm_rhs(system, b, segment_fault(*mesh, b), mat);
    c.check(ra != rb, "two distinct faults give distinct loads");
    c.check(system.stiffness.get() == before, "both faults use the same stiffness object");
    c.check(system.stiffness->values() == values, "stiffness untouched by the fault loads");
    c.check(assemble_stiffness<2>(*space, mat) == *system.stiffness, "independent reassembly is bit identical");

    const auto r = reuse_demo(32, 1, 6, 2024, 3);
    c.check(r.shared_stiffness, "reuse_demo used one stiffness object for every fault");
    bool flags = !r.faults.front().assembly_reused;
    for (std::size_t k = 1; k < r.faults.size(); ++k) flags = flags && r.faults[k].assembly_reused;
    c.check(flags, "assembly_reused is false for the first fault only");
    c.note(format("mesh %dx%d p=%d, shared assembly %.2f ms, fastest of %d runs", r.counts[0], r.counts[1], r.order,
                  r.assembly_ms, r.repeats));
    for (std::size_t k = 1; k < r.faults.size(); ++k) {
        const auto& e = r.faults[k];
        c.check(e.reuse_ms < e.cold_ms,
                format("fault %zu: reuse %.2f ms (%d CG its) < cold run %.2f ms", k, e.reuse_ms, e.iterations, e.cold_ms));
    }
    return c;
}

bool run_doctest(Criterion& c, const std::string& filter, const std::string& label) {
    doctest::Context ctx;
    ctx.setOption("test-case", filter.c_str());
    ctx.setOption("no-intro", true);
    ctx.setOption("no-version", true);
    ctx.setOption("minimal", true);
    g_last_run = {};
    const int rc = ctx.run();
    const bool ok = rc == 0 && g_last_run.numTestCasesPassingFilters > 0 && g_last_run.numTestCasesFailed == 0;
    c.check(ok, format("%-48s %u case(s), %d assertion(s)", label.c_str(), g_last_run.numTestCasesPassingFilters,
                       g_last_run.numAsserts));
    return ok;
}

Criterion oracle_suites() {
    Criterion c{"Oracle suites"};
    run_doctest(c, "stiffness matches a dense reference assembly*", "dense assembly on 2x2 elements (1e-12)");
    run_doctest(c, "patch test with a linear field*", "patch test, linear exact field (1e-10)");
    run_doctest(c, "load vector matches a face-by-face oracle", "load vector vs face-loop oracle (1e-12)");
    run_doctest(c, "plane-strain jump reproduces the slip profile", "plane-strain jump equals slip (1e-4)");
    run_doctest(c, "half-space jump across the patch equals the slip", "half-space jump equals slip (1e-4)");
    run_doctest(c, "plane-strain field is in equilibrium", "plane-strain equilibrium residual order 2");
    run_doctest(c, "half-space field is in equilibrium", "half-space equilibrium residual order 2");
    return c;
}

void report(const Criterion& c) {
    std::printf("%s  %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str());
    for (const auto& d : c.details) std::printf("      %s\n", d.c_str());
    std::fflush(stdout);
}

void p2_fine_note(const std::vector<ErrorReport>& p2) {
    const auto cs = make_case_i();
    RunOptions opts;
    opts.order = 2;
    std::vector<ErrorReport> levels;
    for (const auto& r : p2)
        if (r.counts[0] >= 64) levels.push_back(r);
    levels.push_back(run_case_i_level(cs, 2, 256, opts));
    if (levels.size() < 3 || levels.back().failed) return;
    const auto fit = [&](auto metric) {
        std::vector<std::pair<double, double>> pairs;
        for (const auto& r : levels) pairs.push_back({r.h, metric(r)});
        return fit_rate(pairs).slope;
    };
    std::printf("INFO  Test case I p=2 on N=64..256: local L2 slope %.3f, local H1 slope %.3f\n", fit(l2l), fit(h1l));
}

}  // namespace

int main(int argc, char** argv) {
    bool fine = true;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--no-fine") fine = false;

    std::vector<Criterion> results;
    std::vector<LevelSolution<2>> p1, p2;
    std::vector<ErrorReport> p2_reports;

    results.push_back(case_i_rates(p1, p2, p2_reports));
    report(results.back());
    results.push_back(case_i_pointwise(p1, p2));
    report(results.back());
    p1.clear();
    p2.clear();
    results.push_back(halfspace_rates(CaseId::II));
    report(results.back());
    results.push_back(halfspace_rates(CaseId::III));
    report(results.back());
    results.push_back(reuse_contract());
    report(results.back());
    results.push_back(oracle_suites());
    report(results.back());
    if (fine && !p2_reports.empty()) p2_fine_note(p2_reports);

    const auto failed = std::count_if(results.begin(), results.end(), [](const Criterion& c) { return !c.pass; });
    std::printf("%zu of %zu criteria passed\n", results.size() - failed, results.size());
    return failed == 0 ? 0 : 1;
}

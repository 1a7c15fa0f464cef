#include "test_util.hpp"
#include "wsm/harness.hpp"

#include <doctest.h>

#include <sstream>

using namespace wsm;

namespace {

std::string csv_of(const std::vector<ErrorReport>& reports) {
    std::ostringstream os;
    write_csv_header(os);
    for (const auto& r : reports) write_csv_row(os, r);
    return os.str();
}

RunOptions case_i(int order, std::vector<int> counts) {
    RunOptions o;
    o.case_id = CaseId::I;
    o.order = order;
    o.counts = std::move(counts);
    return o;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("case names") {
    CHECK(parse_case("I") == CaseId::I);
    CHECK(parse_case("II") == CaseId::II);
    CHECK(parse_case("III") == CaseId::III);
    CHECK_THROWS_AS(parse_case("IV"), std::invalid_argument);
    CHECK_THROWS_AS(parse_case("i"), std::invalid_argument);
    for (auto id : {CaseId::I, CaseId::II, CaseId::III}) CHECK(parse_case(to_string(id)) == id);
    CHECK(case_dim(CaseId::I) == 2);
    CHECK(case_dim(CaseId::III) == 3);
}

TEST_CASE("plane-strain level reports consistent norms") {
    const auto reports = run_case(case_i(1, {16}));
    REQUIRE(reports.size() == 1);
    const auto& r = reports[0];
    CHECK_FALSE(r.failed);
    CHECK(r.norms.l2_global > r.norms.l2_local);
    CHECK(r.norms.h1_global > r.norms.h1_local);
    CHECK(r.norms.l2_local > 0.0);
    CHECK_FALSE(r.norms.l2_surf_global.has_value());
    CHECK(r.counts == std::array<int, 3>{16, 16, 0});
    const StructuredMesh<2> mesh({-1.0, -1.0}, {1.0, 1.0}, {16, 16});
    CHECK(r.h == mesh_size(mesh));
    CHECK(r.slip_norm > 0.0);
    CHECK(r.solve.iterations > 0);
    CHECK(r.solve.final_relative_residual <= kDefaultCgTolerance);
    CHECK_FALSE(r.assembly_reused);
}

TEST_CASE("run options are validated") {
    CHECK_THROWS_AS(run_case(case_i(3, {4})), std::invalid_argument);
    CHECK_THROWS_AS(run_case(case_i(1, {})), std::invalid_argument);
    RunOptions o;
    o.case_id = CaseId::II;
    o.counts = {3};
    CHECK_THROWS_AS(run_case(o), std::invalid_argument);
}

TEST_CASE("CSV layout") {
    std::ostringstream os;
    write_csv_header(os);
    CHECK(os.str() ==
          "case,p,nx,ny,nz,h,l2_global,h1_global,l2_local,h1_local,l2_surf_global,l2_surf_local,slip_norm,cg_iters,"
          "cg_residual,assemble_ms,solve_ms,assembly_reused\n");
    std::istringstream is(csv_of(run_case(case_i(1, {4, 8}))));
    const auto t = read_csv(is);
    REQUIRE(t.rows.size() == 2);
    for (const auto& row : t.rows) {
        CHECK(row.fields[t.column("case")] == "I");
        CHECK(row.fields[t.column("nz")].empty());
        CHECK(row.fields[t.column("l2_surf_global")].empty());
        CHECK(row.fields[t.column("assembly_reused")] == "false");
        CHECK(row.fields[t.column("l2_global")].find('e') != std::string::npos);
    }
    CHECK(t.rows[1].fields[t.column("nx")] == "8");
    CHECK_THROWS_AS(t.column("nope"), std::invalid_argument);
}

TEST_CASE("CSV output is deterministic apart from timings") {
    const auto a = csv_of(run_case(case_i(2, {4, 8})));
    const auto b = csv_of(run_case(case_i(2, {4, 8})));
    std::istringstream ia(a), ib(b);
    const auto ta = read_csv(ia), tb = read_csv(ib);
    REQUIRE(ta.rows.size() == tb.rows.size());
    for (std::size_t r = 0; r < ta.rows.size(); ++r)
        for (std::size_t c = 0; c < ta.header.size(); ++c) {
            if (ta.header[c] == "assemble_ms" || ta.header[c] == "solve_ms") continue;
            CHECK(ta.rows[r].fields[c] == tb.rows[r].fields[c]);
        }
}

TEST_CASE("CSV round trip through the rate fit") {
    const auto reports = run_case(case_i(1, {4, 8, 16}));
    std::istringstream is(csv_of(reports));
    const auto t = read_csv(is);
    const auto fits = fit_table(t, "l2_local");
    REQUIRE(fits.size() == 1);
    CHECK(fits[0].case_name == "I");
    CHECK(fits[0].order == 1);
    std::vector<std::pair<double, double>> direct;
    for (const auto& r : reports) direct.push_back({r.h, r.norms.l2_local});
    CHECK(fits[0].fit.slope == doctest::Approx(fit_rate(direct).slope).epsilon(1e-6));
    CHECK_THROWS_AS(fit_table(t, "l3_global"), std::invalid_argument);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), std::invalid_argument);
    std::istringstream ragged("a,b\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(ragged), std::invalid_argument);
}

TEST_CASE("solver failures are recorded, not thrown") {
    auto o = case_i(1, {8});
    o.max_iterations = 1;
    std::vector<ErrorReport> reports;
    REQUIRE_NOTHROW(reports = run_case(o));
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].failed);
    CHECK_FALSE(reports[0].failure.empty());
    std::istringstream is(csv_of(reports));
    const auto t = read_csv(is);
    for (const char* col : {"l2_global", "h1_global", "l2_local", "h1_local"})
        CHECK(t.rows[0].fields[t.column(col)].empty());
    CHECK(t.rows[0].fields[t.column("cg_iters")] == "1");
    CHECK(fit_table(t, "l2_global").empty());
}

TEST_CASE("repeated solves are bit identical") {
    const auto c = make_case_i();
    const auto o = case_i(2, {8});
    LevelSolution<2> a, b;
    run_case_i_level(c, 2, 8, o, &a);
    run_case_i_level(c, 2, 8, o, &b);
    CHECK(a.u == b.u);
}

TEST_CASE("discrete plane-strain solution is odd under a half turn") {
    const auto c = make_case_i();
    LevelSolution<2> sol;
    const auto r = run_case_i_level(c, 1, 16, case_i(1, {16}), &sol);
    const std::vector<Vec<2>> pts{{0.7, 0.1}, {-0.3, 0.8}, {0.9, -0.9}, {0.05, 0.6},
                                  {-0.8, 0.2}, {0.4, -0.5}, {0.33, 0.91}, {-0.12, -0.77}};
    for (const auto& x : pts) {
        REQUIRE(c.fault.distance_to_dislocation(x) > 0.1);
        const auto up = sol.space->evaluate_at(sol.u, x);
        const auto um = sol.space->evaluate_at(sol.u, -1.0 * x);
        CHECK(norm(up + um) <= 3.0 * r.norms.l2_local);
    }
}

TEST_CASE("reuse demo shares one stiffness") {
    const auto r = reuse_demo(8, 1, 3, 11);
    CHECK(r.shared_stiffness);
    REQUIRE(r.faults.size() == 3);
    CHECK_FALSE(r.faults[0].assembly_reused);
    CHECK(r.faults[1].assembly_reused);
    CHECK(r.faults[2].assembly_reused);
    for (const auto& f : r.faults) {
        CHECK(f.stiffness == r.faults[0].stiffness);
        CHECK(f.segments > 0);
        CHECK(f.angle >= 0.0);
        CHECK(f.angle < std::numbers::pi);
        CHECK(std::abs(f.center[0]) <= 0.3);
    }
    const auto again = reuse_demo(8, 1, 3, 11);
    CHECK(again.faults[2].angle == r.faults[2].angle);
    CHECK(again.faults[2].iterations == r.faults[2].iterations);
    std::ostringstream os;
    print_reuse_report(os, r);
    CHECK(os.str().find("shared stiffness: yes") != std::string::npos);
    CHECK_THROWS_AS(reuse_demo(8, 1, 1, 11), std::invalid_argument);
}

}

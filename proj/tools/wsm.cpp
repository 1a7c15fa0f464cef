// Command-line driver: convergence runs, rate fits and the reuse demo.
#include "wsm/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<int> parse_counts(const std::string& text) {
    std::vector<int> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        const int n = std::stoi(item, &pos);
        if (pos != item.size() || n < 1) throw std::invalid_argument("bad mesh count '" + item + "'");
        out.push_back(n);
    }
    if (out.empty()) throw std::invalid_argument("no mesh counts given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weakly-enforced slip method for Volterra dislocation problems"};
    app.require_subcommand(1);

    std::string case_name = "I", counts_text = "4,8,16,32", out_path, pc_name = "jacobi";
    int order = 1;
    double exclusion = 0.1;
    auto* run = app.add_subcommand("run", "Solve a benchmark on a mesh sequence and write error norms as CSV");
    run->add_option("--case", case_name, "Benchmark: I, II or III")->check(CLI::IsMember({"I", "II", "III"}));
    run->add_option("--order", order, "Polynomial order")->check(CLI::IsMember({1, 2}));
    run->add_option("--counts", counts_text, "Comma-separated refinement parameters N");
    run->add_option("--exclusion", exclusion, "Radius around the dislocation left out of local norms")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--out", out_path, "CSV output file (default: stdout)");
    run->add_option("--preconditioner", pc_name, "jacobi or sgs")->check(CLI::IsMember({"jacobi", "sgs"}));

    std::string in_path, metric = "l2_local";
    auto* rates = app.add_subcommand("rates", "Fit convergence rates from a results CSV");
    rates->add_option("--in", in_path, "Results CSV")->required();
    rates->add_option("--metric", metric, "Error column to fit");

    int demo_n = 32, demo_order = 1, demo_faults = 10, demo_repeats = 3;
    std::uint64_t seed = 42;
    auto* demo = app.add_subcommand("reuse-demo", "Solve several faults on one assembled system");
    demo->add_option("--counts", demo_n, "Elements per axis")->check(CLI::PositiveNumber);
    demo->add_option("--order", demo_order, "Polynomial order")->check(CLI::IsMember({1, 2}));
    demo->add_option("--faults", demo_faults, "Number of random faults")->check(CLI::Range(2, 100000));
    demo->add_option("--seed", seed, "Random seed");
    demo->add_option("--repeats", demo_repeats, "Timed runs per measurement; the fastest is kept")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            wsm::RunOptions opts;
            opts.case_id = wsm::parse_case(case_name);
            opts.order = order;
            opts.counts = parse_counts(counts_text);
            opts.exclusion_radius = exclusion;
            opts.preconditioner =
                pc_name == "sgs" ? wsm::PreconditionerKind::SymmetricGaussSeidel : wsm::PreconditionerKind::Jacobi;
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) throw std::runtime_error("cannot open " + out_path);
            }
            std::ostream& os = out_path.empty() ? std::cout : file;
            wsm::write_csv_header(os);
            bool failed = false;
            for (int n : opts.counts) {
                auto one = opts;
                one.counts = {n};
                const auto rows = wsm::run_case(one);
                for (const auto& r : rows) {
                    wsm::write_csv_row(os, r);
                    os.flush();
                    if (r.failed) {
                        std::cerr << "solver failure at N=" << n << ": " << r.failure << '\n';
                        failed = true;
                    }
                }
                if (failed) break;
            }
            return failed ? 2 : 0;
        }
        if (*rates) {
            std::ifstream file(in_path);
            if (!file) throw std::runtime_error("cannot open " + in_path);
            const auto table = wsm::read_csv(file);
            for (const auto& g : wsm::fit_table(table, metric)) {
                std::printf("case=%s p=%d metric=%s points=%zu slope=%.4f r2=%.4f\n", g.case_name.c_str(), g.order,
                            metric.c_str(), g.fit.pairs.size(), g.fit.slope, g.fit.r2);
            }
            return 0;
        }
        if (*demo) {
            const auto report = wsm::reuse_demo(demo_n, demo_order, demo_faults, seed, demo_repeats);
            wsm::print_reuse_report(std::cout, report);
            return report.shared_stiffness ? 0 : 3;
        }
    } catch (const wsm::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

// Benchmark runner for the Braun heap and the locked-array baseline.
//
// Single config:
//   braun_bench --task mixed --structure braun --threads 4 [--init-size N]
//               [--ops N] [--warmup N] [--runs N] [--seed N] [--out file.csv]
// Matrix sweep (one key=value config per line):
//   braun_bench --sweep matrix.txt [--out file.csv]
//
// Exits 0 on success, 2 on a configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "braun/bench/bench.hpp"

namespace bench = braun::bench;

int main(int argc, char** argv) {
    CLI::App app{"Concurrent Braun heap benchmark"};

    std::string task_name;
    std::string structure_name;
    bench::BenchConfig cfg;
    std::string out_path;
    std::string sweep_path;

    app.add_option("--task", task_name,
                   "sum | snap-insert | mixed | snap-only | insert | remove-min");
    app.add_option("--structure", structure_name, "braun | locked-array");
    app.add_option("--threads", cfg.threads, "worker thread count")->capture_default_str();
    app.add_option("--init-size", cfg.init_size, "initial heap size")->capture_default_str();
    app.add_option("--ops", cfg.total_ops, "total operations, split across threads")
        ->capture_default_str();
    app.add_option("--warmup", cfg.warmup_runs, "discarded warmup runs")->capture_default_str();
    app.add_option("--runs", cfg.measured_runs, "measured runs")->capture_default_str();
    app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app.add_option("--out", out_path, "write CSV here instead of stdout");
    app.add_option("--sweep", sweep_path, "matrix file: one key=value config per line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::vector<bench::BenchResult> results;
        if (!sweep_path.empty()) {
            std::ifstream matrix(sweep_path);
            if (!matrix) {
                std::cerr << "error: cannot open matrix file '" << sweep_path << "'\n";
                return 2;
            }
            results = bench::sweep(bench::parse_matrix(matrix), &std::cerr);
        } else {
            if (task_name.empty() || structure_name.empty()) {
                std::cerr << "error: --task and --structure are required without --sweep\n";
                return 2;
            }
            auto task = bench::task_from_string(task_name);
            if (!task) {
                std::cerr << "error: unknown task '" << task_name << "'\n";
                return 2;
            }
            auto structure = bench::structure_from_string(structure_name);
            if (!structure) {
                std::cerr << "error: unknown structure '" << structure_name << "'\n";
                return 2;
            }
            cfg.task = *task;
            cfg.structure = *structure;
            if (auto err = cfg.validation_error()) {
                std::cerr << "error: " << *err << "\n";
                return 2;
            }
            results = bench::sweep({cfg}, &std::cerr);
        }

        std::string csv = bench::emit_csv(results);
        if (out_path.empty()) {
            std::cout << csv;
        } else {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot write '" << out_path << "'\n";
                return 2;
            }
            out << csv;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

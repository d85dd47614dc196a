#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "braun/bench/bench.hpp"

using namespace braun::bench;

namespace {

BenchConfig small_config(Task task, Structure structure, int threads) {
    BenchConfig cfg;
    cfg.task = task;
    cfg.structure = structure;
    cfg.threads = threads;
    cfg.init_size = 512;
    cfg.total_ops = 168;
    cfg.warmup_runs = 1;
    cfg.measured_runs = 2;
    cfg.seed = 7;
    return cfg;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) {
        if (c == '\n') ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("config validation") {
    BenchConfig cfg = small_config(Task::insert, Structure::braun, 4);
    REQUIRE_FALSE(cfg.validation_error().has_value());

    cfg.total_ops = 170;  // not divisible by 4
    REQUIRE(cfg.validation_error().has_value());
    REQUIRE_THROWS_AS(run_task(cfg), std::invalid_argument);

    cfg = small_config(Task::insert, Structure::braun, 0);
    REQUIRE(cfg.validation_error().has_value());

    cfg = small_config(Task::insert, Structure::braun, 1);
    cfg.init_size = 0;
    REQUIRE(cfg.validation_error().has_value());
}

TEST_CASE("insert task conserves the multiset size") {
    for (Structure s : {Structure::braun, Structure::locked_array}) {
        auto cfg = small_config(Task::insert, s, 2);
        auto result = run_task(cfg);
        REQUIRE(result.final_size == cfg.init_size + cfg.total_ops);
        REQUIRE(result.per_run_ms.size() == 2);
    }
}

TEST_CASE("remove-min task shrinks the multiset") {
    auto cfg = small_config(Task::remove_min, Structure::braun, 2);
    auto result = run_task(cfg);
    REQUIRE(result.final_size == cfg.init_size - cfg.total_ops);
}

TEST_CASE("snapshot tasks run and dispose their snapshots") {
    for (Structure s : {Structure::braun, Structure::locked_array}) {
        auto snap_only = run_task(small_config(Task::snap_only, s, 2));
        REQUIRE(snap_only.final_size == 512);
        auto snap_insert = run_task(small_config(Task::snap_insert, s, 2));
        REQUIRE(snap_insert.final_size == 512 + 168);
    }
}

TEST_CASE("sum and mixed tasks complete on both structures") {
    for (Structure s : {Structure::braun, Structure::locked_array}) {
        REQUIRE(run_task(small_config(Task::sum, s, 2)).per_run_ms.size() == 2);
        REQUIRE(run_task(small_config(Task::mixed, s, 2)).op_mix.total() == 2 * 168);
    }
}

TEST_CASE("mixed op mix approaches 3/8 + 3/8 + 1/4") {
    auto cfg = small_config(Task::mixed, Structure::braun, 4);
    cfg.total_ops = 1344;
    cfg.init_size = 2048;
    cfg.warmup_runs = 0;
    cfg.measured_runs = 10;
    auto result = run_task(cfg);
    auto total = static_cast<double>(result.op_mix.total());
    REQUIRE(result.op_mix.total() == 1344u * 10u);
    CHECK(std::abs(result.op_mix.inserts / total - 0.375) < 0.02);
    CHECK(std::abs(result.op_mix.removes / total - 0.375) < 0.02);
    CHECK(std::abs(result.op_mix.sums / total - 0.25) < 0.02);
}

TEST_CASE("identical seeds give identical op streams") {
    auto cfg = small_config(Task::mixed, Structure::braun, 2);
    auto a = run_task(cfg);
    auto b = run_task(cfg);
    REQUIRE(a.op_mix.inserts == b.op_mix.inserts);
    REQUIRE(a.op_mix.removes == b.op_mix.removes);
    REQUIRE(a.op_mix.sums == b.op_mix.sums);
    REQUIRE(a.final_size == b.final_size);
}

TEST_CASE("emit_csv") {
    SECTION("empty result set is just the header") {
        REQUIRE(emit_csv({}) == "task,structure,threads,init_size,mean_ms,std_ms\n");
    }
    SECTION("one result yields two lines") {
        BenchResult r;
        r.config = small_config(Task::insert, Structure::braun, 2);
        r.mean_ms = 1.5;
        REQUIRE(count_lines(emit_csv({r})) == 2);
    }
    SECTION("full matrix yields 49 lines sorted by task, structure, threads") {
        std::vector<BenchResult> results;
        for (int threads : {8, 4, 2, 1}) {  // scrambled on purpose
            for (Structure s : {Structure::locked_array, Structure::braun}) {
                for (Task t : {Task::remove_min, Task::insert, Task::snap_only, Task::mixed,
                               Task::snap_insert, Task::sum}) {
                    BenchResult r;
                    r.config = small_config(t, s, threads);
                    results.push_back(r);
                }
            }
        }
        std::string csv = emit_csv(results);
        REQUIRE(count_lines(csv) == 49);
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        REQUIRE(line == "task,structure,threads,init_size,mean_ms,std_ms");
        std::getline(in, line);
        REQUIRE(line.rfind("sum,braun,1,", 0) == 0);
    }
}

TEST_CASE("matrix parsing") {
    SECTION("valid file") {
        std::istringstream in(
            "# comment line\n"
            "task=mixed structure=braun threads=2 init-size=64 ops=32 warmup=0 runs=1\n"
            "\n"
            "task=sum structure=locked-array threads=1 init-size=16 runs=2 seed=9\n");
        auto configs = parse_matrix(in);
        REQUIRE(configs.size() == 2);
        REQUIRE(configs[0].task == Task::mixed);
        REQUIRE(configs[0].init_size == 64);
        REQUIRE(configs[1].structure == Structure::locked_array);
        REQUIRE(configs[1].seed == 9);
        REQUIRE(configs[1].total_ops == 1344);  // default preserved
    }
    SECTION("bad key, bad value, bad config") {
        std::istringstream bad_key("task=sum structure=braun frobs=2\n");
        REQUIRE_THROWS_AS(parse_matrix(bad_key), std::invalid_argument);
        std::istringstream bad_value("task=frobnicate structure=braun\n");
        REQUIRE_THROWS_AS(parse_matrix(bad_value), std::invalid_argument);
        std::istringstream bad_config("task=sum structure=braun threads=5 ops=1344\n");
        REQUIRE_THROWS_AS(parse_matrix(bad_config), std::invalid_argument);
    }
}

TEST_CASE("sweep dedupes repeated configs and reports progress") {
    auto cfg = small_config(Task::insert, Structure::braun, 1);
    std::ostringstream progress;
    auto results = sweep({cfg, cfg, cfg}, &progress);
    REQUIRE(results.size() == 1);
    REQUIRE(progress.str().find("[1/1]") != std::string::npos);
}

TEST_CASE("small default-shaped sweep emits valid CSV") {
    std::vector<BenchConfig> matrix;
    for (Task t : {Task::sum, Task::snap_insert, Task::mixed, Task::snap_only, Task::insert,
                   Task::remove_min}) {
        for (Structure s : {Structure::braun, Structure::locked_array}) {
            for (int threads : {1, 2}) {
                BenchConfig cfg = small_config(t, s, threads);
                cfg.init_size = 256;
                cfg.total_ops = 64;
                cfg.warmup_runs = 0;
                cfg.measured_runs = 1;
                matrix.push_back(cfg);
            }
        }
    }
    auto results = sweep(matrix, nullptr);
    REQUIRE(results.size() == matrix.size());
    std::string csv = emit_csv(results);
    REQUIRE(count_lines(csv) == static_cast<int>(matrix.size()) + 1);
}

// Runs every shipped experiment config and prints one PASS/FAIL line per
// acceptance criterion. Usage: erps_acceptance <configs-dir> <output-dir>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "runner.hpp"

namespace fs = std::filesystem;
using erps::runner::catalog;

namespace {

struct Criterion {
    const char* title;
    double time_limit_s;
    std::size_t n_checks = 0;
    std::size_t n_failed = 0;
    double seconds = 0.0;
    std::vector<std::string> problems;
};

std::map<int, Criterion> criteria() {
    return {
        {1, {"optical equivalence", 300.0}},   {2, {"Born rule", 120.0}},
        {3, {"Fisher/MS-error identity", 120.0}}, {4, {"Gaussian saturation", 120.0}},
        {5, {"per-xi momentum Cramer-Rao", 120.0}}, {6, {"variance decomposition", 120.0}},
        {7, {"uncertainty relations", 120.0}}, {8, {"weak-value identities", 120.0}},
        {9, {"dynamics", 120.0}},              {10, {"superposition", 120.0}},
        {11, {"measurement", 600.0}},          {12, {"preparation independence", 120.0}},
        {13, {"classical limit", 120.0}},
    };
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <configs-dir> <output-dir>\n", argv[0]);
        return 2;
    }
    const fs::path configs = argv[1], output = argv[2];
    auto table = criteria();

    for (const auto& exp : catalog()) {
        const auto path = configs / (exp.name + ".yaml");
        erps::runner::RunOptions opt;
        opt.output_dir = output / exp.name;
        const auto t0 = std::chrono::steady_clock::now();
        const auto out = erps::runner::run_config_file(path, opt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        for (const int id : exp.criteria) {
            auto& c = table.at(id);
            c.seconds += secs;
            for (const auto& e : out.config_errors) c.problems.push_back("config error: " + e);
        }
        for (const auto& check : out.checks) {
            const auto it = table.find(check.criterion);
            if (it == table.end()) continue;
            ++it->second.n_checks;
            if (!check.pass) {
                ++it->second.n_failed;
                it->second.problems.push_back("failed check " + check.name);
            }
        }
    }

    int n_fail = 0;
    for (auto& [id, c] : table) {
        if (c.n_checks == 0) c.problems.push_back("no checks were recorded");
        if (c.seconds > c.time_limit_s) c.problems.push_back("exceeded the time limit");
        const bool pass = c.problems.empty();
        n_fail += pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %zu/%zu checks passed, %.1f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", id,
                    c.title, c.n_checks - c.n_failed, c.n_checks, c.seconds, c.time_limit_s);
        for (const auto& p : c.problems) std::printf("    %s\n", p.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(table.size()) - n_fail, table.size());
    return n_fail == 0 ? 0 : 1;
}

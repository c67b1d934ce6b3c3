#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfr/metrics.hpp"

namespace dfr::cli {

struct BenchOptions {
    std::string scenario = "alpha-sweep";
    std::size_t repetitions = 5;
    std::uint64_t seed = 1;
    std::vector<std::string> rules;  // empty: scenario default
    std::vector<double> grid;        // empty: scenario default
    std::optional<std::size_t> n, p;
    std::size_t threads = 1;
    Timer timer = Timer::wall;
    std::size_t path_length = 50;
    double min_frac = 0.1;
    double alpha = 0.95;
    double b1 = 0.1, b2 = 0.1;
    Family family = Family::linear;
};

struct BenchRow {
    std::string scenario;
    double grid_value = 0.0;
    std::size_t repetition = 0;
    std::string rule;
    RunMetrics metrics;
};

std::vector<std::string> scenario_names();
std::vector<double> default_grid(const std::string& scenario);
std::vector<std::string> default_rules(const std::string& scenario);

/// Fills in scenario defaults and checks names; throws std::invalid_argument.
BenchOptions resolve(BenchOptions opts);

/// Runs every (grid value, repetition) cell; rows come back in grid,
/// repetition, rule order whatever the thread count.
std::vector<BenchRow> run_bench(const BenchOptions& opts);

} // namespace dfr::cli

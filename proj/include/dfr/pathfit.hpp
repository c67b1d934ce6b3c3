#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dfr/screening.hpp"
#include "dfr/solver.hpp"

namespace dfr {

/// Variable KKT check used in the repair loop: the soft-threshold test only,
/// or the complete first-order conditions (default).
enum class KktMode { soft_threshold, complete };

struct PathConfig {
    std::size_t path_length = 50;
    double min_frac = 0.1;
    KktMode kkt = KktMode::complete;

    static PathConfig synthetic() { return {}; }
    static PathConfig real_data() { return {100, 0.2}; }
};

/// Maximum number of KKT repair rounds per lambda before refitting on all variables.
inline constexpr std::size_t kMaxRepairRounds = 20;

/// Log-linear grid lambda_k = lambda1 * min_frac^{(k-1)/(l-1)}. Throws std::domain_error if
/// path_length < 2, lambda1 <= 0 or min_frac outside (0,1].
std::vector<double> build_path(double lambda1, const PathConfig& config);

struct PathSolution {
    RuleKind rule = RuleKind::none;
    double lambda_max = 0.0;
    std::vector<double> lambdas;
    std::vector<std::vector<double>> betas;
    std::vector<double> intercepts;
    std::vector<ScreenState> screen_states;
    std::vector<double> timings_ms;  // wall time per lambda (screen + fit + KKT)
    std::vector<double> work;        // solver work units per lambda
    std::vector<std::size_t> iterations;
    std::vector<char> converged;

    double total_time_ms() const;
    double total_work() const;
    std::size_t total_kkt_violations() const;
};

/// Fits the whole path with the chosen screening rule. Lambda grid from the
/// path start of the penalty (adaptive start for adaptive specs).
PathSolution fit_path(const GroupedDesign& design, const PenaltySpec& spec, Family family,
                      RuleKind rule, const PathConfig& path_config, const FitConfig& fit_config);

/// Same on an explicit, non-increasing lambda grid.
PathSolution fit_path(const GroupedDesign& design, const PenaltySpec& spec, Family family,
                      RuleKind rule, std::span<const double> lambdas,
                      const FitConfig& fit_config, KktMode kkt = KktMode::complete);

} // namespace dfr

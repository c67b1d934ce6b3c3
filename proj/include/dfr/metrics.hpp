#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dfr/pathfit.hpp"

namespace dfr {

/// Clock behind the improvement factor: wall time, or solver work units
/// (deterministic, hardware independent).
enum class Timer { wall, work };

std::string_view timer_name(Timer t);
Timer parse_timer(std::string_view s);

struct RunMetrics {
    double improvement_factor = 1.0;
    double input_prop_vars = 1.0;    // mean |O_v| / p
    double input_prop_groups = 1.0;  // mean |O_g| / m, O_g = groups owning O_v variables
    std::vector<std::size_t> card_Av, card_Cv, card_Ov, card_Kv;
    std::vector<std::size_t> card_Ag, card_Cg, card_Og;
    double efficiency_vars = 1.0;    // mean |O_v| / |A_v| over points with |A_v| > 0
    double l2_to_noscreen = 0.0;     // mean over path points of ||X b_s - X b_0||_2
    double l2_max = 0.0;
    double failed_convergence = 0.0; // proportion of path points
    std::size_t kkt_violations_total = 0;
};

/// Compares a screened path with the unscreened baseline on the same grid.
/// Proportions and efficiency are averaged over the screened points
/// (k >= 2); a single-point path uses its only point. Throws
/// std::domain_error on a grid or dimension mismatch.
RunMetrics compute_metrics(const PathSolution& screened, const PathSolution& baseline,
                           const GroupedDesign& design, Timer timer = Timer::wall);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;  // sample sd / sqrt(count); 0 for a single value
};

MeanSe mean_se(std::span<const double> values);

} // namespace dfr

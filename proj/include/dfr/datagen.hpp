#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dfr/model.hpp"

namespace dfr {

enum class GroupLayout { even, uneven };

/// Synthetic grouped-regression generator settings.
struct GenSpec {
    std::size_t n = 200;
    std::size_t p = 1000;
    GroupLayout layout = GroupLayout::even;
    std::size_t even_group_size = 20;
    std::size_t uneven_groups = 22;
    std::size_t uneven_min = 3;
    std::size_t uneven_max = 100;
    std::vector<std::size_t> group_sizes;  // explicit sizes override the layout
    double rho = 0.3;
    double group_sparsity = 0.2;
    double var_sparsity = 0.2;
    double signal_mean = 0.0;
    double signal_sd = 2.0;
    Family family = Family::linear;
    int interaction_order = 1;
    double interaction_sparsity = 0.3;
    std::uint64_t seed = 1;

    /// Throws std::domain_error on invalid settings.
    void validate() const;
};

struct GeneratedData {
    GroupedDesign design;  // raw, not standardized
    std::vector<double> beta_true;
    std::vector<std::size_t> base_group_sizes;  // before interaction expansion
};

/// X rows i.i.d. with unit variances and within-group correlation rho,
/// sparse beta, y = X beta + noise (or Bernoulli(sigmoid(X beta + noise))).
/// Interaction columns are appended after the marginal ones and keep the
/// group label of their parent group.
GeneratedData generate(const GenSpec& spec);

/// Columns after within-group expansion: sum_g p_g + C(p_g,2) [+ C(p_g,3)].
std::size_t expanded_dimension(std::span<const std::size_t> group_sizes, int order);

/// Number of columns above which interaction expansion is refused.
inline constexpr std::size_t kMaxExpandedColumns = 1'000'000;

/// 52 group sizes in [3,15] summing to 400 whose order-2 and order-3
/// expansions have 2111 and 7338 columns.
std::vector<std::size_t> interaction_benchmark_sizes();

/// m sizes in [lo, hi] summing to p: every group starts at lo and the
/// remainder is handed out one unit at a time to random non-full groups.
std::vector<std::size_t> random_group_sizes(std::size_t p, std::size_t m, std::size_t lo,
                                            std::size_t hi, std::uint64_t seed);

} // namespace dfr

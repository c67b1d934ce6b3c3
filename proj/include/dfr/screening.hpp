#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dfr/model.hpp"

namespace dfr {

/// Sorted, duplicate-free list of indices.
using IndexSet = std::vector<std::size_t>;

/// |beta_i| above this counts as active.
inline constexpr double kActivityThreshold = 1e-8;

enum class RuleKind { dfr_sgl, dfr_asgl, sparsegl, gap_safe_sequential, none };

std::string_view rule_name(RuleKind r);
/// Accepts the CLI spellings (dfr-sgl, dfr-asgl, sparsegl, gap-safe, none).
RuleKind parse_rule(std::string_view s);

/// Screening bookkeeping for one path point.
struct ScreenState {
    IndexSet candidate_groups;
    IndexSet candidate_vars;
    IndexSet active_vars;
    IndexSet active_groups;
    IndexSet optimization_set;
    std::vector<IndexSet> kkt_violations;  // one entry per repair round that found any
    std::size_t kkt_group_violations = 0;  // sparsegl only
    bool fallback_full = false;            // repair cap hit, refit on all variables
};

IndexSet active_vars(std::span<const double> beta, double threshold = kActivityThreshold);
IndexSet active_groups(std::span<const double> beta, const GroupPartition& groups,
                       double threshold = kActivityThreshold);
/// Groups owning at least one variable of vars.
IndexSet groups_of(const IndexSet& vars, const GroupPartition& groups);
IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_complement(const IndexSet& a, std::size_t universe);

/// Gradient of the loss at beta = 0.
std::vector<double> gradient_at_zero(const GroupedDesign& design, Family family);

/// Smallest lambda giving the null model, max_g tau_g^{-1} ||grad_g f(0)||_{eps_g}.
double path_start_sgl(const GroupedDesign& design, const PenaltySpec& spec, Family family);

/// Adaptive path start: per group the root of
///   ||S(c_g, lambda alpha v_g)||^2 - p_g w_g^2 (1-alpha)^2 lambda^2 = 0,
/// c = -grad f(0), found by bisection; returns the max over groups.
double path_start_asgl(const GroupedDesign& design, const PenaltySpec& spec, Family family);

/// Per-group root used by path_start_asgl.
double asgl_group_start(std::span<const double> c_g, std::span<const double> v_g, double w_g,
                        double alpha);

/// Dispatches on spec.adaptive.
double path_start(const GroupedDesign& design, const PenaltySpec& spec, Family family);

/// Groups with ||grad_g||_{eps_g} > scale_g (2 lambda_next - lambda_k). For
/// adaptive specs scale_g = gamma_g evaluated at beta_prev.
IndexSet dfr_group_screen(std::span<const double> grad_prev, double lambda_k, double lambda_next,
                          const PenaltySpec& spec, const GroupPartition& groups,
                          std::span<const double> beta_prev);

/// Variables of the candidate groups, not already active, with
/// |grad_i| > alpha v_i (2 lambda_next - lambda_k).
IndexSet dfr_variable_screen(std::span<const double> grad_prev, double lambda_k,
                             double lambda_next, const PenaltySpec& spec,
                             const GroupPartition& groups, const IndexSet& candidate_groups,
                             const IndexSet& active_vars_prev);

/// Variables in `excluded` with
/// |S(grad_i, lambda (1-alpha) w_g sqrt(p_g))| > lambda alpha v_i.
IndexSet kkt_check(std::span<const double> grad_next, double lambda_next, const PenaltySpec& spec,
                   const GroupPartition& groups, const IndexSet& excluded);

/// Full first-order check at beta (the restricted solution): kkt_check plus,
/// for excluded i, |grad_i| > lambda alpha v_i when the group of i is active
/// in beta or fails ||S(grad_g, lambda alpha v_g)||_2 <= lambda (1-alpha) w_g sqrt(p_g).
/// kkt_check alone misses zero coordinates of active groups.
IndexSet kkt_check_complete(std::span<const double> grad_next, std::span<const double> beta,
                            double lambda_next, const PenaltySpec& spec,
                            const GroupPartition& groups, const IndexSet& excluded);

/// Group-only strong rule: keeps groups with
/// ||S(grad_g, lambda_k alpha)||_2 > sqrt(p_g) (1-alpha) (2 lambda_next - lambda_k).
IndexSet sparsegl_group_screen(std::span<const double> grad_prev, double lambda_k,
                               double lambda_next, double alpha, const GroupPartition& groups);

/// Groups in `excluded_groups` violating ||S(grad_g, lambda alpha)||_2 <= sqrt(p_g)(1-alpha) lambda.
IndexSet sparsegl_kkt_check(std::span<const double> grad, double lambda, double alpha,
                            const GroupPartition& groups, const IndexSet& excluded_groups);

/// Spectral norm of each column block X_g.
std::vector<double> group_spectral_norms(const Matrix& X, const GroupPartition& groups);

struct GapSafeResult {
    IndexSet keep_vars;
    IndexSet keep_groups;
    double radius = 0.0;
    double gap = 0.0;
};

/// Sequential GAP safe sphere test at lambda_next using beta_prev as the primal
/// point. Linear family only: the loss ||y - X b||^2/(2n) is rescaled to
/// ||y - X b||^2/2 with lambda -> n lambda. Pass cached block norms to avoid
/// recomputing them.
GapSafeResult gap_safe_screen_sequential(const GroupedDesign& design,
                                         std::span<const double> beta_prev, double lambda_next,
                                         double alpha, const GroupPartition& groups,
                                         std::span<const double> block_norms = {});

// Exact-gradient rules. They need the gradient at the solution for lambda_next
// itself, so they serve as test oracles rather than screening rules.

/// Groups with ||grad_g||_{eps_g} >= (1 - rel_slack) scale_g lambda. Active
/// groups attain equality at the optimum, so a small slack absorbs solver error.
IndexSet theoretical_group_screen(std::span<const double> grad_next, double lambda_next,
                                  const PenaltySpec& spec, const GroupPartition& groups,
                                  std::span<const double> beta_next, double rel_slack);

/// Variables of candidate groups with |grad_i| > lambda alpha v_i.
IndexSet theoretical_variable_screen(std::span<const double> grad_next, double lambda_next,
                                     const PenaltySpec& spec, const GroupPartition& groups,
                                     const IndexSet& candidate_groups);

} // namespace dfr

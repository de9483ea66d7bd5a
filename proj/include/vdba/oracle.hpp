#ifndef VDBA_ORACLE_HPP
#define VDBA_ORACLE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "vdba/bmap.hpp"
#include "vdba/frame_config.hpp"

namespace vdba {

/// Search limits for the exact solver. `max_nodes` is the primary budget;
/// being a node count rather than wall time it keeps results reproducible.
/// `time_budget_us` adds a wall-clock cap when positive (0 disables it).
/// `enforce_allocation_limit` is relaxed for sampled full-scale runs, where
/// the solver degrades to a budgeted incumbent (proven_optimal = false).
struct ExactLimits {
    int max_allocations = 12;
    std::int64_t max_nodes = 4'000'000;
    double time_budget_us = 0.0;
    bool enforce_allocation_limit = true;
};

/// One frame's worth of allocation requests to schedule optimally.
struct ExactInstance {
    std::vector<AllocationRequest> allocations;
    FrameConfig cfg;
    ExactLimits limits;
};

/// Exact (or budget-truncated) schedule minimizing flow-level breaches.
/// Ties are broken by fewest packet-level breaches, then least total delay,
/// which makes the solver deterministic.
struct ExactSolution {
    PhysicalBMap bmap;
    int flow_breaches = 0;
    int packet_breaches = 0;
    std::int64_t total_delay_words = 0;
    std::vector<bool> packet_breach_flags; // indexed like instance allocations
    bool proven_optimal = false;
    std::int64_t nodes_explored = 0;
};

/// Minimizes the number of flows whose per-frame breached fraction exceeds
/// their allowed non-compliance. Decision per allocation: a start in
/// [requested_start, maxtime] or a drop; schedules must be pairwise
/// non-overlapping with guard spacing and stay inside the frame.
///
/// Branch and bound over left-justified schedules: an optimal schedule
/// always exists in which every burst starts at its requested time or
/// immediately after another burst's guard, so only those starts are
/// explored. Throws InstanceLimitError when the instance exceeds
/// max_allocations and the limit is enforced.
ExactSolution solve_exact(const ExactInstance& instance);

/// Dominance-reduced candidate starts for one allocation against a set of
/// already placed grants: its requested start plus every placed burst's
/// end-of-guard, clipped to [requested_start, maxtime]. Sorted, unique.
std::vector<std::int64_t> candidate_starts(const AllocationRequest& request,
                                           std::span<const Grant> placed,
                                           const FrameConfig& cfg);

} // namespace vdba

#endif

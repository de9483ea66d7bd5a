#ifndef VDBA_HYPERVISOR_HPP
#define VDBA_HYPERVISOR_HPP

#include <vector>

#include "vdba/bmap.hpp"
#include "vdba/flow_table.hpp"
#include "vdba/frame_config.hpp"
#include "vdba/gap_list.hpp"
#include "vdba/report.hpp"

namespace vdba {

/// Sort key for pending allocations. Ascending order serves first the flows
/// with the least remaining breach budget, then the tightest deadlines, then
/// the smallest bursts. Best-effort allocations always come after all SLA
/// allocations. The trailing fields only make the order total.
struct PriorityKey {
    bool best_effort = false;
    double headroom = 0.0;
    std::int64_t maxtime = 0;
    std::int64_t size_words = 0;
    FlowId flow_id = 0;
    std::int64_t requested_start = 0;
    VnoId vno_id = 0;

    friend bool operator<(const PriorityKey& a, const PriorityKey& b) {
        if (a.best_effort != b.best_effort) return !a.best_effort;
        if (a.headroom != b.headroom) return a.headroom < b.headroom;
        if (a.maxtime != b.maxtime) return a.maxtime < b.maxtime;
        if (a.size_words != b.size_words) return a.size_words < b.size_words;
        if (a.flow_id != b.flow_id) return a.flow_id < b.flow_id;
        if (a.requested_start != b.requested_start) {
            return a.requested_start < b.requested_start;
        }
        return a.vno_id < b.vno_id;
    }
};

/// Key for one allocation given the current breach table. A flow with no
/// history gets its full allowed non-compliance as headroom, so fresh flows
/// order exactly by their allowed non-compliance rate.
PriorityKey priority_key(const AllocationRequest& request, const FlowBreachTable& table,
                         const FrameConfig& cfg);

/// Places each pending allocation (already sorted by PriorityKey) at the
/// earliest free start within [requested_start, maxtime], honoring guard
/// spacing against everything already placed in `gaps`. Allocations with no
/// feasible start are dropped. Appends the resulting grants to `out`.
void resolve_collisions(FreeGapList& gaps, const std::vector<AllocationRequest>& pending,
                        const FrameConfig& cfg, std::vector<Grant>& out);

/// Recomputes every flow's frame counters from the frame's grants, updates
/// cumulative history, and records a flow-level breach for the frame iff the
/// delayed fraction strictly exceeds the allowed non-compliance. Dropped
/// grants count as delayed. Returns per-flow stats sorted by flow id.
std::vector<FlowFrameStats> update_flow_table(FlowBreachTable& table,
                                              const std::vector<Grant>& grants);

/// Builds a breach table with zeroed counters for a known flow population.
/// Equivalent to FlowBreachTable::init.
FlowBreachTable init_sla_table(const std::vector<std::pair<FlowId, SlaClass>>& flows);

struct MergeOutcome {
    PhysicalBMap bmap;
    FrameReport report;
};

/// Stateful merging engine. One instance owns its breach table; merge_frame
/// is deterministic given the proposals and the table state.
class Hypervisor {
public:
    explicit Hypervisor(FrameConfig cfg, FlowBreachTable table = {});

    /// Merges one frame's proposals into a collision-free physical map.
    /// Every input allocation appears exactly once, scheduled or dropped.
    /// Throws std::invalid_argument when proposals mix frame indices.
    MergeOutcome merge_frame(const std::vector<VirtualBMap>& vbmaps);

    const FlowBreachTable& table() const { return table_; }
    const FrameConfig& config() const { return cfg_; }

private:
    FrameConfig cfg_;
    FlowBreachTable table_;
};

} // namespace vdba

#endif

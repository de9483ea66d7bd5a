#include "vdba/stateless.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

#include "vdba/gap_list.hpp"

namespace vdba {

namespace {

// Fixed class bands: the premium SLA is served first and type-2 traffic is
// left to whatever capacity survives the rest. This is what reproduces a
// baseline that satisfies type-1 while type-2 collapses under load; a breach
// history changes nothing here.
int class_rank(const SlaClass& sla) {
    switch (sla.id) {
        case SlaId::Type1: return 0;
        case SlaId::BestEffort: return 1;
        case SlaId::Type2: return 2;
    }
    return 3;
}

} // namespace

MergeOutcome merge_frame_stateless(const std::vector<VirtualBMap>& vbmaps,
                                   const FrameConfig& cfg) {
    std::uint64_t frame_index = vbmaps.empty() ? 0 : vbmaps.front().frame_index;
    std::vector<AllocationRequest> pending;
    for (const auto& v : vbmaps) {
        if (v.frame_index != frame_index) {
            throw std::invalid_argument("merge_frame_stateless: proposals mix frame indices " +
                                        std::to_string(frame_index) + " and " +
                                        std::to_string(v.frame_index));
        }
        pending.insert(pending.end(), v.allocations.begin(), v.allocations.end());
    }

    std::sort(pending.begin(), pending.end(),
              [](const AllocationRequest& a, const AllocationRequest& b) {
                  return std::make_tuple(class_rank(a.sla), a.requested_start, a.flow_id,
                                         a.vno_id, a.size_words) <
                         std::make_tuple(class_rank(b.sla), b.requested_start, b.flow_id,
                                         b.vno_id, b.size_words);
              });

    FreeGapList gaps(cfg.capacity_words + cfg.guard_words);
    std::vector<Grant> grants;
    grants.reserve(pending.size());
    resolve_collisions(gaps, pending, cfg, grants);

    std::stable_sort(grants.begin(), grants.end(), [](const Grant& a, const Grant& b) {
        if (a.dropped != b.dropped) {
            return !a.dropped;
        }
        return a.start < b.start;
    });

    MergeOutcome outcome;
    outcome.bmap.frame_index = frame_index;
    outcome.bmap.grants = std::move(grants);
    outcome.report.frame_index = frame_index;

    // Frame-local accounting; the stateless baseline carries no history.
    FlowBreachTable scratch;
    outcome.report.flows = update_flow_table(scratch, outcome.bmap.grants);
    for (const auto& g : outcome.bmap.grants) {
        if (g.dropped) {
            ++outcome.report.dropped_count;
        } else {
            outcome.report.scheduled_words += g.size_words;
        }
    }
    return outcome;
}

} // namespace vdba

#include "vdba/hypervisor.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "vdba/errors.hpp"

namespace vdba {

PriorityKey priority_key(const AllocationRequest& request, const FlowBreachTable& table,
                         const FrameConfig& cfg) {
    PriorityKey key;
    key.best_effort = request.sla.is_best_effort();
    const FlowBreachRecord* record = table.find(request.flow_id);
    key.headroom = record ? record->headroom() : request.sla.allowed_noncompliance;
    key.maxtime = compute_maxtime(request, cfg);
    key.size_words = request.size_words;
    key.flow_id = request.flow_id;
    key.requested_start = request.requested_start;
    key.vno_id = request.vno_id;
    return key;
}

void resolve_collisions(FreeGapList& gaps, const std::vector<AllocationRequest>& pending,
                        const FrameConfig& cfg, std::vector<Grant>& out) {
    for (const auto& a : pending) {
        Grant g;
        g.flow_id = a.flow_id;
        g.vno_id = a.vno_id;
        g.size_words = a.size_words;
        g.origin_requested_start = a.requested_start;
        g.sla = a.sla;

        const std::int64_t maxtime = compute_maxtime(a, cfg);
        // Bursts occupy their size plus the trailing guard; the gap list
        // horizon extends one guard past the frame end so a burst may end
        // flush with the frame.
        const std::optional<std::int64_t> start =
            gaps.find_first_fit(a.requested_start, maxtime, a.size_words + cfg.guard_words);
        if (start.has_value()) {
            g.start = *start;
            g.dropped = false;
            if (a.sla.latency_target_words.has_value()) {
                g.delayed = (*start - a.requested_start) > *a.sla.latency_target_words;
            }
            gaps.occupy(*start, a.size_words + cfg.guard_words);
        } else {
            g.start = -1;
            g.dropped = true;
            g.delayed = !a.sla.is_best_effort();
        }
        out.push_back(g);
    }
}

std::vector<FlowFrameStats> update_flow_table(FlowBreachTable& table,
                                              const std::vector<Grant>& grants) {
    std::vector<std::pair<FlowId, const Grant*>> by_flow;
    by_flow.reserve(grants.size());
    for (const auto& g : grants) {
        by_flow.emplace_back(g.flow_id, &g);
    }
    std::sort(by_flow.begin(), by_flow.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<FlowFrameStats> stats;
    std::size_t i = 0;
    while (i < by_flow.size()) {
        const FlowId flow = by_flow[i].first;
        std::int32_t total = 0;
        std::int32_t delayed = 0;
        for (; i < by_flow.size() && by_flow[i].first == flow; ++i) {
            ++total;
            const Grant* g = by_flow[i].second;
            if (g->delayed || g->dropped) {
                ++delayed;
            }
        }
        FlowBreachRecord& record = table.ensure(flow, by_flow[i - 1].second->sla);
        record.cum_total += total;
        record.cum_delayed += delayed;

        FlowFrameStats s;
        s.flow_id = flow;
        s.sla = record.sla.id;
        s.total = total;
        s.delayed = delayed;
        s.flow_breach = exceeds_noncompliance(delayed, total, record.sla.allowed_noncompliance);
        if (s.flow_breach) {
            ++record.flow_breach_frames;
        }
        stats.push_back(s);
    }
    return stats;
}

FlowBreachTable init_sla_table(const std::vector<std::pair<FlowId, SlaClass>>& flows) {
    return FlowBreachTable::init(flows);
}

Hypervisor::Hypervisor(FrameConfig cfg, FlowBreachTable table)
    : cfg_(cfg), table_(std::move(table)) {
    cfg_.validate();
}

MergeOutcome Hypervisor::merge_frame(const std::vector<VirtualBMap>& vbmaps) {
    std::uint64_t frame_index = vbmaps.empty() ? 0 : vbmaps.front().frame_index;
    std::size_t total = 0;
    for (const auto& v : vbmaps) {
        if (v.frame_index != frame_index) {
            throw std::invalid_argument("merge_frame: proposals mix frame indices " +
                                        std::to_string(frame_index) + " and " +
                                        std::to_string(v.frame_index));
        }
        total += v.allocations.size();
    }

    std::vector<AllocationRequest> pending;
    pending.reserve(total);
    for (const auto& v : vbmaps) {
        pending.insert(pending.end(), v.allocations.begin(), v.allocations.end());
    }

    // Every allocation goes through the priority order. An allocation whose
    // requested slot is still free simply receives it back, so conflict-free
    // proposals pass through unchanged; contested regions are arbitrated by
    // breach headroom, then deadline, then size.
    std::vector<std::pair<PriorityKey, std::uint32_t>> order(pending.size());
    for (std::size_t i = 0; i < pending.size(); ++i) {
        const AllocationRequest& a = pending[i];
        const FlowBreachRecord& record = table_.ensure(a.flow_id, a.sla);
        PriorityKey& key = order[i].first;
        key.best_effort = a.sla.is_best_effort();
        key.headroom = record.headroom();
        key.maxtime = compute_maxtime(a, cfg_);
        key.size_words = a.size_words;
        key.flow_id = a.flow_id;
        key.requested_start = a.requested_start;
        key.vno_id = a.vno_id;
        order[i].second = static_cast<std::uint32_t>(i);
    }
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<AllocationRequest> sorted;
    sorted.reserve(pending.size());
    for (const auto& [key, index] : order) {
        sorted.push_back(pending[index]);
    }

    FreeGapList gaps(cfg_.capacity_words + cfg_.guard_words);
    std::vector<Grant> grants;
    grants.reserve(sorted.size());
    resolve_collisions(gaps, sorted, cfg_, grants);

    MergeOutcome outcome;
    outcome.bmap.frame_index = frame_index;
    std::stable_sort(grants.begin(), grants.end(), [](const Grant& a, const Grant& b) {
        if (a.dropped != b.dropped) {
            return !a.dropped;
        }
        return a.start < b.start;
    });
    outcome.bmap.grants = std::move(grants);

    outcome.report.frame_index = frame_index;
    outcome.report.flows = update_flow_table(table_, outcome.bmap.grants);
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

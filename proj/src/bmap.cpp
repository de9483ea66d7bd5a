#include "vdba/bmap.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <tuple>

#include "vdba/errors.hpp"

namespace vdba {

namespace {

std::string grant_label(const Grant& g) {
    return "grant(vno " + std::to_string(g.vno_id) + ", flow " + std::to_string(g.flow_id) +
           ", start " + std::to_string(g.start) + ", size " + std::to_string(g.size_words) + ")";
}

} // namespace

bool vbmap_internally_valid(const VirtualBMap& vbmap, const FrameConfig& cfg) {
    std::vector<const AllocationRequest*> sorted;
    sorted.reserve(vbmap.allocations.size());
    for (const auto& a : vbmap.allocations) {
        if (a.vno_id != vbmap.vno_id) {
            return false;
        }
        if (a.size_words <= 0 || a.requested_start < 0 ||
            a.requested_start + a.size_words > cfg.capacity_words) {
            return false;
        }
        sorted.push_back(&a);
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
        return a->requested_start < b->requested_start;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const auto* prev = sorted[i - 1];
        if (sorted[i]->requested_start <
            prev->requested_start + prev->size_words + cfg.guard_words) {
            return false;
        }
    }
    return true;
}

std::vector<Violation> validate_physical_bmap(const PhysicalBMap& bmap,
                                              const FrameConfig& cfg) {
    std::vector<Violation> out;

    std::vector<const Grant*> scheduled;
    std::set<std::tuple<VnoId, FlowId, std::int64_t, std::int64_t>> seen;
    for (const auto& g : bmap.grants) {
        auto key = std::make_tuple(g.vno_id, g.flow_id, g.origin_requested_start, g.size_words);
        if (!seen.insert(key).second) {
            out.push_back({Violation::Kind::Duplicate,
                           "duplicate grant for " + grant_label(g)});
        }
        if (g.dropped) {
            if (!g.sla.is_best_effort() && !g.delayed) {
                out.push_back({Violation::Kind::BadFlags,
                               "dropped SLA grant not marked delayed: " + grant_label(g)});
            }
            continue;
        }
        if (g.start < 0 || g.size_words <= 0 || g.start + g.size_words > cfg.capacity_words) {
            out.push_back({Violation::Kind::OutOfBounds,
                           grant_label(g) + " outside [0, " +
                               std::to_string(cfg.capacity_words) + "]"});
            continue;
        }
        scheduled.push_back(&g);
    }

    std::sort(scheduled.begin(), scheduled.end(),
              [](const Grant* a, const Grant* b) { return a->start < b->start; });
    for (std::size_t i = 1; i < scheduled.size(); ++i) {
        const Grant* prev = scheduled[i - 1];
        const Grant* cur = scheduled[i];
        const std::int64_t prev_end = prev->start + prev->size_words;
        if (cur->start < prev_end) {
            out.push_back({Violation::Kind::Overlap,
                           grant_label(*cur) + " overlaps " + grant_label(*prev)});
        } else if (cur->start < prev_end + cfg.guard_words) {
            out.push_back({Violation::Kind::GuardSpacing,
                           grant_label(*cur) + " within guard of " + grant_label(*prev)});
        }
    }
    return out;
}

std::int64_t compute_maxtime(const AllocationRequest& request, const FrameConfig& cfg) {
    if (request.size_words > cfg.capacity_words) {
        throw InstanceError("burst of " + std::to_string(request.size_words) +
                            " words cannot fit a frame of " +
                            std::to_string(cfg.capacity_words) + " words");
    }
    const std::int64_t frame_bound = cfg.capacity_words - request.size_words;
    if (request.sla.latency_target_words.has_value()) {
        return std::min(request.requested_start + *request.sla.latency_target_words,
                        frame_bound);
    }
    return frame_bound;
}

} // namespace vdba

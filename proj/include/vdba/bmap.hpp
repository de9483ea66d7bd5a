#ifndef VDBA_BMAP_HPP
#define VDBA_BMAP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vdba/frame_config.hpp"
#include "vdba/sla.hpp"

namespace vdba {

using VnoId = std::uint32_t;
using FlowId = std::uint32_t;

/// One requested upstream burst inside a VNO's proposed bandwidth map.
struct AllocationRequest {
    VnoId vno_id = 0;
    FlowId flow_id = 0;
    std::int64_t requested_start = 0; // word index within the frame
    std::int64_t size_words = 0;
    SlaClass sla;

    bool operator==(const AllocationRequest&) const = default;
};

/// Per-VNO proposal for one frame. Allocations are expected to be mutually
/// non-overlapping (including guard spacing) within the proposal.
struct VirtualBMap {
    VnoId vno_id = 0;
    std::uint64_t frame_index = 0;
    std::vector<AllocationRequest> allocations;
};

/// Checks the internal validity of a single proposal: every allocation fits
/// the frame and consecutive allocations keep guard spacing.
bool vbmap_internally_valid(const VirtualBMap& vbmap, const FrameConfig& cfg);

/// Outcome for one allocation after merging. A dropped grant has no
/// meaningful start; a scheduled one starts at or after its requested start.
struct Grant {
    FlowId flow_id = 0;
    VnoId vno_id = 0;
    std::int64_t start = -1;
    std::int64_t size_words = 0;
    std::int64_t origin_requested_start = 0;
    SlaClass sla;
    bool delayed = false;
    bool dropped = false;

    bool operator==(const Grant&) const = default;
};

/// The merged schedule transmitted for one frame: scheduled grants sorted by
/// start, followed by any dropped grants.
struct PhysicalBMap {
    std::uint64_t frame_index = 0;
    std::vector<Grant> grants;

    std::size_t scheduled_count() const {
        std::size_t n = 0;
        for (const auto& g : grants) {
            if (!g.dropped) {
                ++n;
            }
        }
        return n;
    }
};

struct Violation {
    enum class Kind { Overlap, GuardSpacing, OutOfBounds, Duplicate, BadFlags };
    Kind kind;
    std::string message;
};

/// Returns every violated schedule invariant: overlaps, missing guard
/// spacing, grants outside the frame, duplicated requests, and inconsistent
/// dropped/delayed flags. Empty result means the map is valid.
std::vector<Violation> validate_physical_bmap(const PhysicalBMap& bmap,
                                              const FrameConfig& cfg);

/// Latest start keeping a burst inside its packet latency target and inside
/// the frame. Best-effort bursts are bounded by the frame end only. May be
/// smaller than the requested start when the burst does not fit at its
/// requested position.
///
/// Throws InstanceError when the burst cannot fit the frame at all.
std::int64_t compute_maxtime(const AllocationRequest& request, const FrameConfig& cfg);

} // namespace vdba

#endif

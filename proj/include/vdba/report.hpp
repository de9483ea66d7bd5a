#ifndef VDBA_REPORT_HPP
#define VDBA_REPORT_HPP

#include <cstdint>
#include <vector>

#include "vdba/bmap.hpp"
#include "vdba/sla.hpp"

namespace vdba {

/// One flow's accounting within a single frame. `delayed` counts grants that
/// missed their latency target or were dropped.
struct FlowFrameStats {
    FlowId flow_id = 0;
    SlaId sla = SlaId::BestEffort;
    std::int32_t total = 0;
    std::int32_t delayed = 0;
    bool flow_breach = false;
};

/// Per-frame result emitted by every scheduler. `merge_wall_us` is stamped
/// by the harness around the merge call; schedulers leave it at zero.
struct FrameReport {
    std::uint64_t frame_index = 0;
    std::vector<FlowFrameStats> flows; // sorted by flow_id
    std::int64_t scheduled_words = 0;
    std::int32_t dropped_count = 0;
    double merge_wall_us = 0.0;
};

} // namespace vdba

#endif

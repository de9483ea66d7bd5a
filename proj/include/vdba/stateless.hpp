#ifndef VDBA_STATELESS_HPP
#define VDBA_STATELESS_HPP

#include <vector>

#include "vdba/bmap.hpp"
#include "vdba/frame_config.hpp"
#include "vdba/hypervisor.hpp"

namespace vdba {

/// Stateless baseline: fixed class priority, no breach history. Type1 is
/// served strictly first and Type2 last, behind best effort — the premium
/// SLA is protected while the other SLA gets no help at all. Within a class
/// band, allocations are placed in requested-start order.
MergeOutcome merge_frame_stateless(const std::vector<VirtualBMap>& vbmaps,
                                   const FrameConfig& cfg);

} // namespace vdba

#endif

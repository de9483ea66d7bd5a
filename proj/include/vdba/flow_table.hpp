#ifndef VDBA_FLOW_TABLE_HPP
#define VDBA_FLOW_TABLE_HPP

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vdba/bmap.hpp"
#include "vdba/sla.hpp"

namespace vdba {

/// Per-flow breach history accumulated across frames. The headroom (allowed
/// non-compliance minus the observed rate) is the priority signal: smaller
/// headroom means the flow is closer to breaching and is served earlier.
struct FlowBreachRecord {
    FlowId flow_id = 0;
    SlaClass sla;
    std::int64_t cum_total = 0;   // allocations seen across frames
    std::int64_t cum_delayed = 0; // allocations delayed or dropped across frames
    std::int64_t flow_breach_frames = 0;

    double observed_rate() const {
        if (cum_total == 0) {
            return 0.0;
        }
        return static_cast<double>(cum_delayed) / static_cast<double>(cum_total);
    }

    double headroom() const { return sla.allowed_noncompliance - observed_rate(); }
};

/// Map of every flow ever observed; records are never removed within a run.
class FlowBreachTable {
public:
    FlowBreachTable() = default;

    /// Builds a table with zeroed counters. Throws std::invalid_argument on
    /// duplicate flow ids.
    static FlowBreachTable init(const std::vector<std::pair<FlowId, SlaClass>>& flows);

    /// Returns the record for a flow, creating a zeroed one if unknown.
    FlowBreachRecord& ensure(FlowId flow, const SlaClass& sla);

    const FlowBreachRecord* find(FlowId flow) const;
    FlowBreachRecord* find(FlowId flow);

    std::size_t size() const { return records_.size(); }

    auto begin() const { return records_.begin(); }
    auto end() const { return records_.end(); }

    bool operator==(const FlowBreachTable&) const = default;

private:
    std::unordered_map<FlowId, FlowBreachRecord> records_;

    friend bool operator==(const FlowBreachRecord&, const FlowBreachRecord&);
};

inline bool operator==(const FlowBreachRecord& a, const FlowBreachRecord& b) {
    return a.flow_id == b.flow_id && a.sla == b.sla && a.cum_total == b.cum_total &&
           a.cum_delayed == b.cum_delayed && a.flow_breach_frames == b.flow_breach_frames;
}

} // namespace vdba

#endif

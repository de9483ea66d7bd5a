#include "vdba/flow_table.hpp"

#include <stdexcept>
#include <string>

namespace vdba {

FlowBreachTable FlowBreachTable::init(
    const std::vector<std::pair<FlowId, SlaClass>>& flows) {
    FlowBreachTable table;
    for (const auto& [id, sla] : flows) {
        auto [it, inserted] = table.records_.try_emplace(id);
        if (!inserted) {
            throw std::invalid_argument("duplicate flow id " + std::to_string(id) +
                                        " in SLA table initialization");
        }
        it->second.flow_id = id;
        it->second.sla = sla;
    }
    return table;
}

FlowBreachRecord& FlowBreachTable::ensure(FlowId flow, const SlaClass& sla) {
    auto [it, inserted] = records_.try_emplace(flow);
    if (inserted) {
        it->second.flow_id = flow;
        it->second.sla = sla;
    }
    return it->second;
}

const FlowBreachRecord* FlowBreachTable::find(FlowId flow) const {
    auto it = records_.find(flow);
    return it == records_.end() ? nullptr : &it->second;
}

FlowBreachRecord* FlowBreachTable::find(FlowId flow) {
    auto it = records_.find(flow);
    return it == records_.end() ? nullptr : &it->second;
}

} // namespace vdba

#include "vdba/traffic.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "vdba/errors.hpp"
#include "vdba/gap_list.hpp"
#include "vdba/instrumentation.hpp"
#include "vdba/rng.hpp"

namespace vdba {

std::int64_t burst_words(BurstClass burst) {
    switch (burst) {
        case BurstClass::Small: return 325;   // 1.3 KB
        case BurstClass::Medium: return 1175; // 4.7 KB
        case BurstClass::Large: return 2375;  // 9.5 KB
    }
    return 0;
}

const char* to_string(BurstClass burst) {
    switch (burst) {
        case BurstClass::Small: return "small";
        case BurstClass::Medium: return "medium";
        case BurstClass::Large: return "large";
    }
    return "?";
}

BurstClass burst_class_from_string(const std::string& name) {
    if (name == "small") return BurstClass::Small;
    if (name == "medium") return BurstClass::Medium;
    if (name == "large") return BurstClass::Large;
    throw std::invalid_argument("unknown burst class '" + name +
                                "' (expected small|medium|large)");
}

void ScenarioConfig::validate() const {
    frame.validate();
    if (num_vnos < 1) {
        throw std::invalid_argument("ScenarioConfig: num_vnos must be >= 1");
    }
    if (!(load_fraction > 0.0) || load_fraction > 1.0) {
        throw std::invalid_argument("ScenarioConfig: load_fraction must be in (0, 1]");
    }
    if (sla_share < 0.0 || sla_share > 1.0) {
        throw std::invalid_argument("ScenarioConfig: sla_share must be in [0, 1]");
    }
    if (sla_mix < 0.0 || sla_mix > 1.0) {
        throw std::invalid_argument("ScenarioConfig: sla_mix must be in [0, 1]");
    }
    if (flows_per_vno < 1) {
        throw std::invalid_argument("ScenarioConfig: flows_per_vno must be >= 1");
    }
    if (frames < 0) {
        throw std::invalid_argument("ScenarioConfig: frames must be >= 0");
    }
    if (burst_words(burst_class) > frame.capacity_words) {
        throw std::invalid_argument("ScenarioConfig: burst size exceeds frame capacity");
    }
}

TrafficGenerator::TrafficGenerator(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();

    // Flow roster. Each VNO gets a fixed split of SLA-designated and
    // best-effort flows; SLA flows alternate between Type1 and Type2 across
    // the whole roster so the population matches sla_mix.
    int sla_per_vno;
    if (cfg_.sla_share == 0.0) {
        sla_per_vno = 0;
    } else if (cfg_.sla_share == 1.0) {
        sla_per_vno = cfg_.flows_per_vno;
    } else if (cfg_.flows_per_vno == 1) {
        sla_per_vno = 1;
    } else {
        sla_per_vno = (cfg_.flows_per_vno + 1) / 2;
    }

    sla_flows_per_vno_.resize(cfg_.num_vnos);
    be_flows_per_vno_.resize(cfg_.num_vnos);
    FlowId next_id = 1;
    int sla_assigned = 0;
    int type1_assigned = 0;
    for (int v = 0; v < cfg_.num_vnos; ++v) {
        for (int s = 0; s < cfg_.flows_per_vno; ++s) {
            FlowSpec flow;
            flow.id = next_id++;
            flow.vno = static_cast<VnoId>(v);
            if (s < sla_per_vno) {
                const bool type1 =
                    static_cast<double>(type1_assigned) <
                    cfg_.sla_mix * static_cast<double>(sla_assigned + 1);
                flow.sla = type1 ? SlaClass::type1(cfg_.frame) : SlaClass::type2(cfg_.frame);
                if (type1) {
                    ++type1_assigned;
                }
                ++sla_assigned;
                sla_flows_per_vno_[v].push_back(flows_.size());
            } else {
                flow.sla = SlaClass::best_effort();
                be_flows_per_vno_[v].push_back(flows_.size());
            }
            flows_.push_back(flow);
        }
    }
}

GeneratedFrame TrafficGenerator::frame(std::uint64_t frame_index) const {
    note_untimed_work(); // generation must stay outside timed merge regions
    Rng rng(Rng::derive(cfg_.seed, frame_index));
    const std::int64_t capacity = cfg_.frame.capacity_words;
    const std::int64_t guard = cfg_.frame.guard_words;
    const std::int64_t size = burst_words(cfg_.burst_class);
    const std::int64_t target =
        std::llround(cfg_.load_fraction * static_cast<double>(capacity));

    GeneratedFrame out;
    out.frame_index = frame_index;
    out.vbmaps.resize(cfg_.num_vnos);
    std::vector<FreeGapList> occupancy;
    occupancy.reserve(cfg_.num_vnos);
    for (int v = 0; v < cfg_.num_vnos; ++v) {
        out.vbmaps[v].vno_id = static_cast<VnoId>(v);
        out.vbmaps[v].frame_index = frame_index;
        occupancy.emplace_back(capacity + guard);
    }

    std::vector<std::size_t> sla_cursor(cfg_.num_vnos, 0);
    std::vector<std::size_t> be_cursor(cfg_.num_vnos, 0);

    std::int64_t total_words = 0;
    std::int64_t sla_words = 0;
    std::int64_t type1_words = 0;
    // The SLA and best-effort streams rotate over VNOs independently, so
    // each class spreads across operators at every share setting (a single
    // combined rotation locks into the share tracker's period and can pile
    // one class onto one VNO).
    std::int64_t sla_rr = 0;
    std::int64_t be_rr = 0;

    while (total_words < target) {
        // Pick the flow so realized word shares track sla_share and sla_mix.
        const bool want_sla =
            static_cast<double>(sla_words) <
            cfg_.sla_share * static_cast<double>(total_words + size);
        const int vno = static_cast<int>((want_sla ? sla_rr++ : be_rr++) % cfg_.num_vnos);
        const std::vector<std::size_t>* roster = nullptr;
        std::vector<std::size_t>* cursor_vec = nullptr;
        if (want_sla && !sla_flows_per_vno_[vno].empty()) {
            roster = &sla_flows_per_vno_[vno];
            cursor_vec = &sla_cursor;
        } else if (!want_sla && !be_flows_per_vno_[vno].empty()) {
            roster = &be_flows_per_vno_[vno];
            cursor_vec = &be_cursor;
        } else if (!sla_flows_per_vno_[vno].empty()) {
            roster = &sla_flows_per_vno_[vno];
            cursor_vec = &sla_cursor;
        } else {
            roster = &be_flows_per_vno_[vno];
            cursor_vec = &be_cursor;
        }

        std::size_t pick = (*cursor_vec)[vno] % roster->size();
        if (want_sla && roster == &sla_flows_per_vno_[vno] && roster->size() > 1) {
            // Prefer the SLA type that keeps the Type1/Type2 word split on
            // target, scanning from the round-robin cursor.
            const bool want_type1 =
                static_cast<double>(type1_words) <
                cfg_.sla_mix * static_cast<double>(sla_words + size);
            for (std::size_t probe = 0; probe < roster->size(); ++probe) {
                const std::size_t idx = ((*cursor_vec)[vno] + probe) % roster->size();
                const bool is_type1 = flows_[(*roster)[idx]].sla.id == SlaId::Type1;
                if (is_type1 == want_type1) {
                    pick = idx;
                    break;
                }
            }
        }
        (*cursor_vec)[vno] = pick + 1;
        const FlowSpec& flow = flows_[(*roster)[pick]];

        // Uniform start inside the proposal, redrawn on internal conflict.
        const std::int64_t span = capacity - size + 1;
        std::optional<std::int64_t> start;
        for (int attempt = 0; attempt < 64; ++attempt) {
            const auto candidate = static_cast<std::int64_t>(rng.bounded(span));
            if (occupancy[vno].is_free(candidate, size + guard)) {
                start = candidate;
                break;
            }
        }
        if (!start.has_value()) {
            start = occupancy[vno].find_first_fit(0, capacity - size, size + guard);
        }
        if (!start.has_value()) {
            throw GenerationError(
                "frame " + std::to_string(frame_index) + ": vno " + std::to_string(vno) +
                " cannot place a " + std::to_string(size) +
                "-word burst; its proposal is exhausted by payload and guard words (" +
                std::to_string(target - total_words) + " words of load target left)");
        }
        occupancy[vno].occupy(*start, size + guard);

        AllocationRequest a;
        a.vno_id = static_cast<VnoId>(vno);
        a.flow_id = flow.id;
        a.requested_start = *start;
        a.size_words = size;
        a.sla = flow.sla;
        out.vbmaps[vno].allocations.push_back(a);

        total_words += size;
        if (!flow.sla.is_best_effort()) {
            sla_words += size;
            if (flow.sla.id == SlaId::Type1) {
                type1_words += size;
            }
        }
    }

    for (auto& vbmap : out.vbmaps) {
        std::sort(vbmap.allocations.begin(), vbmap.allocations.end(),
                  [](const AllocationRequest& a, const AllocationRequest& b) {
                      return a.requested_start < b.requested_start;
                  });
    }
    return out;
}

} // namespace vdba

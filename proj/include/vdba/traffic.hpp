#ifndef VDBA_TRAFFIC_HPP
#define VDBA_TRAFFIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vdba/bmap.hpp"
#include "vdba/frame_config.hpp"
#include "vdba/sla.hpp"

namespace vdba {

/// Burst sizes exercised by the experiments: 1.3 KB, 4.7 KB and 9.5 KB
/// payloads, i.e. 325 / 1175 / 2375 words.
enum class BurstClass : std::uint8_t { Small, Medium, Large };

std::int64_t burst_words(BurstClass burst);
const char* to_string(BurstClass burst);
BurstClass burst_class_from_string(const std::string& name);

/// One experiment scenario: how much of the frame to fill, how the load is
/// split between SLA-bound and best-effort flows, and with which burst size.
struct ScenarioConfig {
    FrameConfig frame;
    int num_vnos = 5;
    double load_fraction = 0.5; // fraction of capacity_words requested per frame
    double sla_share = 0.5;     // fraction of the load carried by SLA flows
    BurstClass burst_class = BurstClass::Medium;
    double sla_mix = 0.5;       // fraction of SLA load that is Type1
    int flows_per_vno = 4;
    std::int64_t frames = 1000;
    std::uint64_t seed = 1;
    bool carryover = false;     // re-inject dropped bursts at the next frame start

    void validate() const; // throws std::invalid_argument with a field-precise message
};

struct FlowSpec {
    FlowId id = 0;
    VnoId vno = 0;
    SlaClass sla;
};

struct GeneratedFrame {
    std::uint64_t frame_index = 0;
    std::vector<VirtualBMap> vbmaps; // one per VNO, in VNO order
};

/// Seeded synthetic workload. Bursts are added round-robin across VNOs until
/// the frame's load target is met; requested starts are drawn uniformly over
/// the feasible positions of the owning VNO's proposal (redrawn on internal
/// conflict, falling back to earliest fit), so every proposal is internally
/// valid. Flow identities and their SLA classes persist for the whole run,
/// and each frame is a pure function of (config, seed, frame index).
class TrafficGenerator {
public:
    explicit TrafficGenerator(ScenarioConfig cfg);

    GeneratedFrame frame(std::uint64_t frame_index) const;

    const std::vector<FlowSpec>& flows() const { return flows_; }
    const ScenarioConfig& config() const { return cfg_; }

private:
    ScenarioConfig cfg_;
    std::vector<FlowSpec> flows_;
    // flows_ indices per VNO, split by designation
    std::vector<std::vector<std::size_t>> sla_flows_per_vno_;
    std::vector<std::vector<std::size_t>> be_flows_per_vno_;
};

} // namespace vdba

#endif

#ifndef VDBA_METRICS_HPP
#define VDBA_METRICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vdba/bmap.hpp"
#include "vdba/instrumentation.hpp"
#include "vdba/report.hpp"
#include "vdba/traffic.hpp"

namespace vdba {

/// Compliance accumulator for one SLA type. The unit is the flow-frame: one
/// flow in one frame in which it had at least one allocation. A flow-frame
/// is compliant when no flow-level breach was recorded for it.
struct TypeCompliance {
    std::int64_t flow_frames = 0;
    std::int64_t breached = 0;

    double compliance() const {
        if (flow_frames == 0) {
            return 1.0;
        }
        return 1.0 - static_cast<double>(breached) / static_cast<double>(flow_frames);
    }
};

struct TimingStats {
    std::int64_t samples = 0;
    double mean_us = 0.0;
    double p50_us = 0.0;
    double p99_us = 0.0;
    double cov = 0.0; // coefficient of variation
};

/// Aggregate of one (scenario, scheduler) run.
struct SweepResult {
    ScenarioConfig scenario;
    std::string scheduler;
    TypeCompliance type1;
    TypeCompliance type2;
    TimingStats timing;
};

/// Folds per-frame reports into a SweepResult. Timing statistics skip the
/// first `timing_warmup` samples. Throws std::invalid_argument on an empty
/// report stream.
SweepResult accumulate(std::span<const FrameReport> reports, const ScenarioConfig& scenario,
                       const std::string& scheduler, std::int64_t timing_warmup = 100);

/// Independent accounting path: recomputes per-type (flow_frames, breached)
/// directly from raw physical maps, re-deriving every delayed flag from
/// grant positions instead of trusting scheduler-reported stats.
std::pair<TypeCompliance, TypeCompliance>
recompute_compliance_from_bmaps(std::span<const PhysicalBMap> bmaps);

/// Wall-clock duration of one call, monotonic clock. The called function is
/// expected to do the merge and nothing else; use note_untimed_work() (see
/// instrumentation.hpp) from code that must never run inside the timed
/// region.
double time_merge(const std::function<void()>& merge_call);

} // namespace vdba

#endif

#include "vdba/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include "vdba/instrumentation.hpp"

namespace vdba {

namespace {

thread_local int timed_depth = 0;
thread_local std::int64_t timed_violations = 0;

double percentile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) {
        return 0.0;
    }
    const auto rank = static_cast<std::size_t>(
        p * static_cast<double>(sorted.size() - 1) + 0.5);
    return sorted[std::min(rank, sorted.size() - 1)];
}

void count_flow_frame(TypeCompliance& t1, TypeCompliance& t2, SlaId sla, bool breach) {
    TypeCompliance* bucket = nullptr;
    if (sla == SlaId::Type1) {
        bucket = &t1;
    } else if (sla == SlaId::Type2) {
        bucket = &t2;
    } else {
        return; // best effort has no compliance target
    }
    ++bucket->flow_frames;
    if (breach) {
        ++bucket->breached;
    }
}

} // namespace

TimedRegion::TimedRegion() { ++timed_depth; }
TimedRegion::~TimedRegion() { --timed_depth; }

bool in_timed_region() { return timed_depth > 0; }

void note_untimed_work() {
    if (timed_depth > 0) {
        ++timed_violations;
    }
}

std::int64_t timed_region_violations() { return timed_violations; }

void reset_timed_region_violations() { timed_violations = 0; }

SweepResult accumulate(std::span<const FrameReport> reports, const ScenarioConfig& scenario,
                       const std::string& scheduler, std::int64_t timing_warmup) {
    if (reports.empty()) {
        throw std::invalid_argument("accumulate: empty report stream");
    }
    SweepResult result;
    result.scenario = scenario;
    result.scheduler = scheduler;

    std::vector<double> times;
    times.reserve(reports.size());
    std::int64_t index = 0;
    for (const FrameReport& report : reports) {
        for (const FlowFrameStats& fs : report.flows) {
            count_flow_frame(result.type1, result.type2, fs.sla, fs.flow_breach);
        }
        if (index++ >= timing_warmup && report.merge_wall_us > 0.0) {
            times.push_back(report.merge_wall_us);
        }
    }

    if (!times.empty()) {
        result.timing.samples = static_cast<std::int64_t>(times.size());
        double sum = 0.0;
        for (double t : times) {
            sum += t;
        }
        result.timing.mean_us = sum / static_cast<double>(times.size());
        double var = 0.0;
        for (double t : times) {
            var += (t - result.timing.mean_us) * (t - result.timing.mean_us);
        }
        var /= static_cast<double>(times.size());
        result.timing.cov =
            result.timing.mean_us > 0.0 ? std::sqrt(var) / result.timing.mean_us : 0.0;
        std::sort(times.begin(), times.end());
        result.timing.p50_us = percentile(times, 0.50);
        result.timing.p99_us = percentile(times, 0.99);
    }
    return result;
}

std::pair<TypeCompliance, TypeCompliance>
recompute_compliance_from_bmaps(std::span<const PhysicalBMap> bmaps) {
    TypeCompliance t1;
    TypeCompliance t2;
    for (const PhysicalBMap& bmap : bmaps) {
        // flow -> (sla, total, late-or-dropped); delayed is re-derived from
        // grant positions rather than taken from the scheduler.
        std::map<FlowId, std::tuple<SlaClass, std::int64_t, std::int64_t>> per_flow;
        for (const Grant& g : bmap.grants) {
            auto [it, inserted] =
                per_flow.try_emplace(g.flow_id, std::make_tuple(g.sla, 0, 0));
            (void)inserted;
            auto& [sla, total, late] = it->second;
            ++total;
            bool miss = g.dropped;
            if (!g.dropped && sla.latency_target_words.has_value()) {
                miss = (g.start - g.origin_requested_start) > *sla.latency_target_words;
            }
            if (miss) {
                ++late;
            }
        }
        for (const auto& [flow, entry] : per_flow) {
            (void)flow;
            const auto& [sla, total, late] = entry;
            count_flow_frame(t1, t2, sla.id,
                             exceeds_noncompliance(late, total, sla.allowed_noncompliance));
        }
    }
    return {t1, t2};
}

double time_merge(const std::function<void()>& merge_call) {
    TimedRegion region;
    const auto begin = std::chrono::steady_clock::now();
    merge_call();
    const auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::micro>(end - begin).count();
}

} // namespace vdba

#ifndef VDBA_EXPERIMENT_HPP
#define VDBA_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdba/metrics.hpp"
#include "vdba/oracle.hpp"
#include "vdba/traffic.hpp"

namespace vdba {

enum class SchedulerKind : std::uint8_t { Heuristic, Stateless, Exact };

const char* to_string(SchedulerKind kind);
SchedulerKind scheduler_from_string(const std::string& name);

/// One (scenario, scheduler) run. Exact jobs either satisfy the solver's
/// instance limit or run in sampled mode: the solver is applied to
/// `sample_frames` frames drawn without replacement, with the sample size
/// recorded in the run summary, and with the allocation limit relaxed in
/// favor of the node budget.
struct JobSpec {
    ScenarioConfig scenario;
    SchedulerKind scheduler = SchedulerKind::Heuristic;
    int sample_frames = 0; // 0 = evaluate every frame
    ExactLimits exact_limits;
};

struct RunManifest {
    std::vector<JobSpec> jobs;
    std::string out_dir = "out";
    int parallelism = 1;
    std::int64_t timing_warmup = 100;
    bool record_timing = true; // false zeroes timing columns for byte-stable CSV
    bool write_svg = true;
};

/// Parses a JSON manifest. Unknown keys are rejected; messages carry the
/// offending key or line. `preset` expands the full experiment grid for one
/// scheduler: loads {0.2, 0.5, 0.9} x sla_share {0.1..0.9} x all burst
/// classes, 1000 frames each.
RunManifest parse_manifest(const std::string& path);
RunManifest manifest_from_json_text(const std::string& text, const std::string& origin);
RunManifest expand_preset(const std::string& name, std::uint64_t seed);

struct JobResult {
    JobSpec spec;
    SweepResult sweep;
    bool failed = false;
    std::string failure;
    int sampled_frames = 0;         // frames actually evaluated (exact sampled mode)
    std::int64_t optimal_frames = 0; // frames where the solver proved optimality
};

struct SweepOutput {
    std::vector<JobResult> results;
    std::string csv_path;
    std::vector<std::string> svg_paths;
    std::string summary_path;
    bool any_failed = false;
};

/// Runs every job (optionally in parallel), then writes results.csv, one
/// SVG per (load, scheduler) and a run summary JSON under out_dir. Output
/// is deterministic for fixed seeds apart from measured timing columns
/// (set record_timing=false for byte-identical reruns).
SweepOutput run_sweep(const RunManifest& manifest);

/// Runs jobs and the per-frame loop only, no file output. Used by tests.
std::vector<JobResult> run_jobs(const RunManifest& manifest);

/// Runs one job end to end: generate, merge, time, accumulate.
JobResult run_job(const JobSpec& spec, std::int64_t timing_warmup);

/// CSV schema shared by run_sweep and the golden-file test.
std::string csv_header();
std::string csv_rows(const std::vector<JobResult>& results, bool record_timing);

/// Renders the timing side of a sweep: mean / p50 / p99 per scheduler and
/// load, heuristic-to-stateless ratio, and the fraction of the 125 us frame
/// taken by one merge. Returns the human-readable summary.
std::string emit_bench(const std::vector<JobResult>& results, const std::string& csv_path);

} // namespace vdba

#endif

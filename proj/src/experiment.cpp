#include "vdba/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include "vdba/errors.hpp"
#include "vdba/hypervisor.hpp"
#include "vdba/instrumentation.hpp"
#include "vdba/rng.hpp"
#include "vdba/stateless.hpp"

namespace vdba {

const char* to_string(SchedulerKind kind) {
    switch (kind) {
        case SchedulerKind::Heuristic: return "heuristic";
        case SchedulerKind::Stateless: return "stateless";
        case SchedulerKind::Exact: return "exact";
    }
    return "?";
}

SchedulerKind scheduler_from_string(const std::string& name) {
    if (name == "heuristic") return SchedulerKind::Heuristic;
    if (name == "stateless") return SchedulerKind::Stateless;
    if (name == "exact") return SchedulerKind::Exact;
    throw std::invalid_argument("unknown scheduler '" + name +
                                "' (expected heuristic|stateless|exact)");
}

namespace {

std::string format(const char* fmt, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, value);
    return buf;
}

// Dropped bursts re-entered at the start of the next frame (optional mode).
std::vector<AllocationRequest> carryover_requests(const PhysicalBMap& bmap) {
    std::vector<AllocationRequest> out;
    for (const Grant& g : bmap.grants) {
        if (g.dropped) {
            AllocationRequest a;
            a.vno_id = g.vno_id;
            a.flow_id = g.flow_id;
            a.requested_start = 0;
            a.size_words = g.size_words;
            a.sla = g.sla;
            out.push_back(a);
        }
    }
    return out;
}

void inject_carryover(GeneratedFrame& frame, const std::vector<AllocationRequest>& pending) {
    for (const AllocationRequest& a : pending) {
        for (VirtualBMap& v : frame.vbmaps) {
            if (v.vno_id == a.vno_id) {
                v.allocations.insert(v.allocations.begin(), a);
                break;
            }
        }
    }
}

std::vector<std::uint64_t> sample_frame_set(const ScenarioConfig& scenario, int sample) {
    std::vector<std::uint64_t> frames;
    const auto total = static_cast<std::uint64_t>(scenario.frames);
    if (sample <= 0 || static_cast<std::int64_t>(sample) >= scenario.frames) {
        frames.resize(total);
        for (std::uint64_t i = 0; i < total; ++i) {
            frames[i] = i;
        }
        return frames;
    }
    // Deterministic draw without replacement.
    Rng rng(Rng::derive(scenario.seed, 0x5a3a1eULL));
    std::set<std::uint64_t> chosen;
    while (chosen.size() < static_cast<std::size_t>(sample)) {
        chosen.insert(rng.bounded(total));
    }
    frames.assign(chosen.begin(), chosen.end());
    return frames;
}

} // namespace

JobResult run_job(const JobSpec& spec, std::int64_t timing_warmup) {
    JobResult result;
    result.spec = spec;
    try {
        spec.scenario.validate();
        TrafficGenerator gen(spec.scenario);
        std::vector<FrameReport> reports;

        if (spec.scheduler == SchedulerKind::Exact) {
            ExactLimits limits = spec.exact_limits;
            const bool sampled =
                spec.sample_frames > 0 &&
                static_cast<std::int64_t>(spec.sample_frames) < spec.scenario.frames;
            // Sampled full-scale runs trade the proof for a budgeted
            // incumbent; the summary records how many frames stayed exact.
            limits.enforce_allocation_limit = !sampled;
            const auto frames = sample_frame_set(spec.scenario, spec.sample_frames);
            result.sampled_frames = static_cast<int>(frames.size());
            reports.reserve(frames.size());
            for (std::uint64_t f : frames) {
                GeneratedFrame gf = gen.frame(f);
                ExactInstance instance;
                instance.cfg = spec.scenario.frame;
                instance.limits = limits;
                for (const VirtualBMap& v : gf.vbmaps) {
                    instance.allocations.insert(instance.allocations.end(),
                                                v.allocations.begin(), v.allocations.end());
                }
                ExactSolution sol;
                const double us = time_merge([&] { sol = solve_exact(instance); });
                if (sol.proven_optimal) {
                    ++result.optimal_frames;
                }
                FrameReport report;
                report.frame_index = f;
                FlowBreachTable scratch;
                sol.bmap.frame_index = f;
                report.flows = update_flow_table(scratch, sol.bmap.grants);
                for (const Grant& g : sol.bmap.grants) {
                    if (g.dropped) {
                        ++report.dropped_count;
                    } else {
                        report.scheduled_words += g.size_words;
                    }
                }
                report.merge_wall_us = us;
                reports.push_back(std::move(report));
            }
        } else {
            Hypervisor hypervisor(spec.scenario.frame);
            std::vector<AllocationRequest> pending_carryover;
            reports.reserve(static_cast<std::size_t>(spec.scenario.frames));
            for (std::int64_t f = 0; f < spec.scenario.frames; ++f) {
                GeneratedFrame gf = gen.frame(static_cast<std::uint64_t>(f));
                if (spec.scenario.carryover && !pending_carryover.empty()) {
                    inject_carryover(gf, pending_carryover);
                    pending_carryover.clear();
                }
                MergeOutcome outcome;
                const double us = time_merge([&] {
                    if (spec.scheduler == SchedulerKind::Heuristic) {
                        outcome = hypervisor.merge_frame(gf.vbmaps);
                    } else {
                        outcome = merge_frame_stateless(gf.vbmaps, spec.scenario.frame);
                    }
                });
                if (spec.scenario.carryover) {
                    pending_carryover = carryover_requests(outcome.bmap);
                }
                outcome.report.merge_wall_us = us;
                reports.push_back(std::move(outcome.report));
            }
        }

        if (reports.empty()) {
            result.sweep.scenario = spec.scenario;
            result.sweep.scheduler = to_string(spec.scheduler);
        } else {
            result.sweep =
                accumulate(reports, spec.scenario, to_string(spec.scheduler), timing_warmup);
        }
    } catch (const std::exception& e) {
        result.failed = true;
        result.failure = e.what();
    }
    return result;
}

std::vector<JobResult> run_jobs(const RunManifest& manifest) {
    std::vector<JobResult> results(manifest.jobs.size());
    const int workers = std::max(1, manifest.parallelism);
    if (workers == 1 || manifest.jobs.size() <= 1) {
        for (std::size_t i = 0; i < manifest.jobs.size(); ++i) {
            results[i] = run_job(manifest.jobs[i], manifest.timing_warmup);
        }
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const auto worker_count =
        std::min<std::size_t>(static_cast<std::size_t>(workers), manifest.jobs.size());
    pool.reserve(worker_count);
    for (std::size_t w = 0; w < worker_count; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= manifest.jobs.size()) {
                    return;
                }
                results[i] = run_job(manifest.jobs[i], manifest.timing_warmup);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    return results;
}

std::string csv_header() {
    return "scheduler,load_fraction,sla_share,burst_class,sla_type,compliance,"
           "flow_frames,mean_merge_us,p99_merge_us,seed";
}

std::string csv_rows(const std::vector<JobResult>& results, bool record_timing) {
    note_untimed_work();
    std::string out;
    for (const JobResult& r : results) {
        if (r.failed) {
            continue;
        }
        const ScenarioConfig& sc = r.sweep.scenario;
        const double mean = record_timing ? r.sweep.timing.mean_us : 0.0;
        const double p99 = record_timing ? r.sweep.timing.p99_us : 0.0;
        const std::pair<const char*, const TypeCompliance*> types[] = {
            {"type1", &r.sweep.type1}, {"type2", &r.sweep.type2}};
        for (const auto& [type_name, comp] : types) {
            out += r.sweep.scheduler;
            out += ',' + format("%.2f", sc.load_fraction);
            out += ',' + format("%.2f", sc.sla_share);
            out += ',';
            out += to_string(sc.burst_class);
            out += ',';
            out += type_name;
            out += ',' + format("%.6f", comp->compliance());
            out += ',' + std::to_string(comp->flow_frames);
            out += ',' + format("%.3f", mean);
            out += ',' + format("%.3f", p99);
            out += ',' + std::to_string(sc.seed);
            out += '\n';
        }
    }
    return out;
}

namespace {

void write_summary_json(const std::string& path, const std::vector<JobResult>& results) {
    std::ofstream out(path);
    out << "{\n  \"jobs\": [\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const JobResult& r = results[i];
        out << "    {\"scheduler\": \"" << r.sweep.scheduler << "\""
            << ", \"load_fraction\": " << format("%.2f", r.spec.scenario.load_fraction)
            << ", \"sla_share\": " << format("%.2f", r.spec.scenario.sla_share)
            << ", \"burst_class\": \"" << to_string(r.spec.scenario.burst_class) << "\""
            << ", \"seed\": " << r.spec.scenario.seed
            << ", \"status\": \"" << (r.failed ? "failed" : "ok") << "\"";
        if (r.spec.scheduler == SchedulerKind::Exact) {
            out << ", \"sampled_frames\": " << r.sampled_frames
                << ", \"proven_optimal_frames\": " << r.optimal_frames;
        }
        if (r.failed) {
            std::string msg = r.failure;
            for (auto& c : msg) {
                if (c == '"') c = '\'';
            }
            out << ", \"error\": \"" << msg << "\"";
        }
        out << "}" << (i + 1 < results.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

} // namespace

std::string write_compliance_svgs(const std::string& dir,
                                  const std::vector<JobResult>& results,
                                  std::vector<std::string>& paths);

SweepOutput run_sweep(const RunManifest& manifest) {
    SweepOutput output;
    output.results = run_jobs(manifest);

    std::filesystem::create_directories(manifest.out_dir);
    output.csv_path = manifest.out_dir + "/results.csv";
    {
        std::ofstream csv(output.csv_path);
        csv << csv_header() << '\n' << csv_rows(output.results, manifest.record_timing);
    }
    output.summary_path = manifest.out_dir + "/summary.json";
    write_summary_json(output.summary_path, output.results);
    if (manifest.write_svg) {
        write_compliance_svgs(manifest.out_dir, output.results, output.svg_paths);
    }
    for (const JobResult& r : output.results) {
        output.any_failed = output.any_failed || r.failed;
    }
    return output;
}

std::string emit_bench(const std::vector<JobResult>& results, const std::string& csv_path) {
    note_untimed_work();
    std::string csv = "scheduler,load_fraction,sla_share,burst_class,mean_merge_us,"
                      "p50_merge_us,p99_merge_us,cov,samples\n";
    // (scheduler, load) -> pooled mean accumulation
    std::map<std::pair<std::string, double>, std::pair<double, std::int64_t>> pooled;
    for (const JobResult& r : results) {
        if (r.failed || r.sweep.timing.samples == 0) {
            continue; // nothing measured, row omitted
        }
        const TimingStats& t = r.sweep.timing;
        const ScenarioConfig& sc = r.sweep.scenario;
        csv += r.sweep.scheduler;
        csv += ',' + format("%.2f", sc.load_fraction);
        csv += ',' + format("%.2f", sc.sla_share);
        csv += ',';
        csv += to_string(sc.burst_class);
        csv += ',' + format("%.3f", t.mean_us);
        csv += ',' + format("%.3f", t.p50_us);
        csv += ',' + format("%.3f", t.p99_us);
        csv += ',' + format("%.4f", t.cov);
        csv += ',' + std::to_string(t.samples);
        csv += '\n';
        auto& [sum, n] = pooled[{r.sweep.scheduler, sc.load_fraction}];
        sum += t.mean_us * static_cast<double>(t.samples);
        n += t.samples;
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        out << csv;
    }

    std::string summary;
    std::map<double, std::pair<double, double>> ratio; // load -> (heuristic, stateless)
    for (const auto& [key, acc] : pooled) {
        const double mean = acc.first / static_cast<double>(acc.second);
        const double frame_pct = mean / 125.0 * 100.0;
        summary += key.first + " @ load " + format("%.2f", key.second) + ": mean " +
                   format("%.3f", mean) + " us (" + format("%.1f", frame_pct) +
                   "% of a 125 us frame, " + std::to_string(acc.second) + " samples)\n";
        if (key.first == "heuristic") {
            ratio[key.second].first = mean;
        } else if (key.first == "stateless") {
            ratio[key.second].second = mean;
        }
    }
    for (const auto& [load, pair] : ratio) {
        if (pair.first > 0.0 && pair.second > 0.0) {
            summary += "heuristic/stateless ratio @ load " + format("%.2f", load) + ": " +
                       format("%.2f", pair.first / pair.second) + "\n";
        }
    }
    return summary;
}

} // namespace vdba

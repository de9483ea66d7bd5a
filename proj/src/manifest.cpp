#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "vdba/errors.hpp"
#include "vdba/experiment.hpp"

namespace vdba {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw ConfigError(origin + ": " + message);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& origin, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.contains(key)) {
            fail(origin, "unknown key '" + key + "' in " + where);
        }
    }
}

double number_in_range(const json& v, double lo, double hi, const std::string& origin,
                       const std::string& name) {
    if (!v.is_number()) {
        fail(origin, name + " must be a number");
    }
    const double d = v.get<double>();
    if (d < lo || d > hi) {
        std::ostringstream msg;
        msg << name << " = " << d << " out of range [" << lo << ", " << hi << "]";
        fail(origin, msg.str());
    }
    return d;
}

std::int64_t integer_at_least(const json& v, std::int64_t lo, const std::string& origin,
                              const std::string& name) {
    if (!v.is_number_integer()) {
        fail(origin, name + " must be an integer");
    }
    const std::int64_t i = v.get<std::int64_t>();
    if (i < lo) {
        fail(origin, name + " = " + std::to_string(i) + " must be >= " + std::to_string(lo));
    }
    return i;
}

FrameConfig parse_frame(const json& obj, const std::string& origin) {
    FrameConfig frame;
    reject_unknown_keys(obj, {"frame_duration_us", "capacity_words", "guard_words"}, origin,
                        "frame");
    if (obj.contains("frame_duration_us")) {
        frame.frame_duration_us =
            number_in_range(obj["frame_duration_us"], 1e-9, 1e9, origin, "frame_duration_us");
    }
    if (obj.contains("capacity_words")) {
        frame.capacity_words = integer_at_least(obj["capacity_words"], 1, origin, "capacity_words");
    }
    if (obj.contains("guard_words")) {
        frame.guard_words = integer_at_least(obj["guard_words"], 0, origin, "guard_words");
    }
    return frame;
}

ScenarioConfig parse_scenario(const json& obj, std::uint64_t default_seed,
                              const std::string& origin) {
    ScenarioConfig sc;
    sc.seed = default_seed;
    reject_unknown_keys(obj,
                        {"frame", "num_vnos", "load_fraction", "sla_share", "burst_class",
                         "sla_mix", "flows_per_vno", "frames", "seed", "carryover"},
                        origin, "scenario");
    if (obj.contains("frame")) {
        sc.frame = parse_frame(obj["frame"], origin);
    }
    if (obj.contains("num_vnos")) {
        sc.num_vnos = static_cast<int>(integer_at_least(obj["num_vnos"], 1, origin, "num_vnos"));
    }
    if (obj.contains("load_fraction")) {
        sc.load_fraction = number_in_range(obj["load_fraction"], 1e-9, 1.0, origin, "load_fraction");
    }
    if (obj.contains("sla_share")) {
        sc.sla_share = number_in_range(obj["sla_share"], 0.0, 1.0, origin, "sla_share");
    }
    if (obj.contains("burst_class")) {
        if (!obj["burst_class"].is_string()) {
            fail(origin, "burst_class must be a string");
        }
        try {
            sc.burst_class = burst_class_from_string(obj["burst_class"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail(origin, e.what());
        }
    }
    if (obj.contains("sla_mix")) {
        sc.sla_mix = number_in_range(obj["sla_mix"], 0.0, 1.0, origin, "sla_mix");
    }
    if (obj.contains("flows_per_vno")) {
        sc.flows_per_vno =
            static_cast<int>(integer_at_least(obj["flows_per_vno"], 1, origin, "flows_per_vno"));
    }
    if (obj.contains("frames")) {
        sc.frames = integer_at_least(obj["frames"], 0, origin, "frames");
    }
    if (obj.contains("seed")) {
        sc.seed = static_cast<std::uint64_t>(integer_at_least(obj["seed"], 0, origin, "seed"));
    }
    if (obj.contains("carryover")) {
        if (!obj["carryover"].is_boolean()) {
            fail(origin, "carryover must be a boolean");
        }
        sc.carryover = obj["carryover"].get<bool>();
    }
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        fail(origin, std::string("scenario out of range: ") + e.what());
    }
    return sc;
}

ExactLimits parse_exact_limits(const json& obj, const std::string& origin) {
    ExactLimits limits;
    reject_unknown_keys(obj, {"max_allocations", "max_nodes", "time_budget_us"}, origin,
                        "exact");
    if (obj.contains("max_allocations")) {
        limits.max_allocations =
            static_cast<int>(integer_at_least(obj["max_allocations"], 1, origin, "max_allocations"));
    }
    if (obj.contains("max_nodes")) {
        limits.max_nodes = integer_at_least(obj["max_nodes"], 1, origin, "max_nodes");
    }
    if (obj.contains("time_budget_us")) {
        limits.time_budget_us =
            number_in_range(obj["time_budget_us"], 0.0, 1e12, origin, "time_budget_us");
    }
    return limits;
}

JobSpec parse_job(const json& obj, std::uint64_t default_seed, const std::string& origin) {
    JobSpec job;
    reject_unknown_keys(obj, {"scheduler", "scenario", "sample_frames", "exact"}, origin, "job");
    if (obj.contains("scheduler")) {
        if (!obj["scheduler"].is_string()) {
            fail(origin, "scheduler must be a string");
        }
        try {
            job.scheduler = scheduler_from_string(obj["scheduler"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail(origin, e.what());
        }
    }
    if (obj.contains("scenario")) {
        job.scenario = parse_scenario(obj["scenario"], default_seed, origin);
    } else {
        job.scenario.seed = default_seed;
    }
    if (obj.contains("sample_frames")) {
        job.sample_frames =
            static_cast<int>(integer_at_least(obj["sample_frames"], 0, origin, "sample_frames"));
    }
    if (obj.contains("exact")) {
        job.exact_limits = parse_exact_limits(obj["exact"], origin);
    }
    if (job.scheduler == SchedulerKind::Exact && job.sample_frames == 0 &&
        job.scenario.frames > 0) {
        // Exact jobs default to sampled mode; a manifest may force full
        // evaluation by setting sample_frames >= frames.
        job.sample_frames = 20;
    }
    return job;
}

} // namespace

RunManifest expand_preset(const std::string& name, std::uint64_t seed) {
    SchedulerKind kind;
    if (name == "paper-heuristic") {
        kind = SchedulerKind::Heuristic;
    } else if (name == "paper-stateless") {
        kind = SchedulerKind::Stateless;
    } else if (name == "paper-exact") {
        kind = SchedulerKind::Exact;
    } else {
        throw ConfigError("unknown preset '" + name +
                          "' (expected paper-heuristic|paper-stateless|paper-exact)");
    }
    RunManifest manifest;
    const double loads[] = {0.2, 0.5, 0.9};
    const BurstClass bursts[] = {BurstClass::Small, BurstClass::Medium, BurstClass::Large};
    for (double load : loads) {
        for (int share10 = 1; share10 <= 9; ++share10) {
            for (BurstClass burst : bursts) {
                JobSpec job;
                job.scheduler = kind;
                job.scenario.load_fraction = load;
                job.scenario.sla_share = static_cast<double>(share10) / 10.0;
                job.scenario.burst_class = burst;
                job.scenario.frames = 1000;
                job.scenario.seed = seed;
                if (kind == SchedulerKind::Exact) {
                    job.sample_frames = 20;
                    // Paper-scale instances are far beyond provable size; a
                    // light node budget keeps the preset interactive while
                    // the solver reports its incumbents as unproven.
                    job.exact_limits.max_nodes = 200'000;
                }
                manifest.jobs.push_back(job);
            }
        }
    }
    return manifest;
}

RunManifest manifest_from_json_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Map the byte offset to a line number for a readable message.
        std::size_t line = 1;
        for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
            if (text[i] == '\n') {
                ++line;
            }
        }
        fail(origin, "JSON parse error at line " + std::to_string(line) + ": " + e.what());
    }
    if (!root.is_object()) {
        fail(origin, "top level must be a JSON object");
    }
    reject_unknown_keys(root,
                        {"seed", "out_dir", "parallelism", "timing_warmup", "record_timing",
                         "write_svg", "preset", "jobs"},
                        origin, "manifest");

    std::uint64_t seed = 1;
    if (root.contains("seed")) {
        seed = static_cast<std::uint64_t>(integer_at_least(root["seed"], 0, origin, "seed"));
    }

    RunManifest manifest;
    if (root.contains("preset")) {
        if (!root["preset"].is_string()) {
            fail(origin, "preset must be a string");
        }
        manifest = expand_preset(root["preset"].get<std::string>(), seed);
    }
    if (root.contains("jobs")) {
        if (!root["jobs"].is_array()) {
            fail(origin, "jobs must be an array");
        }
        for (const auto& job : root["jobs"]) {
            manifest.jobs.push_back(parse_job(job, seed, origin));
        }
    }
    if (!root.contains("preset") && !root.contains("jobs")) {
        // Minimal manifest: one heuristic job with every default.
        JobSpec job;
        job.scenario.seed = seed;
        manifest.jobs.push_back(job);
    }
    if (root.contains("out_dir")) {
        if (!root["out_dir"].is_string()) {
            fail(origin, "out_dir must be a string");
        }
        manifest.out_dir = root["out_dir"].get<std::string>();
    }
    if (root.contains("parallelism")) {
        manifest.parallelism =
            static_cast<int>(integer_at_least(root["parallelism"], 1, origin, "parallelism"));
    }
    if (root.contains("timing_warmup")) {
        manifest.timing_warmup = integer_at_least(root["timing_warmup"], 0, origin, "timing_warmup");
    }
    if (root.contains("record_timing")) {
        if (!root["record_timing"].is_boolean()) {
            fail(origin, "record_timing must be a boolean");
        }
        manifest.record_timing = root["record_timing"].get<bool>();
    }
    if (root.contains("write_svg")) {
        if (!root["write_svg"].is_boolean()) {
            fail(origin, "write_svg must be a boolean");
        }
        manifest.write_svg = root["write_svg"].get<bool>();
    }
    return manifest;
}

RunManifest parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return manifest_from_json_text(buffer.str(), path);
}

} // namespace vdba

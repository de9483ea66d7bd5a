#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "vdba/errors.hpp"
#include "vdba/experiment.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
};

vdba::RunManifest build_manifest(const CommonOptions& opts) {
    vdba::RunManifest manifest;
    if (!opts.preset.empty()) {
        manifest = vdba::expand_preset(opts.preset, opts.seed_set ? opts.seed : 1);
    } else if (!opts.config_path.empty()) {
        manifest = vdba::parse_manifest(opts.config_path);
    } else {
        throw vdba::ConfigError("no config file given and no --preset selected");
    }
    if (opts.seed_set) {
        for (auto& job : manifest.jobs) {
            job.scenario.seed = opts.seed;
        }
    }
    if (!opts.out_dir.empty()) {
        manifest.out_dir = opts.out_dir;
    } else if (const char* env = std::getenv("VDBA_OUT_DIR")) {
        manifest.out_dir = env;
    }
    if (opts.jobs > 0) {
        manifest.parallelism = opts.jobs;
    }
    return manifest;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool config_required) {
    auto* config = cmd->add_option("config", opts.config_path, "JSON run manifest");
    if (config_required) {
        config->check(CLI::ExistingFile);
    }
    cmd->add_option("--preset", opts.preset,
                    "expand a built-in grid: paper-heuristic, paper-stateless, paper-exact");
    cmd->add_option("--out-dir", opts.out_dir, "output directory (or env VDBA_OUT_DIR)");
    cmd->add_option("--seed", opts.seed, "override every job seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--jobs", opts.jobs, "parallel job count");
}

int cmd_run(const CommonOptions& opts) {
    vdba::RunManifest manifest = build_manifest(opts);
    vdba::SweepOutput output = vdba::run_sweep(manifest);
    std::size_t failed = 0;
    for (const auto& r : output.results) {
        if (r.failed) {
            ++failed;
            std::cerr << "job failed (" << r.sweep.scheduler << ", load "
                      << r.spec.scenario.load_fraction << ", share "
                      << r.spec.scenario.sla_share << "): " << r.failure << "\n";
        }
    }
    std::cout << "wrote " << output.csv_path << " (" << output.results.size() - failed
              << "/" << output.results.size() << " jobs ok, " << output.svg_paths.size()
              << " charts)\n";
    return output.any_failed ? 1 : 0;
}

int cmd_bench(const CommonOptions& opts) {
    vdba::RunManifest manifest = build_manifest(opts);
    manifest.write_svg = false;
    std::vector<vdba::JobResult> results = vdba::run_jobs(manifest);
    std::filesystem::create_directories(manifest.out_dir);
    const std::string csv_path = manifest.out_dir + "/bench.csv";
    std::cout << vdba::emit_bench(results, csv_path);
    std::cout << "wrote " << csv_path << "\n";
    for (const auto& r : results) {
        if (r.failed) {
            std::cerr << "job failed: " << r.failure << "\n";
            return 1;
        }
    }
    return 0;
}

int cmd_validate(const CommonOptions& opts) {
    vdba::RunManifest manifest = build_manifest(opts);
    std::cout << "config ok: " << manifest.jobs.size() << " jobs, out_dir '"
              << manifest.out_dir << "'\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SLA-aware PON bandwidth-map merging experiments"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    CommonOptions bench_opts;
    CommonOptions validate_opts;

    auto* run = app.add_subcommand("run", "run a sweep and write CSV/SVG results");
    add_common(run, run_opts, false);
    auto* bench = app.add_subcommand("bench", "run jobs and report merge timing");
    add_common(bench, bench_opts, false);
    auto* validate = app.add_subcommand("validate", "parse and check a config");
    add_common(validate, validate_opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(run_opts);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_opts);
        }
        if (validate->parsed()) {
            return cmd_validate(validate_opts);
        }
    } catch (const vdba::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

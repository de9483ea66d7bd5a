#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vdba/errors.hpp"
#include "vdba/experiment.hpp"
#include "vdba/hypervisor.hpp"

using namespace vdba;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

RunManifest tiny_manifest(std::uint64_t seed, SchedulerKind kind, int frames = 25) {
    RunManifest manifest;
    JobSpec job;
    job.scheduler = kind;
    job.scenario.frame.capacity_words = 6'000;
    job.scenario.frame.guard_words = 13;
    job.scenario.load_fraction = 0.7;
    job.scenario.sla_share = 0.5;
    job.scenario.burst_class = BurstClass::Small;
    job.scenario.flows_per_vno = 2;
    job.scenario.frames = frames;
    job.scenario.seed = seed;
    manifest.jobs.push_back(job);
    manifest.record_timing = false;
    manifest.write_svg = false;
    return manifest;
}

} // namespace

TEST_CASE("minimal manifest applies every default") {
    const auto manifest = manifest_from_json_text(R"({"seed": 7})", "test");
    REQUIRE(manifest.jobs.size() == 1);
    CHECK(manifest.jobs[0].scheduler == SchedulerKind::Heuristic);
    CHECK(manifest.jobs[0].scenario.seed == 7);
    CHECK(manifest.jobs[0].scenario.num_vnos == 5);
    CHECK(manifest.jobs[0].scenario.frames == 1'000);
    CHECK(manifest.jobs[0].scenario.frame.capacity_words == 38'880);
    CHECK(manifest.out_dir == "out");
}

TEST_CASE("config errors carry distinct messages") {
    SUBCASE("missing file") {
        CHECK_THROWS_WITH_AS(parse_manifest("/nonexistent/config.json"),
                             doctest::Contains("cannot open"), ConfigError);
    }
    SUBCASE("syntax error reports the line") {
        CHECK_THROWS_WITH_AS(manifest_from_json_text("{\n  \"seed\": 1,\n  oops\n}", "test"),
                             doctest::Contains("line 3"), ConfigError);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_WITH_AS(manifest_from_json_text(R"({"sede": 1})", "test"),
                             doctest::Contains("unknown key 'sede'"), ConfigError);
        CHECK_THROWS_WITH_AS(manifest_from_json_text(
                                 R"({"jobs": [{"scenario": {"loads": 0.5}}]})", "test"),
                             doctest::Contains("unknown key 'loads'"), ConfigError);
    }
    SUBCASE("out-of-range values are rejected") {
        CHECK_THROWS_WITH_AS(manifest_from_json_text(
                                 R"({"jobs": [{"scenario": {"load_fraction": 1.5}}]})", "test"),
                             doctest::Contains("load_fraction"), ConfigError);
        CHECK_THROWS_WITH_AS(manifest_from_json_text(
                                 R"({"jobs": [{"scenario": {"sla_share": -0.2}}]})", "test"),
                             doctest::Contains("sla_share"), ConfigError);
    }
    SUBCASE("wrong types are rejected") {
        CHECK_THROWS_WITH_AS(manifest_from_json_text(R"({"jobs": "all"})", "test"),
                             doctest::Contains("jobs must be an array"), ConfigError);
    }
}

TEST_CASE("preset grids cover the full experiment matrix") {
    const auto manifest = expand_preset("paper-heuristic", 3);
    CHECK(manifest.jobs.size() == 81); // 3 loads x 9 shares x 3 burst classes
    for (const auto& job : manifest.jobs) {
        CHECK(job.scheduler == SchedulerKind::Heuristic);
        CHECK(job.scenario.frames == 1'000);
        CHECK(job.scenario.seed == 3);
    }
    const auto exact = expand_preset("paper-exact", 3);
    CHECK(exact.jobs.size() == 81);
    CHECK(exact.jobs[0].sample_frames == 20);
    CHECK_THROWS_AS(expand_preset("paper-unknown", 1), ConfigError);

    const auto via_json =
        manifest_from_json_text(R"({"seed": 3, "preset": "paper-stateless"})", "test");
    CHECK(via_json.jobs.size() == 81);
    CHECK(via_json.jobs[0].scheduler == SchedulerKind::Stateless);
}

TEST_CASE("csv schema is stable") {
    CHECK(csv_header() ==
          "scheduler,load_fraction,sla_share,burst_class,sla_type,compliance,"
          "flow_frames,mean_merge_us,p99_merge_us,seed");

    // golden row formatting
    auto manifest = tiny_manifest(11, SchedulerKind::Heuristic, 4);
    const auto results = run_jobs(manifest);
    REQUIRE(results.size() == 1);
    REQUIRE(!results[0].failed);
    const std::string rows = csv_rows(results, false);
    std::istringstream stream(rows);
    std::string line;
    std::getline(stream, line);
    CHECK(line.substr(0, 10) == "heuristic,");
    CHECK(line.find(",0.70,0.50,small,type1,") != std::string::npos);
    CHECK(line.find(",0.000,0.000,11") != std::string::npos);
    std::getline(stream, line);
    CHECK(line.find(",type2,") != std::string::npos);
}

TEST_CASE("the full preset grid produces one row per scenario and SLA type") {
    RunManifest manifest = expand_preset("paper-heuristic", 1);
    manifest.parallelism = 4;
    manifest.record_timing = false;
    const auto results = run_jobs(manifest);
    REQUIRE(results.size() == 81);
    for (const auto& r : results) {
        CHECK(!r.failed);
    }
    const std::string rows = csv_rows(results, false);
    CHECK(std::count(rows.begin(), rows.end(), '\n') == 162); // 81 scenarios x 2 types
}

TEST_CASE("empty manifest writes a header-only csv") {
    RunManifest manifest;
    manifest.out_dir = (std::filesystem::temp_directory_path() / "vdba_empty_out").string();
    std::filesystem::remove_all(manifest.out_dir);
    const auto output = run_sweep(manifest);
    CHECK(!output.any_failed);
    CHECK(slurp(output.csv_path) == csv_header() + "\n");
}

TEST_CASE("reruns are byte-identical when timing is not recorded") {
    auto manifest = tiny_manifest(5, SchedulerKind::Heuristic);
    manifest.jobs.push_back(tiny_manifest(5, SchedulerKind::Stateless).jobs[0]);
    manifest.jobs.push_back(tiny_manifest(6, SchedulerKind::Exact).jobs[0]);
    manifest.jobs.back().sample_frames = 5;
    manifest.out_dir = (std::filesystem::temp_directory_path() / "vdba_det_a").string();
    std::filesystem::remove_all(manifest.out_dir);
    const auto first = run_sweep(manifest);
    manifest.out_dir = (std::filesystem::temp_directory_path() / "vdba_det_b").string();
    std::filesystem::remove_all(manifest.out_dir);
    const auto second = run_sweep(manifest);
    CHECK(!first.any_failed);
    CHECK(slurp(first.csv_path) == slurp(second.csv_path));
    CHECK(slurp(first.summary_path) == slurp(second.summary_path));
}

TEST_CASE("parallel execution matches sequential output") {
    auto manifest = tiny_manifest(5, SchedulerKind::Heuristic);
    for (std::uint64_t s = 6; s < 12; ++s) {
        manifest.jobs.push_back(tiny_manifest(s, SchedulerKind::Stateless).jobs[0]);
    }
    const auto sequential = run_jobs(manifest);
    manifest.parallelism = 4;
    const auto parallel = run_jobs(manifest);
    CHECK(csv_rows(sequential, false) == csv_rows(parallel, false));
}

TEST_CASE("oracle limit violations fail the job but not the sweep") {
    RunManifest manifest;
    manifest.record_timing = false;
    manifest.write_svg = false;
    // Job 0: full-evaluation exact run over instances far above the limit.
    JobSpec over = tiny_manifest(4, SchedulerKind::Exact).jobs[0];
    over.scenario.load_fraction = 0.9;
    over.sample_frames = 0; // full evaluation: limit enforced
    over.scenario.frames = 3;
    manifest.jobs.push_back(over);
    manifest.jobs.push_back(tiny_manifest(4, SchedulerKind::Heuristic, 3).jobs[0]);
    manifest.out_dir = (std::filesystem::temp_directory_path() / "vdba_fail_out").string();
    std::filesystem::remove_all(manifest.out_dir);

    const auto output = run_sweep(manifest);
    CHECK(output.any_failed);
    REQUIRE(output.results.size() == 2);
    CHECK(output.results[0].failed);
    CHECK(output.results[0].failure.find("limit") != std::string::npos);
    CHECK(!output.results[1].failed);
    // failed job contributes no CSV rows, the healthy one still does
    const std::string csv = slurp(output.csv_path);
    CHECK(csv.find("exact") == std::string::npos);
    CHECK(csv.find("heuristic") != std::string::npos);
    CHECK(slurp(output.summary_path).find("failed") != std::string::npos);
}

TEST_CASE("sampled exact jobs record their sample size") {
    auto manifest = tiny_manifest(8, SchedulerKind::Exact, 30);
    manifest.jobs[0].sample_frames = 6;
    const auto results = run_jobs(manifest);
    REQUIRE(results.size() == 1);
    CHECK(!results[0].failed);
    CHECK(results[0].sampled_frames == 6);
    CHECK(results[0].optimal_frames > 0);
}

TEST_CASE("svg charts are written per load and scheduler") {
    auto manifest = tiny_manifest(5, SchedulerKind::Heuristic, 6);
    manifest.jobs.push_back(manifest.jobs[0]);
    manifest.jobs[1].scenario.sla_share = 0.7;
    manifest.write_svg = true;
    manifest.out_dir = (std::filesystem::temp_directory_path() / "vdba_svg_out").string();
    std::filesystem::remove_all(manifest.out_dir);
    const auto output = run_sweep(manifest);
    REQUIRE(output.svg_paths.size() == 1);
    const std::string svg = slurp(output.svg_paths[0]);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("bench summary formats means, frame fraction and ratio") {
    std::vector<JobResult> results(2);
    results[0].spec.scheduler = SchedulerKind::Heuristic;
    results[0].sweep.scheduler = "heuristic";
    results[0].sweep.scenario.load_fraction = 0.9;
    results[0].sweep.timing = {400, 3.52, 3.4, 4.1, 0.1};
    results[1].spec.scheduler = SchedulerKind::Stateless;
    results[1].sweep.scheduler = "stateless";
    results[1].sweep.scenario.load_fraction = 0.9;
    results[1].sweep.timing = {400, 2.72, 2.6, 3.3, 0.1};

    const std::string summary = emit_bench(results, "");
    CHECK(summary.find("mean 3.520 us (2.8% of a 125 us frame") != std::string::npos);
    CHECK(summary.find("ratio @ load 0.90: 1.29") != std::string::npos);

    // jobs with no timing samples contribute no rows
    results[1].sweep.timing = {};
    const std::string partial = emit_bench(results, "");
    CHECK(partial.find("stateless") == std::string::npos);
    CHECK(partial.find("ratio") == std::string::npos);
}

TEST_CASE("carryover re-injects dropped bursts into the next frame") {
    // A crowded frame with large bursts drops some SLA allocations; with
    // carryover enabled the next frame then carries more allocations than
    // the generator alone produced.
    JobSpec job;
    job.scheduler = SchedulerKind::Heuristic;
    job.scenario.frame.capacity_words = 5'000;
    job.scenario.frame.guard_words = 13;
    job.scenario.load_fraction = 0.95;
    job.scenario.sla_share = 1.0;
    job.scenario.sla_mix = 1.0; // all Type1: tight windows force drops
    job.scenario.burst_class = BurstClass::Large;
    job.scenario.flows_per_vno = 1;
    job.scenario.frames = 12;
    job.scenario.seed = 3;

    const auto plain = run_job(job, 0);
    REQUIRE(!plain.failed);
    std::int64_t plain_total = 0;
    std::int64_t plain_drops = 0;
    // re-run manually to count drops
    {
        TrafficGenerator gen(job.scenario);
        Hypervisor hv(job.scenario.frame);
        for (std::int64_t f = 0; f < job.scenario.frames; ++f) {
            const auto outcome = hv.merge_frame(gen.frame(f).vbmaps);
            plain_total += static_cast<std::int64_t>(outcome.bmap.grants.size());
            plain_drops += outcome.report.dropped_count;
        }
    }
    REQUIRE(plain_drops > 0); // scenario must actually drop something

    job.scenario.carryover = true;
    std::int64_t carry_total = 0;
    {
        TrafficGenerator gen(job.scenario);
        Hypervisor hv(job.scenario.frame);
        std::vector<AllocationRequest> carried;
        for (std::int64_t f = 0; f < job.scenario.frames; ++f) {
            auto frame = gen.frame(f);
            for (const auto& a : carried) {
                for (auto& v : frame.vbmaps) {
                    if (v.vno_id == a.vno_id) {
                        v.allocations.insert(v.allocations.begin(), a);
                        break;
                    }
                }
            }
            const auto outcome = hv.merge_frame(frame.vbmaps);
            carry_total += static_cast<std::int64_t>(outcome.bmap.grants.size());
            carried.clear();
            for (const auto& g : outcome.bmap.grants) {
                if (g.dropped) {
                    AllocationRequest a;
                    a.vno_id = g.vno_id;
                    a.flow_id = g.flow_id;
                    a.requested_start = 0;
                    a.size_words = g.size_words;
                    a.sla = g.sla;
                    carried.push_back(a);
                }
            }
        }
    }
    CHECK(carry_total > plain_total);

    // and the library runner accepts the flag end to end
    const auto with_carry = run_job(job, 0);
    CHECK(!with_carry.failed);
}

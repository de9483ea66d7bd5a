#ifndef VDBA_TESTS_SUPPORT_HPP
#define VDBA_TESTS_SUPPORT_HPP

// Shared test helpers: small random instances and two brute-force schedule
// oracles that stay independent of the library's exact solver.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "vdba/bmap.hpp"
#include "vdba/gap_list.hpp"
#include "vdba/report.hpp"
#include "vdba/rng.hpp"
#include "vdba/sla.hpp"

namespace vdba::tests {

struct BruteObjective {
    int flow_breaches = 0;
    int packet_breaches = 0;
    std::int64_t total_delay = 0;

    friend bool operator<(const BruteObjective& a, const BruteObjective& b) {
        if (a.flow_breaches != b.flow_breaches) return a.flow_breaches < b.flow_breaches;
        if (a.packet_breaches != b.packet_breaches) return a.packet_breaches < b.packet_breaches;
        return a.total_delay < b.total_delay;
    }
    friend bool operator==(const BruteObjective& a, const BruteObjective& b) {
        return a.flow_breaches == b.flow_breaches && a.packet_breaches == b.packet_breaches &&
               a.total_delay == b.total_delay;
    }
};

inline BruteObjective score_assignment(const std::vector<AllocationRequest>& allocs,
                                       const std::vector<std::int64_t>& starts) {
    BruteObjective obj;
    std::map<FlowId, std::pair<int, int>> flows; // total, breached
    std::map<FlowId, double> budget;
    for (std::size_t i = 0; i < allocs.size(); ++i) {
        const auto& a = allocs[i];
        bool breach;
        if (starts[i] < 0) {
            breach = true;
        } else {
            breach = a.sla.latency_target_words.has_value() &&
                     (starts[i] - a.requested_start) > *a.sla.latency_target_words;
            obj.total_delay += starts[i] - a.requested_start;
        }
        if (breach) {
            ++obj.packet_breaches;
        }
        auto& [total, breached] = flows[a.flow_id];
        ++total;
        if (breach) {
            ++breached;
        }
        budget.try_emplace(a.flow_id, a.sla.allowed_noncompliance);
    }
    for (const auto& [flow, counts] : flows) {
        if (exceeds_noncompliance(counts.second, counts.first, budget.at(flow))) {
            ++obj.flow_breaches;
        }
    }
    return obj;
}

// Exhaustive enumeration over scheduled subsets and their time orders, with
// each chosen burst placed at max(requested, previous end + guard). This is
// the test-side optimum for small instances.
inline BruteObjective enumerate_sequences(const std::vector<AllocationRequest>& allocs,
                                          const FrameConfig& cfg) {
    const std::size_t n = allocs.size();
    std::vector<std::int64_t> maxtimes(n);
    for (std::size_t i = 0; i < n; ++i) {
        maxtimes[i] = compute_maxtime(allocs[i], cfg);
    }
    std::vector<std::int64_t> starts(n, -1);
    BruteObjective best = score_assignment(allocs, starts);

    for (std::uint32_t subset = 0; subset < (1u << n); ++subset) {
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < n; ++i) {
            if (subset & (1u << i)) {
                chosen.push_back(i);
            }
        }
        std::sort(chosen.begin(), chosen.end());
        do {
            std::fill(starts.begin(), starts.end(), -1);
            std::int64_t frontier = 0;
            bool feasible = true;
            for (std::size_t i : chosen) {
                const std::int64_t s = std::max(allocs[i].requested_start, frontier);
                if (s > maxtimes[i]) {
                    feasible = false;
                    break;
                }
                starts[i] = s;
                frontier = s + allocs[i].size_words + cfg.guard_words;
            }
            if (feasible) {
                const BruteObjective obj = score_assignment(allocs, starts);
                if (obj < best) {
                    best = obj;
                }
            }
        } while (std::next_permutation(chosen.begin(), chosen.end()));
    }
    return best;
}

// Enumeration over every feasible word start (or drop) per allocation, with
// explicit pairwise guard checks. Only usable for tiny frames; this is the
// reference the left-justified search is checked against.
inline BruteObjective enumerate_all_starts(const std::vector<AllocationRequest>& allocs,
                                           const FrameConfig& cfg) {
    const std::size_t n = allocs.size();
    std::vector<std::int64_t> maxtimes(n);
    for (std::size_t i = 0; i < n; ++i) {
        maxtimes[i] = compute_maxtime(allocs[i], cfg);
    }
    std::vector<std::int64_t> starts(n, -1);
    BruteObjective best = score_assignment(allocs, starts);

    auto overlaps = [&](std::size_t i, std::size_t j) {
        const std::int64_t ai = starts[i];
        const std::int64_t aj = starts[j];
        const std::int64_t ei = ai + allocs[i].size_words + cfg.guard_words;
        const std::int64_t ej = aj + allocs[j].size_words + cfg.guard_words;
        return ai < ej && aj < ei;
    };

    auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            const BruteObjective obj = score_assignment(allocs, starts);
            if (obj < best) {
                best = obj;
            }
            return;
        }
        starts[i] = -1;
        self(self, i + 1);
        for (std::int64_t s = allocs[i].requested_start; s <= maxtimes[i]; ++s) {
            starts[i] = s;
            bool ok = true;
            for (std::size_t j = 0; j < i; ++j) {
                if (starts[j] >= 0 && overlaps(i, j)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                self(self, i + 1);
            }
        }
        starts[i] = -1;
    };
    recurse(recurse, 0);
    return best;
}

struct RandomInstance {
    std::vector<AllocationRequest> allocations;
    std::vector<VirtualBMap> vbmaps; // grouped by VNO, internally valid
};

// Random small instance: a handful of flows (one VNO each), allocations with
// uniform sizes and starts, internally valid per VNO by construction.
inline RandomInstance random_instance(Rng& rng, const FrameConfig& cfg, int max_allocs,
                                      std::uint64_t frame_index = 0) {
    const int num_flows = 1 + static_cast<int>(rng.bounded(4));
    std::vector<SlaClass> flow_sla;
    for (int f = 0; f < num_flows; ++f) {
        switch (rng.bounded(3)) {
            case 0: flow_sla.push_back(SlaClass::type1(cfg)); break;
            case 1: flow_sla.push_back(SlaClass::type2(cfg)); break;
            default: flow_sla.push_back(SlaClass::best_effort()); break;
        }
    }
    const int n = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(max_allocs) + 1));

    RandomInstance out;
    std::vector<FreeGapList> occupancy;
    for (int f = 0; f < num_flows; ++f) {
        VirtualBMap v;
        v.vno_id = static_cast<VnoId>(f);
        v.frame_index = frame_index;
        out.vbmaps.push_back(v);
        occupancy.emplace_back(cfg.capacity_words + cfg.guard_words);
    }

    for (int i = 0; i < n; ++i) {
        const int f = static_cast<int>(rng.bounded(num_flows));
        const std::int64_t max_size = std::max<std::int64_t>(1, cfg.capacity_words / 4);
        const std::int64_t size = 1 + static_cast<std::int64_t>(rng.bounded(max_size));
        std::optional<std::int64_t> start;
        for (int attempt = 0; attempt < 32; ++attempt) {
            const auto candidate =
                static_cast<std::int64_t>(rng.bounded(cfg.capacity_words - size + 1));
            if (occupancy[f].is_free(candidate, size + cfg.guard_words)) {
                start = candidate;
                break;
            }
        }
        if (!start.has_value()) {
            continue; // flow's proposal is too crowded, skip this burst
        }
        occupancy[f].occupy(*start, size + cfg.guard_words);
        AllocationRequest a;
        a.vno_id = static_cast<VnoId>(f);
        a.flow_id = static_cast<FlowId>(f + 1);
        a.requested_start = *start;
        a.size_words = size;
        a.sla = flow_sla[f];
        out.allocations.push_back(a);
        out.vbmaps[f].allocations.push_back(a);
    }
    for (auto& v : out.vbmaps) {
        std::sort(v.allocations.begin(), v.allocations.end(),
                  [](const AllocationRequest& a, const AllocationRequest& b) {
                      return a.requested_start < b.requested_start;
                  });
    }
    return out;
}

inline int flow_breaches_of(const std::vector<FlowFrameStats>& stats) {
    int count = 0;
    for (const auto& s : stats) {
        if (s.flow_breach) {
            ++count;
        }
    }
    return count;
}

} // namespace vdba::tests

#endif

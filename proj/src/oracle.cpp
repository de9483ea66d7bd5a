#include "vdba/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "vdba/errors.hpp"

namespace vdba {

namespace {

using Clock = std::chrono::steady_clock;

struct Objective {
    int flow_breaches = 0;
    int packet_breaches = 0;
    std::int64_t total_delay = 0;

    friend bool operator<(const Objective& a, const Objective& b) {
        return std::tie(a.flow_breaches, a.packet_breaches, a.total_delay) <
               std::tie(b.flow_breaches, b.packet_breaches, b.total_delay);
    }
};

struct Item {
    std::int64_t release = 0;
    std::int64_t size = 0;
    std::int64_t maxtime = 0;
    std::int64_t target = -1; // latency target, -1 for best effort
    int flow = 0;             // dense flow index
};

// Dominance memo. Two search states with the same undecided set and the same
// per-flow breach pattern admit the same completions; keeping only Pareto
// minima of (frontier, delay) prunes permutation churn.
class DominanceMemo {
public:
    bool dominated_or_insert(std::uint64_t mask, const std::vector<std::uint8_t>& breaches,
                             std::int64_t frontier, std::int64_t delay) {
        auto& entries = table_[{mask, breaches}];
        for (const auto& [f, d] : entries) {
            if (f <= frontier && d <= delay) {
                return true;
            }
        }
        std::erase_if(entries, [&](const auto& e) {
            return frontier <= e.first && delay <= e.second;
        });
        entries.emplace_back(frontier, delay);
        return false;
    }

private:
    std::map<std::pair<std::uint64_t, std::vector<std::uint8_t>>,
             std::vector<std::pair<std::int64_t, std::int64_t>>>
        table_;
};

class Search {
public:
    Search(const ExactInstance& inst, std::vector<Item> items,
           std::vector<std::int64_t> flow_totals, std::vector<double> flow_budgets)
        : inst_(inst),
          items_(std::move(items)),
          flow_totals_(std::move(flow_totals)),
          flow_budgets_(std::move(flow_budgets)),
          n_(items_.size()),
          use_memo_(n_ <= 48) {
        decided_.assign(n_, false);
        assignment_.assign(n_, kUndecided);
        flow_breaches_.assign(flow_totals_.size(), 0);
        best_assignment_.assign(n_, kDropped);
        // Deadline-first child order; the first dive doubles as the greedy
        // incumbent.
        order_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            order_[i] = i;
        }
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return std::tie(items_[a].maxtime, items_[a].release, items_[a].size, a) <
                   std::tie(items_[b].maxtime, items_[b].release, items_[b].size, b);
        });
        if (inst_.limits.time_budget_us > 0.0) {
            deadline_ = Clock::now() +
                        std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double, std::micro>(
                            inst_.limits.time_budget_us));
            has_deadline_ = true;
        }
        // Baseline incumbent: drop everything.
        incumbent_.flow_breaches = 0;
        incumbent_.packet_breaches = static_cast<int>(n_);
        incumbent_.total_delay = 0;
        for (std::size_t f = 0; f < flow_totals_.size(); ++f) {
            if (exceeds_noncompliance(flow_totals_[f], flow_totals_[f], flow_budgets_[f])) {
                ++incumbent_.flow_breaches;
            }
        }
    }

    ExactSolution run() {
        dfs(0);
        ExactSolution sol;
        sol.flow_breaches = incumbent_.flow_breaches;
        sol.packet_breaches = incumbent_.packet_breaches;
        sol.total_delay_words = incumbent_.total_delay;
        sol.proven_optimal = !budget_exhausted_;
        sol.nodes_explored = nodes_;
        sol.packet_breach_flags.resize(n_, false);
        sol.bmap.frame_index = 0;

        std::vector<std::pair<std::int64_t, std::size_t>> scheduled;
        for (std::size_t i = 0; i < n_; ++i) {
            if (best_assignment_[i] >= 0) {
                scheduled.emplace_back(best_assignment_[i], i);
            }
        }
        std::sort(scheduled.begin(), scheduled.end());
        for (const auto& [start, i] : scheduled) {
            sol.bmap.grants.push_back(make_grant(i, start));
            sol.packet_breach_flags[i] =
                items_[i].target >= 0 && (start - items_[i].release) > items_[i].target;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (best_assignment_[i] == kDropped) {
                sol.bmap.grants.push_back(make_grant(i, -1));
                sol.packet_breach_flags[i] = true;
            }
        }
        return sol;
    }

private:
    static constexpr std::int64_t kUndecided = -2;
    static constexpr std::int64_t kDropped = -1;

    Grant make_grant(std::size_t i, std::int64_t start) const {
        const AllocationRequest& a = inst_.allocations[i];
        Grant g;
        g.flow_id = a.flow_id;
        g.vno_id = a.vno_id;
        g.size_words = a.size_words;
        g.origin_requested_start = a.requested_start;
        g.sla = a.sla;
        if (start < 0) {
            g.start = -1;
            g.dropped = true;
            g.delayed = !a.sla.is_best_effort();
        } else {
            g.start = start;
            g.dropped = false;
            g.delayed = items_[i].target >= 0 && (start - items_[i].release) > items_[i].target;
        }
        return g;
    }

    bool out_of_budget() {
        if (nodes_ >= inst_.limits.max_nodes) {
            budget_exhausted_ = true;
            return true;
        }
        if (has_deadline_ && (nodes_ & 0x3ff) == 0 && Clock::now() > deadline_) {
            budget_exhausted_ = true;
            return true;
        }
        return false;
    }

    int certain_flow_breaches() const {
        int count = 0;
        for (std::size_t f = 0; f < flow_breaches_.size(); ++f) {
            if (exceeds_noncompliance(flow_breaches_[f], flow_totals_[f], flow_budgets_[f])) {
                ++count;
            }
        }
        return count;
    }

    std::uint64_t remaining_mask() const {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!decided_[i]) {
                mask |= (1ULL << i);
            }
        }
        return mask;
    }

    void drop(std::size_t i) {
        decided_[i] = true;
        assignment_[i] = kDropped;
        ++flow_breaches_[items_[i].flow];
        ++packet_total_;
    }

    void undo_drop(std::size_t i) {
        decided_[i] = false;
        assignment_[i] = kUndecided;
        --flow_breaches_[items_[i].flow];
        --packet_total_;
    }

    void consider_leaf() {
        Objective obj{certain_flow_breaches(), packet_total_, delay_total_};
        if (obj < incumbent_) {
            incumbent_ = obj;
            best_assignment_ = assignment_;
        }
    }

    void dfs(std::int64_t frontier) {
        ++nodes_;
        if (out_of_budget()) {
            return;
        }

        // Anything that can no longer meet its window is dropped here, not
        // branched on: its start only grows deeper in the sequence.
        std::vector<std::size_t> forced;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!decided_[i] && std::max(items_[i].release, frontier) > items_[i].maxtime) {
                forced.push_back(i);
            }
        }
        for (std::size_t i : forced) {
            drop(i);
        }

        Objective bound{certain_flow_breaches(), packet_total_, delay_total_};
        bool prune = !(bound < incumbent_);
        if (!prune && use_memo_) {
            prune = memo_.dominated_or_insert(remaining_mask(), flow_breaches_, frontier,
                                              delay_total_);
        }

        if (!prune) {
            for (std::size_t i : order_) {
                if (decided_[i]) {
                    continue;
                }
                const std::int64_t start = std::max(items_[i].release, frontier);
                // Feasible by construction after the forced drops.
                const bool breach =
                    items_[i].target >= 0 && (start - items_[i].release) > items_[i].target;

                decided_[i] = true;
                assignment_[i] = start;
                if (breach) {
                    ++flow_breaches_[items_[i].flow];
                    ++packet_total_;
                }
                delay_total_ += start - items_[i].release;

                dfs(start + items_[i].size + inst_.cfg.guard_words);

                delay_total_ -= start - items_[i].release;
                if (breach) {
                    --flow_breaches_[items_[i].flow];
                    --packet_total_;
                }
                decided_[i] = false;
                assignment_[i] = kUndecided;

                if (budget_exhausted_) {
                    break;
                }
            }

            if (!budget_exhausted_) {
                // Stop scheduling: every undecided allocation is dropped.
                std::vector<std::size_t> rest;
                for (std::size_t i = 0; i < n_; ++i) {
                    if (!decided_[i]) {
                        rest.push_back(i);
                    }
                }
                for (std::size_t i : rest) {
                    drop(i);
                }
                consider_leaf();
                for (auto it = rest.rbegin(); it != rest.rend(); ++it) {
                    undo_drop(*it);
                }
            }
        }

        for (auto it = forced.rbegin(); it != forced.rend(); ++it) {
            undo_drop(*it);
        }
    }

    const ExactInstance& inst_;
    std::vector<Item> items_;
    std::vector<std::int64_t> flow_totals_;
    std::vector<double> flow_budgets_;
    std::size_t n_;
    bool use_memo_;

    std::vector<std::size_t> order_;
    std::vector<bool> decided_;
    std::vector<std::int64_t> assignment_;
    std::vector<std::uint8_t> flow_breaches_;
    int packet_total_ = 0;
    std::int64_t delay_total_ = 0;

    Objective incumbent_;
    std::vector<std::int64_t> best_assignment_;
    DominanceMemo memo_;

    std::int64_t nodes_ = 0;
    bool budget_exhausted_ = false;
    bool has_deadline_ = false;
    Clock::time_point deadline_;
};

} // namespace

ExactSolution solve_exact(const ExactInstance& instance) {
    instance.cfg.validate();
    const std::size_t n = instance.allocations.size();
    if (instance.limits.enforce_allocation_limit &&
        n > static_cast<std::size_t>(instance.limits.max_allocations)) {
        throw InstanceLimitError("exact instance has " + std::to_string(n) +
                                 " allocations, limit is " +
                                 std::to_string(instance.limits.max_allocations));
    }
    std::vector<Item> items(n);
    std::map<FlowId, int> flow_index;
    std::vector<std::int64_t> flow_totals;
    std::vector<double> flow_budgets;
    for (std::size_t i = 0; i < n; ++i) {
        const AllocationRequest& a = instance.allocations[i];
        items[i].release = a.requested_start;
        items[i].size = a.size_words;
        items[i].maxtime = compute_maxtime(a, instance.cfg);
        items[i].target =
            a.sla.latency_target_words.has_value() ? *a.sla.latency_target_words : -1;
        auto [it, inserted] = flow_index.try_emplace(a.flow_id,
                                                     static_cast<int>(flow_totals.size()));
        if (inserted) {
            flow_totals.push_back(0);
            flow_budgets.push_back(a.sla.allowed_noncompliance);
        }
        items[i].flow = it->second;
        ++flow_totals[it->second];
    }

    Search search(instance, std::move(items), std::move(flow_totals), std::move(flow_budgets));
    ExactSolution sol = search.run();
    sol.bmap.frame_index = 0;
    return sol;
}

std::vector<std::int64_t> candidate_starts(const AllocationRequest& request,
                                           std::span<const Grant> placed,
                                           const FrameConfig& cfg) {
    const std::int64_t maxtime = compute_maxtime(request, cfg);
    std::vector<std::int64_t> out;
    if (maxtime < request.requested_start) {
        return out; // burst does not fit at or after its requested slot
    }
    out.push_back(request.requested_start);
    for (const Grant& g : placed) {
        if (g.dropped) {
            continue;
        }
        const std::int64_t s = g.start + g.size_words + cfg.guard_words;
        if (s >= request.requested_start && s <= maxtime) {
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace vdba

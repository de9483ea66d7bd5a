#include "vdba/gap_list.hpp"

#include <algorithm>
#include <stdexcept>

namespace vdba {

FreeGapList::FreeGapList(std::int64_t horizon) : horizon_(horizon) {
    if (horizon > 0) {
        gaps_.reserve(64);
        gaps_.push_back({0, horizon});
    }
}

std::ptrdiff_t FreeGapList::gap_at_or_before(std::int64_t position) const {
    auto it = std::upper_bound(gaps_.begin(), gaps_.end(), position,
                               [](std::int64_t p, const Gap& g) { return p < g.start; });
    return static_cast<std::ptrdiff_t>(it - gaps_.begin()) - 1;
}

std::optional<std::int64_t> FreeGapList::find_first_fit(std::int64_t lo, std::int64_t hi,
                                                        std::int64_t len) const {
    if (len <= 0 || lo > hi) {
        return std::nullopt;
    }
    std::ptrdiff_t i = gap_at_or_before(lo);
    if (i < 0 || gaps_[i].end <= lo) {
        ++i; // lo sits in occupied space, continue with the next gap
    }
    for (; i < static_cast<std::ptrdiff_t>(gaps_.size()); ++i) {
        const std::int64_t s = std::max(gaps_[i].start, lo);
        if (s > hi) {
            return std::nullopt;
        }
        if (s + len <= gaps_[i].end) {
            return s;
        }
    }
    return std::nullopt;
}

bool FreeGapList::is_free(std::int64_t start, std::int64_t len) const {
    if (len <= 0 || start < 0 || start + len > horizon_) {
        return false;
    }
    const std::ptrdiff_t i = gap_at_or_before(start);
    return i >= 0 && start + len <= gaps_[i].end;
}

void FreeGapList::occupy(std::int64_t start, std::int64_t len) {
    const std::ptrdiff_t i = gap_at_or_before(start);
    if (i < 0 || start + len > gaps_[i].end || len <= 0) {
        throw std::logic_error("FreeGapList::occupy on a non-free range");
    }
    Gap& gap = gaps_[i];
    const bool head = gap.start < start;
    const bool tail = start + len < gap.end;
    if (head && tail) {
        const std::int64_t old_end = gap.end;
        gap.end = start;
        gaps_.insert(gaps_.begin() + i + 1, {start + len, old_end});
    } else if (head) {
        gap.end = start;
    } else if (tail) {
        gap.start = start + len;
    } else {
        gaps_.erase(gaps_.begin() + i);
    }
}

} // namespace vdba

#ifndef VDBA_GAP_LIST_HPP
#define VDBA_GAP_LIST_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace vdba {

// Ordered list of free intervals over [0, horizon). Callers model guard
// spacing by inflating each occupied burst with its trailing guard and by
// extending the horizon one guard past the frame end, so "fits in a gap"
// is exactly "keeps guard spacing and stays inside the frame".
//
// Stored as a flat sorted vector: frames hold at most a few hundred bursts
// and the merge path is timed in microseconds, so contiguous storage beats
// node-based maps.
class FreeGapList {
public:
    explicit FreeGapList(std::int64_t horizon);

    // Earliest s in [lo, hi] such that [s, s+len) is entirely free.
    std::optional<std::int64_t> find_first_fit(std::int64_t lo, std::int64_t hi,
                                               std::int64_t len) const;

    bool is_free(std::int64_t start, std::int64_t len) const;

    // Marks [start, start+len) occupied; the range must currently be free.
    void occupy(std::int64_t start, std::int64_t len);

    std::int64_t horizon() const { return horizon_; }

private:
    struct Gap {
        std::int64_t start;
        std::int64_t end;
    };

    // Index of the last gap with start <= position, or -1.
    std::ptrdiff_t gap_at_or_before(std::int64_t position) const;

    std::int64_t horizon_;
    std::vector<Gap> gaps_; // disjoint, sorted by start
};

} // namespace vdba

#endif

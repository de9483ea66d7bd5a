#ifndef VDBA_INSTRUMENTATION_HPP
#define VDBA_INSTRUMENTATION_HPP

#include <cstdint>

namespace vdba {

// Timed-region bookkeeping. The harness opens a TimedRegion around exactly
// one merge call; generation and report writing call note_untimed_work(),
// and tests assert that the violation counter never moves.
class TimedRegion {
public:
    TimedRegion();
    ~TimedRegion();
    TimedRegion(const TimedRegion&) = delete;
    TimedRegion& operator=(const TimedRegion&) = delete;
};

bool in_timed_region();
void note_untimed_work();
std::int64_t timed_region_violations();
void reset_timed_region_violations();

} // namespace vdba

#endif

#ifndef VDBA_FRAME_CONFIG_HPP
#define VDBA_FRAME_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace vdba {

/// Discretization of one upstream frame.
///
/// Time is measured in "words" of 4 bytes. The defaults describe a 125 us
/// frame carrying 38,880 words (155,520 bytes, ~9.95 Gb/s upstream), with a
/// 31-word (~0.1 us) guard interval between bursts from different senders.
/// Both capacity and guard are configurable; word duration is derived.
struct FrameConfig {
    double frame_duration_us = 125.0;
    std::int64_t capacity_words = 38'880;
    std::int64_t guard_words = 31;

    double word_duration_us() const {
        return frame_duration_us / static_cast<double>(capacity_words);
    }

    void validate() const {
        if (frame_duration_us <= 0.0) {
            throw std::invalid_argument("FrameConfig: frame_duration_us must be positive");
        }
        if (capacity_words <= 0) {
            throw std::invalid_argument("FrameConfig: capacity_words must be positive");
        }
        if (guard_words < 0 || guard_words >= capacity_words) {
            throw std::invalid_argument(
                "FrameConfig: guard_words must be in [0, capacity_words)");
        }
    }

    bool operator==(const FrameConfig&) const = default;
};

/// Converts a duration (microseconds) to the nearest whole number of words.
inline std::int64_t words_from_time(double duration_us, const FrameConfig& cfg) {
    if (duration_us < 0.0) {
        throw std::invalid_argument("words_from_time: duration must be non-negative");
    }
    return std::llround(duration_us * static_cast<double>(cfg.capacity_words) /
                        cfg.frame_duration_us);
}

/// Converts a word count back to a duration in microseconds.
inline double time_from_words(std::int64_t words, const FrameConfig& cfg) {
    return static_cast<double>(words) * cfg.frame_duration_us /
           static_cast<double>(cfg.capacity_words);
}

} // namespace vdba

#endif

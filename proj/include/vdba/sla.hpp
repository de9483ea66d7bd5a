#ifndef VDBA_SLA_HPP
#define VDBA_SLA_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "vdba/frame_config.hpp"

namespace vdba {

enum class SlaId : std::uint8_t { Type1, Type2, BestEffort };

inline const char* to_string(SlaId id) {
    switch (id) {
        case SlaId::Type1: return "type1";
        case SlaId::Type2: return "type2";
        case SlaId::BestEffort: return "best_effort";
    }
    return "?";
}

/// A service level: a packet latency target plus the fraction of a flow's
/// bursts that may miss it before the flow itself counts as breached.
///
/// Type1 is 95% compliance against a 12.5 us target, Type2 is 90% against
/// 25 us. Best effort has no latency target and never breaches.
struct SlaClass {
    SlaId id = SlaId::BestEffort;
    std::optional<std::int64_t> latency_target_words;
    double allowed_noncompliance = 1.0;

    bool is_best_effort() const { return id == SlaId::BestEffort; }

    static SlaClass type1(const FrameConfig& cfg) {
        return {SlaId::Type1, words_from_time(12.5, cfg), 0.05};
    }
    static SlaClass type2(const FrameConfig& cfg) {
        return {SlaId::Type2, words_from_time(25.0, cfg), 0.10};
    }
    static SlaClass best_effort() {
        return {SlaId::BestEffort, std::nullopt, 1.0};
    }

    bool operator==(const SlaClass&) const = default;
};

/// Strict-inequality breach rule shared by the hypervisor, the exact solver
/// and the metrics pipeline: a budget of 0.05 tolerates exactly 1 miss in 20.
inline bool exceeds_noncompliance(std::int64_t delayed, std::int64_t total,
                                  double allowed) {
    if (total <= 0) {
        return false;
    }
    return static_cast<double>(delayed) > allowed * static_cast<double>(total);
}

} // namespace vdba

#endif

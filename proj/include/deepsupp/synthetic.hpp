#pragma once

#include <cstdint>
#include <vector>

#include "deepsupp/bar.hpp"

namespace deepsupp {

enum class EventKind { Bounce, Hold, ShallowBreakRecovered, ShallowBreakFailed, DeepBreak };

// Scripted behaviour for one planted support level. The level gets a
// contiguous block of bars (a consolidation band riding ~3% above the
// level) in which its events play out in the order: bounces, holds,
// shallow recovered, shallow failed, deep breaks.
struct LevelScript {
    double price = 0.0;
    int bounces = 0;              // touch + >=1% recovery
    int high_volume_bounces = 0;  // of the bounces, how many get a volume spike
    int holds = 0;                // touch that neither recovers 1% nor dips
    int shallow_recovered = 0;    // dip below level (<3%), recloses above
    int shallow_failed = 0;       // dip below level (<3%), never recloses
    int deep_breaks = 0;          // close below level * (1 - 3%)
    int volume_price_link = 0;    // -1/0/+1: couple volume to price within the block

    int total_events() const {
        return bounces + holds + shallow_recovered + shallow_failed + deep_breaks;
    }
};

struct SyntheticConfig {
    std::size_t length = 300;
    double base_price = 100.0;  // cruise price when no level block is active
    std::vector<LevelScript> levels;
    double noise_scale = 0.0;  // relative price jitter on cruise bars, <= 0.01
    std::uint64_t seed = 1;
};

struct PlantedEvent {
    std::size_t level_index = 0;
    EventKind kind = EventKind::Bounce;
    std::size_t touch_bar = 0;
    std::size_t outcome_bar = 0;
    double touch_low = 0.0;
    double volume_ratio = 0.0;  // trailing-20-mean volume ratio at the touch bar
    bool high_volume = false;   // volume_ratio >= 1.2
};

struct PlantedLevel {
    double price = 0.0;
    std::size_t block_first = 0;  // bar span of the consolidation block
    std::size_t block_last = 0;
    double band_low = 0.0;  // close range over the block
    double band_high = 0.0;
};

// Event thresholds the script is built against (mirrors the evaluation
// defaults; kept here so the truth is self-describing).
struct PlantedTruth {
    std::vector<PlantedLevel> levels;
    std::vector<PlantedEvent> events;  // ordered by touch_bar
    double touch_tol = 0.005;
    double break_tol = 0.03;
    std::size_t horizon = 10;
};

struct SyntheticResult {
    BarSeries series;
    PlantedTruth truth;
};

// Deterministic scripted series. Every planted event is realized exactly
// (replay-verified against the event definitions before returning) and no
// unscripted bar ever enters a planted level's touch band. Throws
// std::runtime_error on infeasible scripts: levels closer than 8%, blocks
// that do not fit in `length`, noise_scale > 0.01, non-positive prices.
SyntheticResult generate_synthetic_series(const SyntheticConfig& config);

}  // namespace deepsupp

#include "deepsupp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "deepsupp/rng.hpp"

namespace deepsupp {

namespace {

constexpr double kCruiseRatio = 1.03;  // consolidation rides ~3% above its level
constexpr double kBaseVolume = 1.0e6;
constexpr double kSpikeMultiplier = 2.0;
constexpr std::size_t kEventGap = 4;  // cruise bars between events (> touch-collapse span)
constexpr std::size_t kBlockLead = 3;
constexpr std::size_t kBlockTail = 2;
constexpr double kMaxNoise = 0.01;
constexpr double kMinSeparation = 1.08;  // adjacent planted levels, ratio
constexpr std::int64_t kEpochStart = 18262 * 86400LL;  // 2020-01-01, daily bars

struct ScriptBar {
    double open, high, low, close;
    bool scripted = false;  // event bars are exact; cruise bars take jitter
    bool spike = false;
    int block = -1;  // planted-level block the bar belongs to, -1 = none
};

std::size_t event_length(EventKind kind, std::size_t horizon) {
    switch (kind) {
        case EventKind::Bounce: return 2;
        case EventKind::Hold: return 1 + horizon;
        case EventKind::ShallowBreakRecovered: return 3;
        case EventKind::ShallowBreakFailed: return 1 + horizon;
        case EventKind::DeepBreak: return 2;
    }
    return 0;
}

// Writes the exact bar script for one event starting at `pos`; returns the
// expected outcome bar. Lows of non-touch bars sit strictly outside the
// touch band [0.995L, 1.005L] unless the preceding close is below the level
// (in which case no touch can trigger).
std::size_t script_event(std::vector<ScriptBar>& bars, std::size_t pos, double L,
                         EventKind kind, std::size_t horizon) {
    auto put = [&](std::size_t i, double o, double h, double lo, double c) {
        bars[i] = {o * L, h * L, lo * L, c * L, true, false, bars[i].block};
    };
    switch (kind) {
        case EventKind::Bounce:
            put(pos, 1.01, 1.03, 1.0, 1.002);
            put(pos + 1, 1.02, 1.032, 1.015, 1.0305);
            return pos + 1;
        case EventKind::Hold:
            put(pos, 1.01, 1.03, 1.0, 1.004);
            for (std::size_t j = 1; j <= horizon; ++j)
                put(pos + j, 1.007, 1.008, 1.006, 1.007);
            return pos + horizon;
        case EventKind::ShallowBreakRecovered:
            put(pos, 1.01, 1.03, 1.0, 1.002);
            put(pos + 1, 0.99, 0.993, 0.984, 0.985);
            put(pos + 2, 1.002, 1.006, 1.001, 1.003);
            return pos + 2;
        case EventKind::ShallowBreakFailed:
            put(pos, 1.01, 1.03, 1.0, 1.002);
            for (std::size_t j = 1; j <= horizon; ++j)
                put(pos + j, 0.98, 0.985, 0.975, 0.98);
            return pos + horizon;
        case EventKind::DeepBreak:
            put(pos, 1.01, 1.03, 1.0, 1.002);
            put(pos + 1, 0.99, 0.992, 0.95, 0.955);
            return pos + 1;
    }
    return pos;
}

struct Outcome {
    EventKind kind;
    std::size_t bar;
};

// Independent replay of the touch-outcome state machine; the generator
// verifies its own script against this before returning. Bounce takes
// precedence when a within-band dip recovers by >= 1%.
Outcome replay_outcome(const std::vector<Bar>& bars, std::size_t touch, double level,
                       double touch_low, double tol, double btol, std::size_t horizon) {
    bool below_band = false;
    bool below_level = false;
    std::size_t end = std::min(touch + horizon, bars.size() - 1);
    for (std::size_t j = touch + 1; j <= end; ++j) {
        double c = bars[j].close;
        if (c < level * (1.0 - btol))
            return {EventKind::DeepBreak, j};
        if (!below_band && c >= touch_low * 1.01)
            return {EventKind::Bounce, j};
        if (below_level && c > level)
            return {EventKind::ShallowBreakRecovered, j};
        if (c < level * (1.0 - tol))
            below_band = true;
        if (c < level)
            below_level = true;
    }
    return {below_level ? EventKind::ShallowBreakFailed : EventKind::Hold, end};
}

bool in_band(double low, double level, double tol) {
    return low >= level * (1.0 - tol) && low <= level * (1.0 + tol);
}

double trailing_volume_ratio(const std::vector<Bar>& bars, std::size_t t) {
    std::size_t first = t >= 19 ? t - 19 : 0;
    double sum = 0.0;
    for (std::size_t i = first; i <= t; ++i)
        sum += bars[i].volume;
    double mean = sum / static_cast<double>(t - first + 1);
    return mean == 0.0 ? 1.0 : bars[t].volume / mean;
}

}  // namespace

SyntheticResult generate_synthetic_series(const SyntheticConfig& config) {
    if (config.length < 60)
        throw std::runtime_error("synthetic: length must be >= 60");
    if (!(config.base_price > 0.0) || !std::isfinite(config.base_price))
        throw std::runtime_error("synthetic: base_price must be positive");
    if (config.noise_scale < 0.0 || config.noise_scale > kMaxNoise)
        throw std::runtime_error("synthetic: noise_scale must be in [0, 0.01]");

    std::vector<double> prices;
    for (const auto& lvl : config.levels) {
        if (!(lvl.price > 0.0) || !std::isfinite(lvl.price))
            throw std::runtime_error("synthetic: level price must be positive");
        if (lvl.total_events() <= 0)
            throw std::runtime_error("synthetic: level script has no events");
        if (lvl.high_volume_bounces > lvl.bounces)
            throw std::runtime_error("synthetic: high_volume_bounces > bounces");
        if (std::abs(config.base_price / lvl.price - 1.0) < 0.02)
            throw std::runtime_error("synthetic: base_price too close to a level");
        prices.push_back(lvl.price);
    }
    std::sort(prices.begin(), prices.end());
    for (std::size_t i = 1; i < prices.size(); ++i) {
        if (prices[i] < prices[i - 1] * kMinSeparation)
            throw std::runtime_error("synthetic: levels closer than 8% are infeasible");
    }

    PlantedTruth truth;
    const double tol = truth.touch_tol;
    const double btol = truth.break_tol;
    const std::size_t horizon = truth.horizon;

    // Lay out the per-level event order and measure each block.
    struct Planned {
        std::size_t level;
        EventKind kind;
        bool spike;
    };
    std::vector<std::vector<Planned>> per_level;
    std::size_t needed = 0;
    for (std::size_t k = 0; k < config.levels.size(); ++k) {
        const auto& lvl = config.levels[k];
        std::vector<Planned> plan;
        for (int i = 0; i < lvl.bounces; ++i)
            plan.push_back({k, EventKind::Bounce, i < lvl.high_volume_bounces});
        for (int i = 0; i < lvl.holds; ++i)
            plan.push_back({k, EventKind::Hold, false});
        for (int i = 0; i < lvl.shallow_recovered; ++i)
            plan.push_back({k, EventKind::ShallowBreakRecovered, false});
        for (int i = 0; i < lvl.shallow_failed; ++i)
            plan.push_back({k, EventKind::ShallowBreakFailed, false});
        for (int i = 0; i < lvl.deep_breaks; ++i)
            plan.push_back({k, EventKind::DeepBreak, false});
        std::size_t block = kBlockLead + kBlockTail;
        for (const auto& p : plan)
            block += event_length(p.kind, horizon) + kEventGap;
        block -= plan.empty() ? 0 : kEventGap;
        needed += block;
        per_level.push_back(std::move(plan));
    }
    if (needed > config.length)
        throw std::runtime_error("synthetic: script needs " + std::to_string(needed) +
                                 " bars but length is " + std::to_string(config.length));

    // Script pass: mark blocks and write exact event bars.
    std::vector<ScriptBar> script(config.length);
    std::size_t cursor = 0;
    truth.levels.resize(config.levels.size());
    for (std::size_t k = 0; k < config.levels.size(); ++k) {
        const auto& lvl = config.levels[k];
        std::size_t block_first = cursor;
        cursor += kBlockLead;
        for (std::size_t e = 0; e < per_level[k].size(); ++e) {
            const auto& p = per_level[k][e];
            std::size_t len = event_length(p.kind, horizon);
            for (std::size_t j = 0; j < len; ++j)
                script[cursor + j].block = static_cast<int>(k);
            std::size_t outcome = script_event(script, cursor, lvl.price, p.kind, horizon);
            script[cursor].spike = p.spike;
            PlantedEvent ev;
            ev.level_index = k;
            ev.kind = p.kind;
            ev.touch_bar = cursor;
            ev.outcome_bar = outcome;
            ev.touch_low = lvl.price;  // every template touches at the level itself
            truth.events.push_back(ev);
            cursor += len + (e + 1 < per_level[k].size() ? kEventGap : 0);
        }
        cursor += kBlockTail;
        truth.levels[k].price = lvl.price;
        truth.levels[k].block_first = block_first;
        truth.levels[k].block_last = cursor - 1;
        for (std::size_t j = block_first; j < cursor; ++j)
            script[j].block = static_cast<int>(k);
    }

    // Fill pass: cruise bars with seeded jitter, then volumes.
    Rng rng(derive_seed(config.seed, 17));
    BarSeries series;
    series.ticker = "SYNTH";
    series.bars.resize(config.length);
    double prev_close = 0.0;
    const double s = config.noise_scale;
    for (std::size_t i = 0; i < config.length; ++i) {
        Bar& bar = series.bars[i];
        bar.timestamp = kEpochStart + static_cast<std::int64_t>(i) * 86400;
        if (script[i].scripted) {
            bar.open = script[i].open;
            bar.high = script[i].high;
            bar.low = script[i].low;
            bar.close = script[i].close;
        } else {
            double cruise = script[i].block >= 0
                                ? config.levels[script[i].block].price * kCruiseRatio
                                : config.base_price;
            double close = cruise * (1.0 + s * rng.uniform(-1.0, 1.0));
            double low = close * (1.0 - s * rng.uniform(0.3, 1.0));
            double high = close * (1.0 + s * rng.uniform(0.3, 1.0));
            double open = std::clamp(prev_close > 0.0 ? prev_close : close, low, high);
            bar.open = open;
            bar.high = high;
            bar.low = low;
            bar.close = close;
        }
        prev_close = bar.close;
    }
    for (std::size_t i = 0; i < config.length; ++i) {
        Bar& bar = series.bars[i];
        double vol = kBaseVolume;
        int blk = script[i].block;
        if (blk >= 0 && config.levels[blk].volume_price_link != 0) {
            double cruise = config.levels[blk].price * kCruiseRatio;
            double link = config.levels[blk].volume_price_link;
            vol *= std::clamp(1.0 + link * 3.0 * (bar.close / cruise - 1.0), 0.8, 1.25);
        }
        vol *= 1.0 + 5.0 * s * rng.uniform(-1.0, 1.0);
        if (script[i].spike)
            vol *= kSpikeMultiplier;
        bar.volume = vol;
    }
    check_series(series);

    // Band ranges over each block's closes.
    for (auto& pl : truth.levels) {
        double lo = series.bars[pl.block_first].close;
        double hi = lo;
        for (std::size_t j = pl.block_first; j <= pl.block_last; ++j) {
            lo = std::min(lo, series.bars[j].close);
            hi = std::max(hi, series.bars[j].close);
        }
        pl.band_low = lo;
        pl.band_high = hi;
    }

    // Verification pass 1: every planted event realizes its definition.
    for (auto& ev : truth.events) {
        const auto& bars = series.bars;
        double L = truth.levels[ev.level_index].price;
        if (ev.touch_bar == 0 || bars[ev.touch_bar - 1].close <= L ||
            !in_band(bars[ev.touch_bar].low, L, tol))
            throw std::runtime_error("synthetic: scripted touch not realized at bar " +
                                     std::to_string(ev.touch_bar));
        ev.touch_low = bars[ev.touch_bar].low;
        Outcome got = replay_outcome(bars, ev.touch_bar, L, ev.touch_low, tol, btol, horizon);
        if (got.kind != ev.kind || got.bar != ev.outcome_bar)
            throw std::runtime_error("synthetic: scripted outcome not realized at bar " +
                                     std::to_string(ev.touch_bar));
        ev.volume_ratio = trailing_volume_ratio(series.bars, ev.touch_bar);
        ev.high_volume = ev.volume_ratio >= 1.2;
    }

    // Verification pass 2: no unplanned touches of any planted level
    // (touches within 3 bars of the previous raw touch collapse).
    for (std::size_t k = 0; k < truth.levels.size(); ++k) {
        double L = truth.levels[k].price;
        std::vector<std::size_t> found;
        std::size_t last_raw = 0;
        bool have_raw = false;
        for (std::size_t t = 1; t < series.bars.size(); ++t) {
            if (!in_band(series.bars[t].low, L, tol) || series.bars[t - 1].close <= L)
                continue;
            bool collapsed = have_raw && t - last_raw <= 3;
            last_raw = t;
            have_raw = true;
            if (!collapsed)
                found.push_back(t);
        }
        std::vector<std::size_t> planted;
        for (const auto& ev : truth.events)
            if (ev.level_index == k)
                planted.push_back(ev.touch_bar);
        if (found != planted)
            throw std::runtime_error("synthetic: unplanned touch of level " +
                                     std::to_string(k));
    }

    return {std::move(series), std::move(truth)};
}

}  // namespace deepsupp

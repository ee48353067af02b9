#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "paceloop/config.hpp"
#include "paceloop/events.hpp"

namespace paceloop {

// Snapshot of the running eating-pace estimates.
struct PaceEstimate {
    int cps_last = 0;          // chews in the most recently closed interval
    double cps_running = 0.0;  // mean CPS over all closed intervals
    double cps_smoothed = 0.0; // mean of the most recent closed intervals (trigger input)
    double chews_per_min = 0.0;
    std::int64_t total_chews = 0;
    std::int64_t total_swallows = 0;
    double as_of_s = 0.0;
};

// Running swallow-inference state: inter-chew gaps since the last swallow
// (the d values of the heuristic) plus the chew-time history for the rolling
// rate window.
struct PaceState {
    std::optional<double> last_chew_time_s;
    std::vector<double> chew_gaps_since_swallow;
    std::int64_t chews_since_last_swallow = 0;
    std::vector<double> chew_times_s;    // all chews, ordered
    std::vector<int> interval_cps;       // cps of each closed interval, in order
    std::vector<double> swallow_times_s; // closing swallow of each interval
};

// A gap d hosts a swallow iff d > 0.8 s or d > 1.5 * mean inter-chew gap
// since the last swallow (strict inequalities; the adaptive branch needs at
// least one recorded gap).
bool swallow_predicate(double gap_s, std::optional<double> mean_chew_gap_s,
                       const SessionConfig& config);

struct PaceStepResult {
    std::optional<IngestionEvent> swallow;
    PaceEstimate estimate;
};

class PaceTracker {
public:
    explicit PaceTracker(const SessionConfig& config) : config_(config) {}

    // Records one detected chew. When the gap before it hosts a swallow, the
    // swallow is emitted at the gap midpoint and the interval closes first;
    // gaps that host a swallow never enter the running mean.
    // Throws Error("time-regression") when time does not advance.
    PaceStepResult on_chew(double chew_time_s);

    // Chews in the trailing 60 s; extrapolated by 60/as_of before the first
    // minute, 0 at time zero.
    double chews_per_minute(double as_of_s) const;

    // Snapshot of the pace as of a given moment. The query is time-filtered:
    // chews and intervals recorded after as_of_s are excluded, so a snapshot
    // for an earlier instant stays exact even when detection ran ahead of it.
    PaceEstimate estimate(double as_of_s) const;

    // End of meal: trailing chews close one final interval with a terminal
    // swallow at last chew + swallow_abs_gap_s.
    PaceStepResult finalize(double meal_end_s);

    const PaceState& state() const { return state_; }

private:
    std::optional<double> mean_gap() const;
    void close_interval(double swallow_time_s);

    SessionConfig config_;
    PaceState state_;
};

}  // namespace paceloop

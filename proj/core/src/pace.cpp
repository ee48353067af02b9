#include "paceloop/pace.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "paceloop/error.hpp"

namespace paceloop {

bool swallow_predicate(double gap_s, std::optional<double> mean_chew_gap_s,
                       const SessionConfig& config) {
    if (gap_s > config.swallow_abs_gap_s) {
        return true;
    }
    return mean_chew_gap_s.has_value() &&
           gap_s > config.swallow_rel_factor * *mean_chew_gap_s;
}

std::optional<double> PaceTracker::mean_gap() const {
    if (state_.chew_gaps_since_swallow.empty()) {
        return std::nullopt;
    }
    const double sum = std::accumulate(state_.chew_gaps_since_swallow.begin(),
                                       state_.chew_gaps_since_swallow.end(), 0.0);
    return sum / static_cast<double>(state_.chew_gaps_since_swallow.size());
}

void PaceTracker::close_interval(double swallow_time_s) {
    state_.interval_cps.push_back(static_cast<int>(state_.chews_since_last_swallow));
    state_.swallow_times_s.push_back(swallow_time_s);
    state_.chew_gaps_since_swallow.clear();
    state_.chews_since_last_swallow = 0;
}

PaceStepResult PaceTracker::on_chew(double chew_time_s) {
    PaceStepResult result;
    if (state_.last_chew_time_s) {
        const double last = *state_.last_chew_time_s;
        if (chew_time_s <= last) {
            fail("time-regression", "chew at " + std::to_string(chew_time_s) +
                                        " s not after " + std::to_string(last) + " s");
        }
        const double gap = chew_time_s - last;
        if (swallow_predicate(gap, mean_gap(), config_)) {
            const double swallow_time = last + gap / 2.0;
            result.swallow =
                IngestionEvent{EventKind::Swallow, swallow_time, 1.0, std::nullopt};
            close_interval(swallow_time);
        } else {
            state_.chew_gaps_since_swallow.push_back(gap);
        }
    }
    ++state_.chews_since_last_swallow;
    state_.chew_times_s.push_back(chew_time_s);
    state_.last_chew_time_s = chew_time_s;
    result.estimate = estimate(chew_time_s);
    return result;
}

double PaceTracker::chews_per_minute(double as_of_s) const {
    if (as_of_s <= 0.0) {
        return 0.0;
    }
    const auto& times = state_.chew_times_s;
    const auto begin = std::upper_bound(times.begin(), times.end(), as_of_s - 60.0);
    const auto end = std::upper_bound(times.begin(), times.end(), as_of_s);
    const double count = static_cast<double>(end - begin);
    if (as_of_s < 60.0) {
        return count * 60.0 / as_of_s;
    }
    return count;
}

PaceEstimate PaceTracker::estimate(double as_of_s) const {
    PaceEstimate est;
    est.as_of_s = as_of_s;
    est.total_chews = static_cast<std::int64_t>(
        std::upper_bound(state_.chew_times_s.begin(), state_.chew_times_s.end(),
                         as_of_s) -
        state_.chew_times_s.begin());
    const auto closed = static_cast<std::size_t>(
        std::upper_bound(state_.swallow_times_s.begin(), state_.swallow_times_s.end(),
                         as_of_s) -
        state_.swallow_times_s.begin());
    est.total_swallows = static_cast<std::int64_t>(closed);
    if (closed > 0) {
        est.cps_last = state_.interval_cps[closed - 1];
        const double closed_chews =
            std::accumulate(state_.interval_cps.begin(),
                            state_.interval_cps.begin() + closed, 0.0);
        est.cps_running = closed_chews / static_cast<double>(closed);

        const auto window = std::min<std::size_t>(
            closed, static_cast<std::size_t>(config_.cps_smoothing_intervals));
        const double recent =
            std::accumulate(state_.interval_cps.begin() + (closed - window),
                            state_.interval_cps.begin() + closed, 0.0);
        est.cps_smoothed = recent / static_cast<double>(window);
    }
    est.chews_per_min = chews_per_minute(as_of_s);
    return est;
}

PaceStepResult PaceTracker::finalize(double meal_end_s) {
    PaceStepResult result;
    if (state_.chews_since_last_swallow > 0 && state_.last_chew_time_s) {
        const double swallow_time = *state_.last_chew_time_s + config_.swallow_abs_gap_s;
        result.swallow = IngestionEvent{EventKind::Swallow, swallow_time, 1.0,
                                        std::nullopt};
        close_interval(swallow_time);
        meal_end_s = std::max(meal_end_s, swallow_time);
    }
    result.estimate = estimate(meal_end_s);
    return result;
}

}  // namespace paceloop

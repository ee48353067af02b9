#include "paceloop/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paceloop/error.hpp"

namespace paceloop {

double frame_rms_db(std::span<const float> frame) {
    double sum_sq = 0.0;
    for (const float sample : frame) {
        sum_sq += static_cast<double>(sample) * static_cast<double>(sample);
    }
    const double rms = std::sqrt(sum_sq / static_cast<double>(frame.size()));
    return 20.0 * std::log10(std::max(rms, kRmsFloor));
}

std::vector<FrameLevel> frame_levels(std::span<const float> samples,
                                     const SessionConfig& config) {
    const auto frame_len = static_cast<std::size_t>(config.frame_len_samples());
    const std::size_t count = samples.size() / frame_len;
    if (count == 0) {
        fail("empty-input", "block of " + std::to_string(samples.size()) +
                                " samples holds no complete frame");
    }
    const double frame_len_s = config.frame_len_ms / 1000.0;
    std::vector<FrameLevel> levels;
    levels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        levels.push_back(FrameLevel{
            static_cast<std::int64_t>(i),
            static_cast<double>(i) * frame_len_s,
            frame_rms_db(samples.subspan(i * frame_len, frame_len)),
        });
    }
    return levels;
}

std::optional<SegmentBounds> Segmenter::step(const FrameLevel& frame) {
    if (frame.index != state_.next_frame_index) {
        fail("out-of-order-frame",
             "expected frame " + std::to_string(state_.next_frame_index) +
                 ", got " + std::to_string(frame.index));
    }
    ++state_.next_frame_index;

    const bool active = frame.level_db >= config_.energy_threshold_db;
    const auto span_ms = [&](std::int64_t end_index) {
        return static_cast<double>(end_index + 1 - state_.start_index) *
               config_.frame_len_ms;
    };

    switch (state_.mode) {
        case SegmenterMode::Idle:
            if (active) {
                state_.mode = SegmenterMode::InSegment;
                state_.segment_start_s = frame.time_s;
                state_.last_active_frame_s = frame.time_s;
                state_.start_index = frame.index;
                state_.last_active_index = frame.index;
                state_.accumulated_gap_ms = 0.0;
                state_.overlong = span_ms(frame.index) > config_.max_segment_ms;
            }
            return std::nullopt;

        case SegmenterMode::InSegment:
            if (active) {
                state_.last_active_frame_s = frame.time_s;
                state_.last_active_index = frame.index;
                if (span_ms(frame.index) > config_.max_segment_ms) {
                    state_.overlong = true;
                }
                return std::nullopt;
            }
            state_.mode = SegmenterMode::InGap;
            state_.accumulated_gap_ms = config_.frame_len_ms;
            if (state_.accumulated_gap_ms > config_.silence_tolerance_ms) {
                return close_segment();
            }
            return std::nullopt;

        case SegmenterMode::InGap:
            if (active) {
                // Gap within tolerance: it is bridged and counts toward the
                // segment duration.
                state_.mode = SegmenterMode::InSegment;
                state_.last_active_frame_s = frame.time_s;
                state_.last_active_index = frame.index;
                state_.accumulated_gap_ms = 0.0;
                if (span_ms(frame.index) > config_.max_segment_ms) {
                    state_.overlong = true;
                }
                return std::nullopt;
            }
            state_.accumulated_gap_ms += config_.frame_len_ms;
            if (state_.accumulated_gap_ms > config_.silence_tolerance_ms) {
                return close_segment();
            }
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<SegmentBounds> Segmenter::flush() {
    if (state_.mode == SegmenterMode::Idle) {
        return std::nullopt;
    }
    return close_segment();
}

std::optional<SegmentBounds> Segmenter::close_segment() {
    const double frame_len_s = config_.frame_len_ms / 1000.0;
    const SegmentBounds bounds{
        static_cast<double>(state_.start_index) * frame_len_s,
        static_cast<double>(state_.last_active_index + 1) * frame_len_s};
    const double duration_ms =
        static_cast<double>(state_.last_active_index + 1 - state_.start_index) *
        config_.frame_len_ms;
    const bool valid = !state_.overlong && duration_ms >= config_.min_segment_ms &&
                       duration_ms <= config_.max_segment_ms;
    state_.mode = SegmenterMode::Idle;
    state_.accumulated_gap_ms = 0.0;
    state_.overlong = false;
    if (valid) {
        return bounds;
    }
    return std::nullopt;
}

double Segmenter::earliest_needed_s(double now_s) const {
    if (state_.mode == SegmenterMode::Idle || state_.overlong) {
        return now_s;
    }
    return state_.segment_start_s;
}

CandidateSegment extract_clip(const AudioBuffer& buffer, std::int64_t id,
                              const SegmentBounds& bounds,
                              const SessionConfig& config) {
    const double rate = static_cast<double>(config.sample_rate_hz);
    const auto begin = static_cast<std::int64_t>(std::llround(bounds.start_s * rate));
    const auto count = static_cast<std::int64_t>(
        std::llround((bounds.end_s - bounds.start_s) * rate));
    std::vector<float> clip = buffer.slice(begin, count);

    float peak = 0.0f;
    for (const float sample : clip) {
        peak = std::max(peak, std::abs(sample));
    }
    if (peak > 0.0f) {
        const float scale = 1.0f / peak;
        for (float& sample : clip) {
            sample *= scale;
        }
    }

    const auto clip_len = static_cast<std::size_t>(config.clip_len_samples());
    if (clip.size() > clip_len) {
        fail("wrong-clip-length",
             "segment of " + std::to_string(clip.size()) +
                 " samples exceeds clip length " + std::to_string(clip_len));
    }
    clip.resize(clip_len, 0.0f);

    return CandidateSegment{id, bounds.start_s, bounds.end_s, std::move(clip)};
}

}  // namespace paceloop

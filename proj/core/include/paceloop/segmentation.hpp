#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "paceloop/audio_buffer.hpp"
#include "paceloop/config.hpp"

namespace paceloop {

inline constexpr double kSilenceFloorDb = -120.0;
inline constexpr double kRmsFloor = 1e-6;

// RMS level of one frame in dBFS for [-1,1] samples.
struct FrameLevel {
    std::int64_t index = 0;
    double time_s = 0.0;   // frame start
    double level_db = kSilenceFloorDb;
};

struct SegmentBounds {
    double start_s = 0.0;
    double end_s = 0.0;
    double duration_ms() const { return (end_s - start_s) * 1000.0; }
};

// A candidate chewing cycle: frame-aligned bounds plus the classifier clip
// (peak-normalized, zero-padded at the tail to exactly clip_len_ms).
struct CandidateSegment {
    std::int64_t id = 0;
    double start_s = 0.0;
    double end_s = 0.0;
    std::vector<float> clip;
};

double frame_rms_db(std::span<const float> frame);

// One level per complete frame; the trailing partial frame is dropped.
// Throws Error("empty-input") when the block holds no complete frame.
std::vector<FrameLevel> frame_levels(std::span<const float> samples,
                                     const SessionConfig& config);

enum class SegmenterMode { Idle, InSegment, InGap };

struct SegmenterState {
    SegmenterMode mode = SegmenterMode::Idle;
    double segment_start_s = 0.0;
    double last_active_frame_s = 0.0;  // start of the most recent active frame
    double accumulated_gap_ms = 0.0;
    bool overlong = false;  // active span exceeded max_segment_ms; discard at close
    std::int64_t next_frame_index = 0;
    // Frame indices back the duration gate and emitted bounds so they stay
    // exact for any frame count (no drift from summing 0.05 s floats).
    std::int64_t start_index = 0;
    std::int64_t last_active_index = 0;
};

// Frame-energy gate feeding a duration-constrained state machine. A segment
// opens on the first active frame, bridges silences up to
// silence_tolerance_ms, and closes at the last active frame's end once the
// gap budget is exceeded. Bounds are emitted only for durations within
// [min_segment_ms, max_segment_ms]; over-long active regions are discarded
// whole (speech/motion, not a chewing cycle).
class Segmenter {
public:
    explicit Segmenter(const SessionConfig& config) : config_(config) {}

    // Feed frames in index order; returns closed bounds when a valid segment
    // ends at this frame. Throws Error("out-of-order-frame") otherwise.
    std::optional<SegmentBounds> step(const FrameLevel& frame);

    // End of stream: closes any open segment exactly as a long silence would.
    std::optional<SegmentBounds> flush();

    const SegmenterState& state() const { return state_; }

    // Earliest audio time still needed for clip extraction; everything before
    // it can be trimmed from the session buffer.
    double earliest_needed_s(double now_s) const;

private:
    std::optional<SegmentBounds> close_segment();

    SessionConfig config_;
    SegmenterState state_;
};

// Cuts [start,end) out of the session buffer, peak-normalizes to [-1,1]
// (all-zero clips stay zero) and zero-pads the tail to exactly clip_len_ms.
CandidateSegment extract_clip(const AudioBuffer& buffer, std::int64_t id,
                              const SegmentBounds& bounds,
                              const SessionConfig& config);

}  // namespace paceloop

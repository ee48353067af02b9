#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "paceloop/config.hpp"
#include "paceloop/segmentation.hpp"

namespace paceloop {

struct ScoreDecision {
    std::int64_t segment_id = 0;
    double probability = 0.0;
    bool is_chew = false;
};

// Pluggable binary chew classifier. Implementations must be deterministic:
// the same clip always yields the same probability.
class ChewScorer {
public:
    virtual ~ChewScorer() = default;
    virtual double score(const CandidateSegment& segment) const = 0;
    virtual std::string description() const = 0;
};

// Reference scorer standing in for a trained network. Two hand features over
// the same 25 ms / 10 ms framing used for mel extraction:
//
//   low_ratio = spectral energy below 2 kHz / total energy
//   band      = clamp01((low_ratio - 0.30) / 0.50)
//   burst     = clamp01((peak_frame_energy / mean_frame_energy - 1) / 3)
//   score     = band * (0.7 + 0.3 * burst)
//
// Chewing bursts are low-frequency dominant with a single burst envelope, so
// they land near 1; broadband clicks sit near 0. Degenerate (all-zero) clips
// score exactly 0.
class HeuristicScorer : public ChewScorer {
public:
    double score(const CandidateSegment& segment) const override;
    std::string description() const override { return "heuristic-band-burst v1"; }

    static constexpr double kLowBandHz = 2000.0;
};

// Per-segment probabilities produced offline by an external model.
// CSV with header "segment_id,probability", UTF-8, LF line endings.
class ScoreTable {
public:
    static ScoreTable load(const std::string& path);

    // Throws Error("missing-score") when the segment is absent.
    double lookup(std::int64_t segment_id) const;
    std::size_t size() const { return scores_.size(); }

private:
    std::map<std::int64_t, double> scores_;
};

class TableScorer : public ChewScorer {
public:
    explicit TableScorer(ScoreTable table) : table_(std::move(table)) {}
    double score(const CandidateSegment& segment) const override {
        return table_.lookup(segment.id);
    }
    std::string description() const override { return "score-table v1"; }

private:
    ScoreTable table_;
};

// is_chew iff probability >= classifier_threshold (boundary counts as chew).
ScoreDecision classify(std::int64_t segment_id, double probability,
                       const SessionConfig& config);

}  // namespace paceloop

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace paceloop {

enum class AnnLabel { Chew, Swallow };

struct AnnInterval {
    double start_s = 0.0;
    double end_s = 0.0;
    AnnLabel label = AnnLabel::Chew;

    double center_s() const { return (start_s + end_s) / 2.0; }
};

// Ground-truth chew/swallow intervals, ordered by start. Same-label
// intervals never overlap.
struct AnnotationTrack {
    std::vector<AnnInterval> intervals;
    std::string source;

    std::vector<AnnInterval> with_label(AnnLabel label) const;
    double span_s() const;  // max interval end, 0 when empty
};

// Validates ordering/overlap invariants; shared by the loader and the
// synthetic generator. Throws Error("overlap-error") with the offending rows.
AnnotationTrack make_track(std::vector<AnnInterval> intervals, std::string source);

// UTF-8 TSV: start_s<TAB>end_s<TAB>label with label in {chew, swallow}.
// A literal header line "start_s\tend_s\tlabel" is skipped when present.
AnnotationTrack load_annotations(const std::string& path);
void write_annotations(const AnnotationTrack& track, const std::string& path);

struct MatchResult {
    std::int64_t true_positives = 0;
    std::int64_t false_positives = 0;
    std::int64_t false_negatives = 0;
};

inline constexpr double kMatchToleranceS = 0.150;

// Greedy one-to-one matching in time order: each predicted event takes the
// nearest unmatched truth interval whose center lies within the tolerance.
MatchResult match_events(std::vector<double> predicted_times_s,
                         const std::vector<AnnInterval>& truth,
                         double tolerance_s = kMatchToleranceS);

struct DetectionMetrics {
    std::int64_t true_positives = 0;
    std::int64_t false_positives = 0;
    std::int64_t false_negatives = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::optional<double> accuracy;  // needs decision-level negatives
};

DetectionMetrics detection_metrics(const MatchResult& matching);
DetectionMetrics detection_metrics(std::int64_t tp, std::int64_t fp, std::int64_t fn,
                                   std::optional<std::int64_t> tn = std::nullopt);

// Per-bucket |predicted - truth| chew counts over 60 s buckets anchored at
// the first event; the partial final bucket is scaled to a per-minute rate.
// Truth chews are anchored at their interval start (the onset convention).
// Throws Error("empty-session") when both tracks are empty.
std::vector<double> chews_per_min_errors(const std::vector<double>& predicted_chews_s,
                                         const AnnotationTrack& truth);
double mae_chews_per_min(const std::vector<double>& predicted_chews_s,
                         const AnnotationTrack& truth);

// Truth swallow centers partition the meal; per interval
// |predicted chews - truth chews|. Throws Error("no-swallows") when the
// truth track has no swallow.
std::vector<double> cps_errors(const std::vector<double>& predicted_chews_s,
                               const AnnotationTrack& truth);
double mae_cps(const std::vector<double>& predicted_chews_s,
               const AnnotationTrack& truth);

struct EvaluationReport {
    DetectionMetrics detection;
    std::optional<double> mae_chews_per_min;
    std::optional<double> mae_cps;  // absent when truth has no swallow
    std::int64_t predicted_chews = 0;
    std::int64_t truth_chews = 0;
    std::int64_t predicted_swallows = 0;
    std::int64_t truth_swallows = 0;
};

EvaluationReport evaluate_against_truth(const std::vector<double>& predicted_chews_s,
                                        const std::vector<double>& predicted_swallows_s,
                                        const AnnotationTrack& truth);

std::string report_text(const EvaluationReport& report);
std::string report_csv(const EvaluationReport& report);

struct TrackStats {
    std::string name;
    double duration_s = 0.0;
    std::int64_t chews = 0;
    std::int64_t swallows = 0;
    std::optional<double> mean_cps;
};

struct DatasetStats {
    std::vector<TrackStats> per_track;
    TrackStats aggregate;
};

DatasetStats dataset_stats(std::span<const AnnotationTrack> tracks);

std::string stats_text(const DatasetStats& stats);
std::string stats_csv(const DatasetStats& stats);

}  // namespace paceloop

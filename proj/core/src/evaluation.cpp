#include "paceloop/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "paceloop/error.hpp"

namespace paceloop {

namespace {

std::string fixed(double value, int decimals = 4) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

}  // namespace

std::vector<AnnInterval> AnnotationTrack::with_label(AnnLabel label) const {
    std::vector<AnnInterval> out;
    for (const AnnInterval& interval : intervals) {
        if (interval.label == label) {
            out.push_back(interval);
        }
    }
    return out;
}

double AnnotationTrack::span_s() const {
    double span = 0.0;
    for (const AnnInterval& interval : intervals) {
        span = std::max(span, interval.end_s);
    }
    return span;
}

AnnotationTrack make_track(std::vector<AnnInterval> intervals, std::string source) {
    std::stable_sort(intervals.begin(), intervals.end(),
                     [](const AnnInterval& a, const AnnInterval& b) {
                         return a.start_s < b.start_s;
                     });
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (intervals[i].start_s >= intervals[i].end_s) {
            fail("parse-error", source + ": interval " + std::to_string(i + 1) +
                                    " has start >= end");
        }
    }
    // Same-label intervals must not overlap.
    for (const AnnLabel label : {AnnLabel::Chew, AnnLabel::Swallow}) {
        const AnnInterval* previous = nullptr;
        std::size_t previous_row = 0;
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            if (intervals[i].label != label) {
                continue;
            }
            if (previous && intervals[i].start_s < previous->end_s) {
                fail("overlap-error",
                     source + ": intervals " + std::to_string(previous_row + 1) +
                         " and " + std::to_string(i + 1) + " overlap");
            }
            previous = &intervals[i];
            previous_row = i;
        }
    }
    return AnnotationTrack{std::move(intervals), std::move(source)};
}

AnnotationTrack load_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail("io-error", "cannot open annotation file '" + path + "'");
    }
    std::vector<AnnInterval> intervals;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (line == "start_s\tend_s\tlabel") {
            continue;
        }
        const auto where = path + ":" + std::to_string(line_no);
        std::istringstream fields(line);
        std::string start_text, end_text, label_text;
        if (!std::getline(fields, start_text, '\t') ||
            !std::getline(fields, end_text, '\t') ||
            !std::getline(fields, label_text)) {
            fail("parse-error", where + ": expected start<TAB>end<TAB>label");
        }
        AnnInterval interval;
        try {
            interval.start_s = std::stod(start_text);
            interval.end_s = std::stod(end_text);
        } catch (const std::exception&) {
            fail("parse-error", where + ": bad interval bounds");
        }
        if (label_text == "chew") {
            interval.label = AnnLabel::Chew;
        } else if (label_text == "swallow") {
            interval.label = AnnLabel::Swallow;
        } else {
            fail("unknown-label", where + ": label '" + label_text + "'");
        }
        intervals.push_back(interval);
    }
    return make_track(std::move(intervals), path);
}

void write_annotations(const AnnotationTrack& track, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail("io-error", "cannot write annotation file '" + path + "'");
    }
    out << "start_s\tend_s\tlabel\n";
    for (const AnnInterval& interval : track.intervals) {
        out << fixed(interval.start_s, 3) << '\t' << fixed(interval.end_s, 3) << '\t'
            << (interval.label == AnnLabel::Chew ? "chew" : "swallow") << '\n';
    }
}

MatchResult match_events(std::vector<double> predicted_times_s,
                         const std::vector<AnnInterval>& truth,
                         double tolerance_s) {
    std::sort(predicted_times_s.begin(), predicted_times_s.end());
    std::vector<double> centers;
    centers.reserve(truth.size());
    for (const AnnInterval& interval : truth) {
        centers.push_back(interval.center_s());
    }
    std::sort(centers.begin(), centers.end());

    std::vector<bool> matched(centers.size(), false);
    MatchResult result;
    for (const double predicted : predicted_times_s) {
        // Nearest unmatched center within tolerance.
        const auto upper = std::upper_bound(centers.begin(), centers.end(), predicted);
        std::size_t best = centers.size();
        double best_distance = std::numeric_limits<double>::infinity();
        // Scan outward on both sides; skip already-matched centers.
        for (auto i = static_cast<std::int64_t>(upper - centers.begin()) - 1; i >= 0;
             --i) {
            const double distance = predicted - centers[static_cast<std::size_t>(i)];
            if (distance > tolerance_s || distance >= best_distance) {
                break;
            }
            if (!matched[static_cast<std::size_t>(i)]) {
                best = static_cast<std::size_t>(i);
                best_distance = distance;
                break;
            }
        }
        for (auto i = static_cast<std::size_t>(upper - centers.begin());
             i < centers.size(); ++i) {
            const double distance = centers[i] - predicted;
            if (distance > tolerance_s || distance >= best_distance) {
                break;
            }
            if (!matched[i]) {
                best = i;
                best_distance = distance;
                break;
            }
        }
        if (best < centers.size()) {
            matched[best] = true;
            ++result.true_positives;
        } else {
            ++result.false_positives;
        }
    }
    result.false_negatives =
        static_cast<std::int64_t>(centers.size()) - result.true_positives;
    return result;
}

DetectionMetrics detection_metrics(const MatchResult& matching) {
    return detection_metrics(matching.true_positives, matching.false_positives,
                             matching.false_negatives);
}

DetectionMetrics detection_metrics(std::int64_t tp, std::int64_t fp, std::int64_t fn,
                                   std::optional<std::int64_t> tn) {
    DetectionMetrics metrics;
    metrics.true_positives = tp;
    metrics.false_positives = fp;
    metrics.false_negatives = fn;
    metrics.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    metrics.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    metrics.f1 = metrics.precision + metrics.recall > 0.0
                     ? 2.0 * metrics.precision * metrics.recall /
                           (metrics.precision + metrics.recall)
                     : 0.0;
    if (tn) {
        const auto total = tp + fp + fn + *tn;
        metrics.accuracy =
            total > 0 ? static_cast<double>(tp + *tn) / static_cast<double>(total) : 0.0;
    }
    return metrics;
}

std::vector<double> chews_per_min_errors(const std::vector<double>& predicted_chews_s,
                                         const AnnotationTrack& truth) {
    const std::vector<AnnInterval> truth_chews = truth.with_label(AnnLabel::Chew);
    if (predicted_chews_s.empty() && truth_chews.empty()) {
        fail("empty-session", "no predicted or truth chew events");
    }

    // Both tracks anchor on chew onsets (truth interval start = the burst
    // onset, the same convention chew events use). Buckets start at the first
    // onset so the metric is invariant to a uniform time offset; the last
    // onset closes the final bucket.
    double origin = std::numeric_limits<double>::infinity();
    double span_end = -std::numeric_limits<double>::infinity();
    for (const double t : predicted_chews_s) {
        origin = std::min(origin, t);
        span_end = std::max(span_end, t);
    }
    for (const AnnInterval& interval : truth_chews) {
        origin = std::min(origin, interval.start_s);
        span_end = std::max(span_end, interval.start_s);
    }

    const double span = span_end - origin;
    const auto buckets =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / 60.0)));
    std::vector<double> predicted_counts(buckets, 0.0);
    std::vector<double> truth_counts(buckets, 0.0);
    const auto bucket_of = [&](double t) {
        return std::min(buckets - 1,
                        static_cast<std::size_t>(std::max(0.0, (t - origin) / 60.0)));
    };
    for (const double t : predicted_chews_s) {
        predicted_counts[bucket_of(t)] += 1.0;
    }
    for (const AnnInterval& interval : truth_chews) {
        truth_counts[bucket_of(interval.start_s)] += 1.0;
    }

    std::vector<double> errors(buckets, 0.0);
    for (std::size_t b = 0; b < buckets; ++b) {
        double error = std::abs(predicted_counts[b] - truth_counts[b]);
        if (b + 1 == buckets) {
            const double length = span - 60.0 * static_cast<double>(b);
            if (length > 0.0 && length < 60.0) {
                error *= 60.0 / length;  // partial bucket as a per-minute rate
            }
        }
        errors[b] = error;
    }
    return errors;
}

double mae_chews_per_min(const std::vector<double>& predicted_chews_s,
                         const AnnotationTrack& truth) {
    const std::vector<double> errors = chews_per_min_errors(predicted_chews_s, truth);
    return std::accumulate(errors.begin(), errors.end(), 0.0) /
           static_cast<double>(errors.size());
}

std::vector<double> cps_errors(const std::vector<double>& predicted_chews_s,
                               const AnnotationTrack& truth) {
    const std::vector<AnnInterval> swallows = truth.with_label(AnnLabel::Swallow);
    if (swallows.empty()) {
        fail("no-swallows", "truth track contains no swallow intervals");
    }
    const std::vector<AnnInterval> truth_chews = truth.with_label(AnnLabel::Chew);

    std::vector<double> boundaries;
    boundaries.reserve(swallows.size());
    for (const AnnInterval& swallow : swallows) {
        boundaries.push_back(swallow.center_s());
    }

    std::vector<double> errors;
    errors.reserve(boundaries.size());
    double previous = -std::numeric_limits<double>::infinity();
    for (const double boundary : boundaries) {
        const auto count_in = [&](double t) { return t > previous && t <= boundary; };
        std::int64_t predicted = 0;
        for (const double t : predicted_chews_s) {
            if (count_in(t)) {
                ++predicted;
            }
        }
        std::int64_t expected = 0;
        for (const AnnInterval& chew : truth_chews) {
            if (count_in(chew.start_s)) {
                ++expected;
            }
        }
        errors.push_back(std::abs(static_cast<double>(predicted - expected)));
        previous = boundary;
    }
    return errors;
}

double mae_cps(const std::vector<double>& predicted_chews_s,
               const AnnotationTrack& truth) {
    const std::vector<double> errors = cps_errors(predicted_chews_s, truth);
    return std::accumulate(errors.begin(), errors.end(), 0.0) /
           static_cast<double>(errors.size());
}

EvaluationReport evaluate_against_truth(const std::vector<double>& predicted_chews_s,
                                        const std::vector<double>& predicted_swallows_s,
                                        const AnnotationTrack& truth) {
    EvaluationReport report;
    report.detection =
        detection_metrics(match_events(predicted_chews_s, truth.with_label(AnnLabel::Chew)));
    try {
        report.mae_chews_per_min = mae_chews_per_min(predicted_chews_s, truth);
    } catch (const Error&) {
        report.mae_chews_per_min = std::nullopt;
    }
    try {
        report.mae_cps = mae_cps(predicted_chews_s, truth);
    } catch (const Error&) {
        report.mae_cps = std::nullopt;
    }
    report.predicted_chews = static_cast<std::int64_t>(predicted_chews_s.size());
    report.truth_chews = static_cast<std::int64_t>(truth.with_label(AnnLabel::Chew).size());
    report.predicted_swallows = static_cast<std::int64_t>(predicted_swallows_s.size());
    report.truth_swallows =
        static_cast<std::int64_t>(truth.with_label(AnnLabel::Swallow).size());
    return report;
}

std::string report_text(const EvaluationReport& report) {
    std::ostringstream out;
    out << "chew detection (tolerance " << fixed(kMatchToleranceS, 3) << " s)\n"
        << "  TP " << report.detection.true_positives << "  FP "
        << report.detection.false_positives << "  FN "
        << report.detection.false_negatives << "\n"
        << "  precision " << fixed(report.detection.precision) << "  recall "
        << fixed(report.detection.recall) << "  f1 " << fixed(report.detection.f1)
        << "\n";
    if (report.detection.accuracy) {
        out << "  accuracy " << fixed(*report.detection.accuracy) << "\n";
    }
    out << "pace estimation\n";
    out << "  MAE chews/min "
        << (report.mae_chews_per_min ? fixed(*report.mae_chews_per_min) : "n/a") << "\n";
    out << "  MAE chews/swallow " << (report.mae_cps ? fixed(*report.mae_cps) : "n/a")
        << "\n";
    out << "events: predicted " << report.predicted_chews << " chews / "
        << report.predicted_swallows << " swallows, truth " << report.truth_chews
        << " chews / " << report.truth_swallows << " swallows\n";
    return out.str();
}

std::string report_csv(const EvaluationReport& report) {
    std::ostringstream out;
    out << "metric,value\n"
        << "true_positives," << report.detection.true_positives << "\n"
        << "false_positives," << report.detection.false_positives << "\n"
        << "false_negatives," << report.detection.false_negatives << "\n"
        << "precision," << fixed(report.detection.precision) << "\n"
        << "recall," << fixed(report.detection.recall) << "\n"
        << "f1," << fixed(report.detection.f1) << "\n";
    if (report.detection.accuracy) {
        out << "accuracy," << fixed(*report.detection.accuracy) << "\n";
    }
    out << "mae_chews_per_min,"
        << (report.mae_chews_per_min ? fixed(*report.mae_chews_per_min) : "") << "\n"
        << "mae_cps," << (report.mae_cps ? fixed(*report.mae_cps) : "") << "\n"
        << "predicted_chews," << report.predicted_chews << "\n"
        << "truth_chews," << report.truth_chews << "\n"
        << "predicted_swallows," << report.predicted_swallows << "\n"
        << "truth_swallows," << report.truth_swallows << "\n";
    return out.str();
}

DatasetStats dataset_stats(std::span<const AnnotationTrack> tracks) {
    DatasetStats stats;
    stats.aggregate.name = "aggregate";
    for (const AnnotationTrack& track : tracks) {
        TrackStats row;
        row.name = track.source.empty() ? "track" : track.source;
        row.duration_s = track.span_s();
        row.chews = static_cast<std::int64_t>(track.with_label(AnnLabel::Chew).size());
        row.swallows =
            static_cast<std::int64_t>(track.with_label(AnnLabel::Swallow).size());
        if (row.swallows > 0) {
            row.mean_cps =
                static_cast<double>(row.chews) / static_cast<double>(row.swallows);
        }
        stats.aggregate.duration_s += row.duration_s;
        stats.aggregate.chews += row.chews;
        stats.aggregate.swallows += row.swallows;
        stats.per_track.push_back(std::move(row));
    }
    if (stats.aggregate.swallows > 0) {
        stats.aggregate.mean_cps = static_cast<double>(stats.aggregate.chews) /
                                   static_cast<double>(stats.aggregate.swallows);
    }
    return stats;
}

namespace {

void stats_row(std::ostringstream& out, const TrackStats& row) {
    out << row.name << '\t' << fixed(row.duration_s, 2) << '\t' << row.chews << '\t'
        << row.swallows << '\t' << (row.mean_cps ? fixed(*row.mean_cps, 2) : "n/a")
        << '\n';
}

}  // namespace

std::string stats_text(const DatasetStats& stats) {
    std::ostringstream out;
    out << "track\tduration_s\tchews\tswallows\tmean_cps\n";
    for (const TrackStats& row : stats.per_track) {
        stats_row(out, row);
    }
    stats_row(out, stats.aggregate);
    return out.str();
}

std::string stats_csv(const DatasetStats& stats) {
    std::ostringstream out;
    out << "track,duration_s,chews,swallows,mean_cps\n";
    const auto row_csv = [&](const TrackStats& row) {
        out << row.name << ',' << fixed(row.duration_s, 2) << ',' << row.chews << ','
            << row.swallows << ',' << (row.mean_cps ? fixed(*row.mean_cps, 2) : "")
            << '\n';
    };
    for (const TrackStats& row : stats.per_track) {
        row_csv(row);
    }
    row_csv(stats.aggregate);
    return out.str();
}

}  // namespace paceloop

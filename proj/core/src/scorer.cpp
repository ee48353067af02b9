#include "paceloop/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "paceloop/error.hpp"
#include "paceloop/fft.hpp"
#include "paceloop/mel.hpp"

namespace paceloop {

namespace {

double clamp01(double value) { return std::clamp(value, 0.0, 1.0); }

}  // namespace

double HeuristicScorer::score(const CandidateSegment& segment) const {
    const std::size_t window_len = 400;  // 25 ms @ 16 kHz
    const std::size_t stride = 160;      // 10 ms
    if (segment.clip.size() < window_len) {
        return 0.0;
    }
    const std::size_t frames = (segment.clip.size() - window_len) / stride + 1;
    static const std::vector<double> window = hann_window(window_len);

    // f < 2 kHz -> k < 2000 / (16000/512) = 64
    const std::size_t low_bins = static_cast<std::size_t>(
        kLowBandHz / (16000.0 / static_cast<double>(kFftSize)));

    double total = 0.0;
    double low = 0.0;
    double peak_frame = 0.0;
    std::vector<double> frame(window_len);
    for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t start = f * stride;
        for (std::size_t n = 0; n < window_len; ++n) {
            frame[n] = static_cast<double>(segment.clip[start + n]) * window[n];
        }
        const std::vector<double> power = power_spectrum(frame, kFftSize);
        double frame_total = 0.0;
        for (std::size_t k = 0; k < power.size(); ++k) {
            frame_total += power[k];
            if (k < low_bins) {
                low += power[k];
            }
        }
        total += frame_total;
        peak_frame = std::max(peak_frame, frame_total);
    }

    if (total <= 1e-12) {
        return 0.0;
    }
    const double low_ratio = low / total;
    const double mean_frame = total / static_cast<double>(frames);
    const double band = clamp01((low_ratio - 0.30) / 0.50);
    const double burst = clamp01((peak_frame / mean_frame - 1.0) / 3.0);
    return clamp01(band * (0.7 + 0.3 * burst));
}

ScoreTable ScoreTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail("io-error", "cannot open score table '" + path + "'");
    }
    ScoreTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line_no == 1) {
            if (line != "segment_id,probability") {
                fail("parse-error", path + ":1: expected header 'segment_id,probability'");
            }
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            fail("parse-error",
                 path + ":" + std::to_string(line_no) + ": expected 'id,probability'");
        }
        std::int64_t id = 0;
        double probability = 0.0;
        try {
            id = std::stoll(line.substr(0, comma));
            probability = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            fail("parse-error",
                 path + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
        }
        if (probability < 0.0 || probability > 1.0) {
            fail("invalid-probability",
                 path + ":" + std::to_string(line_no) + ": probability " +
                     std::to_string(probability) + " outside [0,1]");
        }
        table.scores_[id] = probability;
    }
    return table;
}

double ScoreTable::lookup(std::int64_t segment_id) const {
    const auto it = scores_.find(segment_id);
    if (it == scores_.end()) {
        fail("missing-score",
             "segment " + std::to_string(segment_id) + " absent from score table");
    }
    return it->second;
}

ScoreDecision classify(std::int64_t segment_id, double probability,
                       const SessionConfig& config) {
    return ScoreDecision{segment_id, probability,
                         probability >= config.classifier_threshold};
}

}  // namespace paceloop

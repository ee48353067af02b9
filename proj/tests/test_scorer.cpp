#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <vector>

#include "paceloop/error.hpp"
#include "paceloop/scorer.hpp"
#include "paceloop/segmentation.hpp"
#include "paceloop/synth.hpp"

using namespace paceloop;

namespace {

const SessionConfig kConfig;

// Candidate segments a given synthetic meal produces through the real
// segmentation path.
std::vector<CandidateSegment> segments_of(const SynthMeal& meal) {
    AudioBuffer buffer;
    buffer.append(meal.samples);
    Segmenter segmenter(kConfig);
    const auto levels = frame_levels(meal.samples, kConfig);
    std::vector<CandidateSegment> segments;
    std::int64_t id = 0;
    for (const auto& frame : levels) {
        if (const auto bounds = segmenter.step(frame)) {
            segments.push_back(extract_clip(buffer, id++, *bounds, kConfig));
        }
    }
    return segments;
}

std::string temp_csv(const std::string& content) {
    const std::string path = "/tmp/paceloop_test_scores.csv";
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("all-zero clip scores exactly zero") {
    const CandidateSegment segment{0, 0.0, 0.4, std::vector<float>(6400, 0.0f)};
    CHECK(HeuristicScorer{}.score(segment) == 0.0);
}

TEST_CASE("chew-template bursts score high, broadband clicks score low") {
    SynthMealSpec spec;
    spec.duration_s = 40.0;
    spec.seed = 21;

    const auto chew_segments = segments_of(synth_meal(spec));
    REQUIRE(chew_segments.size() > 10);
    const HeuristicScorer scorer;
    for (const auto& segment : chew_segments) {
        REQUIRE(scorer.score(segment) >= 0.9);
    }

    spec.chew_template = BurstTemplate::BroadbandArtifact;
    const auto click_segments = segments_of(synth_meal(spec));
    REQUIRE(click_segments.size() > 10);
    for (const auto& segment : click_segments) {
        REQUIRE(scorer.score(segment) <= 0.3);
    }
}

TEST_CASE("scorer is deterministic") {
    SynthMealSpec spec;
    spec.duration_s = 20.0;
    spec.seed = 4;
    const auto segments = segments_of(synth_meal(spec));
    REQUIRE(!segments.empty());
    const HeuristicScorer scorer;
    for (const auto& segment : segments) {
        CHECK(scorer.score(segment) == scorer.score(segment));
    }
}

TEST_CASE("classification threshold is boundary-inclusive") {
    CHECK(classify(1, 0.7, kConfig).is_chew);
    CHECK(classify(2, 0.5, kConfig).is_chew);
    CHECK_FALSE(classify(3, 0.49, kConfig).is_chew);
}

TEST_CASE("score table lookups and validation") {
    SUBCASE("valid table") {
        const auto path = temp_csv("segment_id,probability\n17,0.98\n3,0.25\n");
        const ScoreTable table = ScoreTable::load(path);
        CHECK(table.lookup(17) == doctest::Approx(0.98));
        CHECK(table.lookup(3) == doctest::Approx(0.25));
        try {
            table.lookup(99);
            FAIL("expected missing-score");
        } catch (const Error& error) {
            CHECK(error.code() == "missing-score");
        }
        std::remove(path.c_str());
    }
    SUBCASE("out-of-range probability is rejected at load") {
        const auto path = temp_csv("segment_id,probability\n17,1.3\n");
        try {
            ScoreTable::load(path);
            FAIL("expected invalid-probability");
        } catch (const Error& error) {
            CHECK(error.code() == "invalid-probability");
        }
        std::remove(path.c_str());
    }
    SUBCASE("missing header is a parse error") {
        const auto path = temp_csv("17,0.98\n");
        CHECK_THROWS_AS(ScoreTable::load(path), Error);
        std::remove(path.c_str());
    }
    SUBCASE("table scorer pulls by segment id") {
        const auto path = temp_csv("segment_id,probability\n0,0.9\n");
        const TableScorer scorer{ScoreTable::load(path)};
        const CandidateSegment segment{0, 0.0, 0.4, std::vector<float>(6400, 0.0f)};
        CHECK(scorer.score(segment) == doctest::Approx(0.9));
        std::remove(path.c_str());
    }
}

#include "paceloop/events.hpp"

#include <string>

#include "paceloop/error.hpp"

namespace paceloop {

namespace {

void check_order(double last_s, double next_s) {
    if (next_s < last_s) {
        fail("out-of-order-event",
             "event at " + std::to_string(next_s) + " s after " +
                 std::to_string(last_s) + " s");
    }
}

}  // namespace

void append_event(Timeline& timeline, const IngestionEvent& event) {
    if (!timeline.events.empty()) {
        check_order(timeline.events.back().time_s, event.time_s);
    }
    timeline.events.push_back(event);
}

void append_prompt(Timeline& timeline, const PromptEvent& prompt) {
    if (!timeline.prompts.empty()) {
        check_order(timeline.prompts.back().time_s, prompt.time_s);
    }
    timeline.prompts.push_back(prompt);
}

const char* to_string(EventKind kind) {
    return kind == EventKind::Chew ? "chew" : "swallow";
}

const char* to_string(PromptFamily family) {
    switch (family) {
        case PromptFamily::System1Nudge: return "system1_nudge";
        case PromptFamily::ControlTheoryProgress: return "control_theory_progress";
        case PromptFamily::GainFrame: return "gain_frame";
        case PromptFamily::PreMealGoal: return "pre_meal_goal";
    }
    return "unknown";
}

const char* to_string(PromptLength length) {
    switch (length) {
        case PromptLength::Short: return "short";
        case PromptLength::Medium: return "medium";
        case PromptLength::Long: return "long";
    }
    return "unknown";
}

std::optional<PromptFamily> parse_family(std::string_view text) {
    if (text == "system1_nudge") return PromptFamily::System1Nudge;
    if (text == "control_theory_progress") return PromptFamily::ControlTheoryProgress;
    if (text == "gain_frame") return PromptFamily::GainFrame;
    if (text == "pre_meal_goal") return PromptFamily::PreMealGoal;
    return std::nullopt;
}

std::optional<PromptLength> parse_length(std::string_view text) {
    if (text == "short") return PromptLength::Short;
    if (text == "medium") return PromptLength::Medium;
    if (text == "long") return PromptLength::Long;
    return std::nullopt;
}

}  // namespace paceloop

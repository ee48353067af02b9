#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace paceloop {

enum class EventKind { Chew, Swallow };

// A chew or inferred swallow on the session timeline. Chew time is the
// segment onset; swallow time is the midpoint of the inter-chew gap that
// hosts it. Heuristic swallows always carry confidence 1.0.
struct IngestionEvent {
    EventKind kind = EventKind::Chew;
    double time_s = 0.0;
    double confidence = 1.0;
    std::optional<std::int64_t> source_segment;
};

enum class PromptFamily { System1Nudge, ControlTheoryProgress, GainFrame, PreMealGoal };
enum class PromptLength { Short, Medium, Long };

struct PromptEvent {
    double time_s = 0.0;
    std::string prompt_id;
    PromptFamily family = PromptFamily::System1Nudge;
    PromptLength length_class = PromptLength::Short;
    double nominal_duration_s = 0.0;
    std::string text;  // rendered, placeholders resolved
};

// Ordered event record for one session. Wall clock is captured once at
// session start and never serialized, so logs stay reproducible.
struct Timeline {
    std::vector<IngestionEvent> events;
    std::vector<PromptEvent> prompts;
    std::chrono::system_clock::time_point session_start;
};

// Appends preserving time order; throws Error("out-of-order-event") with
// both timestamps on a regression.
void append_event(Timeline& timeline, const IngestionEvent& event);
void append_prompt(Timeline& timeline, const PromptEvent& prompt);

const char* to_string(EventKind kind);
const char* to_string(PromptFamily family);
const char* to_string(PromptLength length);
std::optional<PromptFamily> parse_family(std::string_view text);
std::optional<PromptLength> parse_length(std::string_view text);

}  // namespace paceloop

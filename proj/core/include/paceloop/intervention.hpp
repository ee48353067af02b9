#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "paceloop/config.hpp"
#include "paceloop/events.hpp"
#include "paceloop/pace.hpp"

namespace paceloop {

// Recommended chews per mouthful; ControlTheoryProgress prompts report the
// remaining distance to it.
inline constexpr int kReferenceChews = 25;

// Nominal duration bands per length class (seconds, inclusive).
inline constexpr double kShortMinS = 1.0, kShortMaxS = 2.0;
inline constexpr double kMediumMinS = 2.0, kMediumMaxS = 3.0;
inline constexpr double kLongMinS = 5.0, kLongMaxS = 10.0;

struct Prompt {
    std::string id;
    PromptFamily family = PromptFamily::System1Nudge;
    PromptLength length_class = PromptLength::Short;
    double nominal_duration_s = 0.0;
    std::string text;  // template; may contain {remaining_chews}
};

// File-loaded prompt catalog. The file is a UTF-8 TSV with header
//   id<TAB>family<TAB>length_class<TAB>nominal_duration_s<TAB>text
// '#' starts a comment line. Validation requires every in-meal family
// (system1_nudge, control_theory_progress, gain_frame) to cover every length
// class, at least one pre_meal_goal prompt, {remaining_chews} in every
// control_theory_progress template, and durations inside the class band.
class PromptLibrary {
public:
    static PromptLibrary load(const std::string& path);
    static PromptLibrary parse(std::istream& in, const std::string& name);

    // Built-in catalog used when no library path is configured.
    static const PromptLibrary& bundled_default();

    const std::vector<Prompt>& prompts() const { return prompts_; }

    std::vector<const Prompt*> by_family(PromptFamily family) const;
    // In-meal prompts (all families except PreMealGoal) of one length class.
    std::vector<const Prompt*> in_meal(PromptLength length) const;

private:
    void validate(const std::string& name) const;

    std::vector<Prompt> prompts_;
};

struct PolicyState {
    std::optional<double> last_prompt_time_s;  // in-meal prompts only
    int shorts_remaining_in_cycle = 0;
    enum class Phase { Shorts, Tail } cycle_phase = Phase::Shorts;
    std::int64_t prompts_delivered = 0;
};

// Just-in-time delivery policy: rapid-pace trigger gated by a cooldown, and
// 2-4 short prompts followed by one medium-or-long prompt per cycle.
class InterventionPolicy {
public:
    InterventionPolicy(const SessionConfig& config, const PromptLibrary* library)
        : config_(config), library_(library), rng_(config.rng_seed) {}

    // One PreMealGoal prompt at t = 0; does not start the in-meal cooldown.
    PromptEvent pre_meal_prompt();

    // True iff the smoothed CPS is below the trigger threshold, at least two
    // swallows have been observed, and the cooldown has elapsed.
    bool evaluate_trigger(const PaceEstimate& pace, double now_s) const;

    // Pre: evaluate_trigger returned true.
    PromptEvent next_prompt(const PaceEstimate& pace, double now_s);

    const PolicyState& state() const { return state_; }

private:
    const Prompt& pick(const std::vector<const Prompt*>& pool);
    PromptEvent make_event(const Prompt& prompt, const PaceEstimate& pace,
                           double now_s);

    SessionConfig config_;
    const PromptLibrary* library_;
    std::mt19937 rng_;
    PolicyState state_;
};

// Instantiates {remaining_chews} with max(0, kReferenceChews - cps_last).
std::string render_prompt_text(const std::string& text, int cps_last);

struct SessionSummary {
    double duration_s = 0.0;
    std::int64_t total_chews = 0;
    std::int64_t total_swallows = 0;
    std::optional<double> mean_cps;  // absent when no swallow closed
    double chews_per_min_mean = 0.0;
    std::int64_t prompts_delivered = 0;
    std::vector<int> interval_cps;
};

SessionSummary post_meal_summary(const Timeline& timeline,
                                 const PaceEstimate& pace_final,
                                 const std::vector<int>& interval_cps,
                                 double duration_s);

std::string summary_text(const SessionSummary& summary);

}  // namespace paceloop

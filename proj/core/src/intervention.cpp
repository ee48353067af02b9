#include "paceloop/intervention.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "paceloop/error.hpp"
#include "paceloop/rng.hpp"

namespace paceloop {

namespace {

// Default catalog: the pre-meal goal and one prompt per in-meal family and
// length class, plus extra short nudges for variety.
constexpr const char* kDefaultLibrary =
    "# id\tfamily\tlength_class\tnominal_duration_s\ttext\n"
    "goal_1\tpre_meal_goal\tmedium\t3.0\tRemember to chew more. Aim for at least 25 chews before swallowing.\n"
    "s1_short_1\tsystem1_nudge\tshort\t1.0\tSlow down.\n"
    "s1_short_2\tsystem1_nudge\tshort\t1.0\tMore chewing.\n"
    "s1_short_3\tsystem1_nudge\tshort\t1.0\tA bit fast.\n"
    "s1_med_1\tsystem1_nudge\tmedium\t2.5\tTake it a little slower.\n"
    "s1_long_1\tsystem1_nudge\tlong\t7.0\tYour pace is picking up. Take smaller bites and give each one a good, unhurried chew before you swallow.\n"
    "ct_short_1\tcontrol_theory_progress\tshort\t1.5\t{remaining_chews} chews to go.\n"
    "ct_med_1\tcontrol_theory_progress\tmedium\t2.5\tYou are {remaining_chews} chews away from 25.\n"
    "ct_long_1\tcontrol_theory_progress\tlong\t7.0\tYou are {remaining_chews} chews away from the recommended 25 chews. Keep chewing steadily to close the gap before your next swallow.\n"
    "gf_short_1\tgain_frame\tshort\t1.5\tSlower means fuller.\n"
    "gf_med_1\tgain_frame\tmedium\t2.5\tChewing more helps you feel full sooner.\n"
    "gf_long_1\tgain_frame\tlong\t7.0\tEating more slowly and chewing more can improve digestion and increase satiety, helping you reach your weight-loss goal sooner.\n";

bool duration_in_band(PromptLength length, double duration_s) {
    switch (length) {
        case PromptLength::Short:
            return duration_s >= kShortMinS && duration_s <= kShortMaxS;
        case PromptLength::Medium:
            return duration_s >= kMediumMinS && duration_s <= kMediumMaxS;
        case PromptLength::Long:
            return duration_s >= kLongMinS && duration_s <= kLongMaxS;
    }
    return false;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

}  // namespace

PromptLibrary PromptLibrary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail("io-error", "cannot open prompt library '" + path + "'");
    }
    return parse(in, path);
}

PromptLibrary PromptLibrary::parse(std::istream& in, const std::string& name) {
    PromptLibrary library;
    std::string line;
    int line_no = 0;
    std::set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto where = name + ":" + std::to_string(line_no);
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 5) {
            fail("parse-error", where + ": expected 5 tab-separated fields, got " +
                                    std::to_string(fields.size()));
        }
        Prompt prompt;
        prompt.id = fields[0];
        if (prompt.id.empty()) {
            fail("parse-error", where + ": empty prompt id");
        }
        if (!seen_ids.insert(prompt.id).second) {
            fail("parse-error", where + ": duplicate prompt id '" + prompt.id + "'");
        }
        const auto family = parse_family(fields[1]);
        if (!family) {
            fail("parse-error", where + ": unknown family '" + fields[1] + "'");
        }
        prompt.family = *family;
        const auto length = parse_length(fields[2]);
        if (!length) {
            fail("parse-error", where + ": unknown length class '" + fields[2] + "'");
        }
        prompt.length_class = *length;
        try {
            prompt.nominal_duration_s = std::stod(fields[3]);
        } catch (const std::exception&) {
            fail("parse-error", where + ": bad duration '" + fields[3] + "'");
        }
        if (!duration_in_band(prompt.length_class, prompt.nominal_duration_s)) {
            fail("parse-error", where + ": duration " + fields[3] +
                                    " s outside the '" + fields[2] + "' band");
        }
        prompt.text = fields[4];
        if (prompt.text.empty()) {
            fail("parse-error", where + ": empty prompt text");
        }
        if (prompt.family == PromptFamily::ControlTheoryProgress &&
            prompt.text.find("{remaining_chews}") == std::string::npos) {
            fail("parse-error",
                 where + ": control_theory_progress template lacks {remaining_chews}");
        }
        library.prompts_.push_back(std::move(prompt));
    }
    library.validate(name);
    return library;
}

void PromptLibrary::validate(const std::string& name) const {
    const PromptFamily in_meal_families[] = {PromptFamily::System1Nudge,
                                             PromptFamily::ControlTheoryProgress,
                                             PromptFamily::GainFrame};
    const PromptLength lengths[] = {PromptLength::Short, PromptLength::Medium,
                                    PromptLength::Long};
    for (const auto family : in_meal_families) {
        for (const auto length : lengths) {
            const bool covered = std::any_of(
                prompts_.begin(), prompts_.end(), [&](const Prompt& p) {
                    return p.family == family && p.length_class == length;
                });
            if (!covered) {
                fail("missing-family-coverage",
                     name + ": no '" + std::string(to_string(length)) +
                         "' prompt for family '" + to_string(family) + "'");
            }
        }
    }
    const bool has_goal =
        std::any_of(prompts_.begin(), prompts_.end(), [](const Prompt& p) {
            return p.family == PromptFamily::PreMealGoal;
        });
    if (!has_goal) {
        fail("missing-family-coverage", name + ": no pre_meal_goal prompt");
    }
}

const PromptLibrary& PromptLibrary::bundled_default() {
    static const PromptLibrary library = [] {
        std::istringstream in(kDefaultLibrary);
        return parse(in, "<bundled>");
    }();
    return library;
}

std::vector<const Prompt*> PromptLibrary::by_family(PromptFamily family) const {
    std::vector<const Prompt*> out;
    for (const Prompt& prompt : prompts_) {
        if (prompt.family == family) {
            out.push_back(&prompt);
        }
    }
    return out;
}

std::vector<const Prompt*> PromptLibrary::in_meal(PromptLength length) const {
    std::vector<const Prompt*> out;
    for (const Prompt& prompt : prompts_) {
        if (prompt.family != PromptFamily::PreMealGoal &&
            prompt.length_class == length) {
            out.push_back(&prompt);
        }
    }
    return out;
}

std::string render_prompt_text(const std::string& text, int cps_last) {
    const std::string placeholder = "{remaining_chews}";
    const int remaining = std::max(0, kReferenceChews - cps_last);
    std::string rendered = text;
    std::size_t pos = 0;
    while ((pos = rendered.find(placeholder, pos)) != std::string::npos) {
        rendered.replace(pos, placeholder.size(), std::to_string(remaining));
    }
    return rendered;
}

const Prompt& InterventionPolicy::pick(const std::vector<const Prompt*>& pool) {
    return *pool[uniform_index(rng_, static_cast<std::uint32_t>(pool.size()))];
}

PromptEvent InterventionPolicy::make_event(const Prompt& prompt,
                                           const PaceEstimate& pace,
                                           double now_s) {
    return PromptEvent{now_s,
                       prompt.id,
                       prompt.family,
                       prompt.length_class,
                       prompt.nominal_duration_s,
                       render_prompt_text(prompt.text, pace.cps_last)};
}

PromptEvent InterventionPolicy::pre_meal_prompt() {
    const auto goals = library_->by_family(PromptFamily::PreMealGoal);
    const Prompt& prompt = pick(goals);
    ++state_.prompts_delivered;
    PaceEstimate zero;
    return make_event(prompt, zero, 0.0);
}

bool InterventionPolicy::evaluate_trigger(const PaceEstimate& pace,
                                          double now_s) const {
    if (pace.total_swallows < 2) {
        return false;
    }
    if (pace.cps_smoothed >= config_.cps_trigger_threshold) {
        return false;
    }
    if (state_.last_prompt_time_s &&
        now_s - *state_.last_prompt_time_s < config_.min_prompt_interval_s) {
        return false;
    }
    return true;
}

PromptEvent InterventionPolicy::next_prompt(const PaceEstimate& pace,
                                            double now_s) {
    if (state_.cycle_phase == PolicyState::Phase::Shorts &&
        state_.shorts_remaining_in_cycle == 0) {
        state_.shorts_remaining_in_cycle =
            2 + static_cast<int>(uniform_index(rng_, 3));  // uniform {2,3,4}
    }

    const Prompt* chosen = nullptr;
    if (state_.cycle_phase == PolicyState::Phase::Shorts) {
        chosen = &pick(library_->in_meal(PromptLength::Short));
        --state_.shorts_remaining_in_cycle;
        if (state_.shorts_remaining_in_cycle == 0) {
            state_.cycle_phase = PolicyState::Phase::Tail;
        }
    } else {
        const PromptLength length =
            uniform01(rng_) < 0.5 ? PromptLength::Medium : PromptLength::Long;
        chosen = &pick(library_->in_meal(length));
        state_.cycle_phase = PolicyState::Phase::Shorts;
        state_.shorts_remaining_in_cycle = 0;  // next cycle re-draws
    }

    state_.last_prompt_time_s = now_s;
    ++state_.prompts_delivered;
    return make_event(*chosen, pace, now_s);
}

SessionSummary post_meal_summary(const Timeline& timeline,
                                 const PaceEstimate& pace_final,
                                 const std::vector<int>& interval_cps,
                                 double duration_s) {
    SessionSummary summary;
    summary.duration_s = duration_s;
    summary.total_chews = pace_final.total_chews;
    summary.total_swallows = pace_final.total_swallows;
    if (pace_final.total_swallows > 0) {
        summary.mean_cps = pace_final.cps_running;
    }
    summary.chews_per_min_mean =
        duration_s > 0.0 ? 60.0 * static_cast<double>(pace_final.total_chews) / duration_s
                         : 0.0;
    summary.prompts_delivered = static_cast<std::int64_t>(timeline.prompts.size());
    summary.interval_cps = interval_cps;
    return summary;
}

std::string summary_text(const SessionSummary& summary) {
    std::ostringstream out;
    out << "meal duration: " << summary.duration_s << " s\n"
        << "total chews: " << summary.total_chews << "\n"
        << "total swallows: " << summary.total_swallows << "\n";
    if (summary.mean_cps) {
        out << "mean chews per swallow: " << *summary.mean_cps << "\n";
    } else {
        out << "mean chews per swallow: n/a\n";
    }
    out << "mean chews per minute: " << summary.chews_per_min_mean << "\n"
        << "prompts delivered: " << summary.prompts_delivered << "\n"
        << "per-interval chews per swallow:";
    for (const int cps : summary.interval_cps) {
        out << ' ' << cps;
    }
    out << "\n";
    return out.str();
}

}  // namespace paceloop

#pragma once

#include <memory>

#include "paceloop/config.hpp"
#include "paceloop/events.hpp"
#include "paceloop/intervention.hpp"
#include "paceloop/pace.hpp"
#include "paceloop/segmentation.hpp"

namespace paceloop {

// Everything one processing sequence owns: zeroed segmenter, pace, and
// intervention states sharing a validated config. Construction is a pure
// function of the config (same config + seed -> identical initial state);
// the wall clock is captured once for reporting and never serialized.
struct SessionState {
    SessionConfig config;
    std::shared_ptr<const PromptLibrary> library;
    Segmenter segmenter;
    PaceTracker pace;
    InterventionPolicy policy;
    Timeline timeline;
};

// Throws Error("invalid-config") naming the violated invariant; loads the
// prompt library from config.prompt_library_path (built-in default when
// empty).
SessionState new_session(const SessionConfig& config);

}  // namespace paceloop

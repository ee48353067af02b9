#include "paceloop/session.hpp"

#include <chrono>

namespace paceloop {

SessionState new_session(const SessionConfig& config) {
    validate(config);
    std::shared_ptr<const PromptLibrary> library;
    if (config.prompt_library_path.empty()) {
        // The bundled catalog is a static; alias it without ownership.
        library = std::shared_ptr<const PromptLibrary>(
            std::shared_ptr<const PromptLibrary>(), &PromptLibrary::bundled_default());
    } else {
        library = std::make_shared<const PromptLibrary>(
            PromptLibrary::load(config.prompt_library_path));
    }
    SessionState session{
        config,
        library,
        Segmenter(config),
        PaceTracker(config),
        InterventionPolicy(config, library.get()),
        Timeline{},
    };
    session.timeline.session_start = std::chrono::system_clock::now();
    return session;
}

}  // namespace paceloop

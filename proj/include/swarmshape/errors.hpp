#pragma once

#include <stdexcept>
#include <string>

namespace swarmshape {

// One exception type per failure class so callers (and the CLI) can map
// them to distinct exit codes.
struct SwarmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : SwarmError { using SwarmError::SwarmError; };
struct DegenerateRegion : SwarmError { using SwarmError::SwarmError; };
struct RegionTooThin : SwarmError { using SwarmError::SwarmError; };
struct StateError : SwarmError { using SwarmError::SwarmError; };
struct TaskError : SwarmError { using SwarmError::SwarmError; };
struct ZoneError : SwarmError { using SwarmError::SwarmError; };
struct ParamError : SwarmError { using SwarmError::SwarmError; };
struct StatsError : SwarmError { using SwarmError::SwarmError; };
struct GoalError : SwarmError { using SwarmError::SwarmError; };
struct ConfigError : SwarmError { using SwarmError::SwarmError; };      // malformed input text
struct ValidationError : SwarmError { using SwarmError::SwarmError; };  // well-formed but rejected

}  // namespace swarmshape

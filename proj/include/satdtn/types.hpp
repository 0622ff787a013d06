#pragma once

// Common aliases and error types shared by all satdtn modules.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace satdtn {

// Simulation time: integer milliseconds since the scenario epoch.
// All window arithmetic stays in exact integer math so modular phase
// computations never drift.
using TimeMs = std::int64_t;
using DurationMs = std::int64_t;

using NodeIndex = std::uint8_t;

enum class Priority { High, Normal };

// Raised when a scenario configuration is invalid. The message names the
// offending field (e.g. "nodes[2].radio: unknown profile 'X'").
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace satdtn

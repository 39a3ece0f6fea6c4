#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chaoslab {

// Invalid numeric input (non-finite state, out-of-range map argument, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally invalid configuration (bad shapes, bad integrator settings,
// unparseable or incomplete experiment specs).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A trajectory left the allowed region; carries the step index at which the
// guard fired.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::int64_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
    std::int64_t step() const { return step_; }

private:
    std::int64_t step_;
};

// Training produced a non-finite loss or weights; carries the epoch.
class TrainingDivergenceError : public std::runtime_error {
public:
    TrainingDivergenceError(const std::string& what, std::int64_t epoch)
        : std::runtime_error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
    std::int64_t epoch() const { return epoch_; }

private:
    std::int64_t epoch_;
};

// Analysis asked of a trajectory that is too short to support it.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure while writing outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chaoslab

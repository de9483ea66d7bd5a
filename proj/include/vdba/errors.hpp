#ifndef VDBA_ERRORS_HPP
#define VDBA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vdba {

// Raised when a request cannot be represented at all (e.g. a burst larger
// than the frame), as opposed to one that merely loses arbitration.
class InstanceError : public std::runtime_error {
public:
    explicit InstanceError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the exact solver when an instance exceeds its configured limits.
class InstanceLimitError : public InstanceError {
public:
    explicit InstanceLimitError(const std::string& what) : InstanceError(what) {}
};

// Raised by the traffic generator when a load target cannot be realized.
class GenerationError : public std::runtime_error {
public:
    explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the config parser; message carries file/line context.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vdba

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace stigmem {

// Invalid static configuration: world fractions, presets, config files.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad call-site argument: out-of-grid position, out-of-range strength.
class argument_error : public std::invalid_argument {
public:
    explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical integration produced a non-finite state.
class integration_error : public std::runtime_error {
public:
    explicit integration_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stigmem

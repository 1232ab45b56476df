#pragma once

#include <stdexcept>
#include <string>

namespace crisisnet {

// Single exception type for all library failures. Messages are meant to be
// shown to the CLI user verbatim, so they name the offending rows/codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace crisisnet

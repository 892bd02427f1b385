#pragma once

#include <stdexcept>
#include <string>

namespace armauth {

/// Raised when an operation's preconditions on its inputs are violated.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace armauth

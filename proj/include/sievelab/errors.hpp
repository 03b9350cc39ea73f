#pragma once

#include <stdexcept>
#include <string>

namespace sievelab {

// Malformed input: bad dimensions, invalid documents, violated preconditions.
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// A bounded deterministic search ran out of budget before finding a witness.
struct search_exhausted : std::runtime_error {
    explicit search_exhausted(const std::string& what) : std::runtime_error(what) {}
};

// A size guard tripped: the instance is beyond the desk scale this library targets.
struct scale_exceeded : std::runtime_error {
    explicit scale_exceeded(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sievelab

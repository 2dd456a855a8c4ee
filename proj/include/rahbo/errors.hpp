#pragma once

#include <stdexcept>

namespace rahbo {

// Violated precondition: bad arguments, malformed configuration.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical routine could not proceed (e.g. factorization failure
// after exhausting the jitter ladder).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rahbo

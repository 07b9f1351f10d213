#pragma once

#include <stdexcept>
#include <string>

namespace krein {

// Bad user input: malformed files, violated preconditions, out-of-range
// arguments.  CLI maps this to exit code 2.
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation that could not be completed to the requested accuracy:
// step-size underflow, exhausted search bounds, pole proximity, missing
// tail model.  CLI maps this to exit code 3.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace krein

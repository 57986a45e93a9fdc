#pragma once

#include <stdexcept>
#include <string>

namespace blf {

// Parameter triple lies outside the admissible range of the requested norm;
// the message quotes the admissible interval.
class RangeError : public std::runtime_error {
public:
    explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown (singular symbol, unresolvable grid, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace blf

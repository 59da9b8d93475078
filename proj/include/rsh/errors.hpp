#pragma once

#include <stdexcept>
#include <string>

namespace rsh {

// Raised when a computation cannot certify its own numerical result
// (e.g. FFT rounding drift above the integer-recovery threshold).
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rsh

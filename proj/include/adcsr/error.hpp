#pragma once

#include <stdexcept>

namespace adcsr {

// Error taxonomy maps onto the CLI exit codes: config -> 1, data -> 2, numeric -> 3.
// Shape errors are programming/config mistakes surfaced at op boundaries.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace adcsr

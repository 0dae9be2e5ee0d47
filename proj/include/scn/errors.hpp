#pragma once

#include <stdexcept>
#include <string>

namespace scn {

// File and format problems: missing files, bad magic, truncated payloads.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Contract violations: bad dimensions, invalid parameters, shape mismatches.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace scn

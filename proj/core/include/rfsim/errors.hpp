#pragma once

#include <stdexcept>
#include <string>

namespace rfsim {

// Error taxonomy mirrors the CLI exit codes: config 2, numeric 3, io 4.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : error {
    using error::error;
};

struct numeric_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

}  // namespace rfsim

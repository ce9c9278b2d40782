#pragma once

#include <stdexcept>
#include <string>

namespace unaah {

// CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CLI exit code 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite loss during training. CLI exit code 4.
struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& msg, int epoch_, int batch_)
        : std::runtime_error(msg), epoch(epoch_), batch(batch_) {}
    int epoch;
    int batch;
};

}  // namespace unaah

#pragma once

#include <stdexcept>

namespace photonz {

// Analytic tail mass beyond the requested n_max exceeds the allowed tolerance.
struct truncation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The inverse Bernoulli transform cannot be evaluated reliably at the
// requested efficiency (overflow, or negativity beyond the caller's bound).
struct ill_conditioned_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A vacuum calibration record is unusable (too short, zero variance, ...).
struct calibration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed CSV/JSON input; the message names the offending file and line.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation produced a non-finite result (degenerate data, overflow).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace photonz

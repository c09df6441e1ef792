#ifndef AERIS_ERRORS_HPP
#define AERIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aeris {

// Thrown when an iterative numerical procedure fails to reach its target
// accuracy within its budget. Carries the partial result and the last
// error-bound estimate so callers can decide whether to salvage it.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double partial, double bound)
        : std::runtime_error(what), partial_value(partial), error_bound(bound) {}

    double partial_value;
    double error_bound;
};

// Thrown when a numerically exact relation degenerates (e.g. a matched
// variance comes out non-positive through cancellation).
class degeneracy_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an intermediate value leaves its admissible region by more
// than the method tolerance (sign flips, >1 CDF values, non-finite sums).
class instability_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an enumeration guard rejects an instance as too large.
class capacity_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by file readers; line / column context is baked into the message.
class parse_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when model training diverges; carries the epoch index.
class training_error : public std::runtime_error {
public:
    training_error(const std::string& what, int epoch_index)
        : std::runtime_error(what), epoch(epoch_index) {}

    int epoch;
};

} // namespace aeris

#endif

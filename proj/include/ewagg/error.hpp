#ifndef EWAGG_ERROR_HPP
#define EWAGG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ewagg {

/// Base class of everything this library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent inputs (bad dimensions, non-finite entries, empty vectors).
struct invalid_input_error : error {
    using error::error;
};

/// Inputs that are well-formed but carry no usable information
/// (e.g. all prior mass sits on candidates with infinite loss).
struct degenerate_input_error : invalid_input_error {
    using invalid_input_error::invalid_input_error;
};

/// A stated precondition of a formula does not hold; the message names the failed inequality.
struct precondition_error : error {
    using error::error;
};

/// Noise model / bound regime combinations the theory does not cover.
struct inadmissible_error : precondition_error {
    using precondition_error::precondition_error;
};

/// Operations a model kind cannot perform (missing generator, unsupported family).
struct unsupported_error : error {
    using error::error;
};

/// Configuration parsing and validation failures.
struct config_error : error {
    using error::error;
};

/// Filesystem failures; the message names the path.
struct io_error : error {
    using error::error;
};

} // namespace ewagg

#endif

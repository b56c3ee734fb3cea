#pragma once

#include <stdexcept>
#include <string>

namespace hsad {

/// Failure categories raised by the library. The CLI maps these onto
/// process exit codes (see tools/).
enum class errc {
    missing_key,
    invalid_value,
    size_mismatch,
    non_finite_value,
    out_of_bounds,
    unsupported_order,
    odd_length,
    too_short,
    length_mismatch,
    target_too_large,
    empty_sample_set,
    too_few_samples,
    singular_after_ridge,
    not_symmetric,
    no_convergence,
    config_mismatch,
    fraction_out_of_range,
    out_of_bounds_implant,
    dimension_mismatch,
    degenerate_truth,
    io_failure,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace hsad

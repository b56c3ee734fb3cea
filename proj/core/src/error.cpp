#include "hsad/error.hpp"

namespace hsad {

const char* errc_name(errc code) noexcept {
    switch (code) {
    case errc::missing_key: return "MissingKey";
    case errc::invalid_value: return "InvalidValue";
    case errc::size_mismatch: return "SizeMismatch";
    case errc::non_finite_value: return "NonFiniteValue";
    case errc::out_of_bounds: return "OutOfBounds";
    case errc::unsupported_order: return "UnsupportedOrder";
    case errc::odd_length: return "OddLength";
    case errc::too_short: return "TooShort";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::target_too_large: return "TargetTooLarge";
    case errc::empty_sample_set: return "EmptySampleSet";
    case errc::too_few_samples: return "TooFewSamples";
    case errc::singular_after_ridge: return "SingularAfterRidge";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::no_convergence: return "NoConvergence";
    case errc::config_mismatch: return "ConfigMismatch";
    case errc::fraction_out_of_range: return "FractionOutOfRange";
    case errc::out_of_bounds_implant: return "OutOfBoundsImplant";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::degenerate_truth: return "DegenerateTruth";
    case errc::io_failure: return "IoFailure";
    }
    return "UnknownError";
}

} // namespace hsad

#include "forecastability/error.hpp"

namespace fcast {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::degenerate_input: return "degenerate-input";
        case Errc::series_too_short: return "series-too-short";
        case Errc::window_too_large: return "window-too-large";
        case Errc::window_too_small: return "window-too-small";
        case Errc::embedding_infeasible: return "embedding-infeasible";
        case Errc::estimation_impossible: return "estimation-impossible";
        case Errc::invalid_frequency: return "invalid-frequency";
        case Errc::aliasing: return "aliasing";
        case Errc::divergence: return "divergence";
        case Errc::degenerate_spectrum: return "degenerate-spectrum";
        case Errc::undefined_denominator: return "undefined-denominator";
        case Errc::undefined_correlation: return "undefined-correlation";
        case Errc::non_finite: return "non-finite";
        case Errc::malformed_csv: return "malformed-csv";
        case Errc::unmapped_column: return "unmapped-column";
        case Errc::duplicate_key: return "duplicate-key";
        case Errc::non_contiguous: return "non-contiguous";
        case Errc::misaligned_series: return "misaligned-series";
        case Errc::invalid_config: return "invalid-config";
        case Errc::io: return "io";
    }
    return "unknown";
}

ErrorCategory category_of(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_config:
            return ErrorCategory::usage;
        case Errc::non_finite:
        case Errc::malformed_csv:
        case Errc::unmapped_column:
        case Errc::duplicate_key:
        case Errc::non_contiguous:
        case Errc::misaligned_series:
        case Errc::invalid_frequency:
        case Errc::io:
            return ErrorCategory::data;
        default:
            return ErrorCategory::computation;
    }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace fcast

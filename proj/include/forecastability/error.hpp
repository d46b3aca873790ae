#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fcast {

enum class Errc {
    degenerate_input,
    series_too_short,
    window_too_large,
    window_too_small,
    embedding_infeasible,
    estimation_impossible,
    invalid_frequency,
    aliasing,
    divergence,
    degenerate_spectrum,
    undefined_denominator,
    undefined_correlation,
    non_finite,
    malformed_csv,
    unmapped_column,
    duplicate_key,
    non_contiguous,
    misaligned_series,
    invalid_config,
    io,
};

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorCategory { usage, data, computation };

[[nodiscard]] std::string_view to_string(Errc code) noexcept;
[[nodiscard]] ErrorCategory category_of(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    [[nodiscard]] Errc code() const noexcept { return code_; }
    [[nodiscard]] ErrorCategory category() const noexcept { return category_of(code_); }

private:
    Errc code_;
};

}  // namespace fcast

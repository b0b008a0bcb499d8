#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bspf {

enum class ErrorKind {
    invalid_domain,
    non_monotone_map,
    non_finite_sample,
    insufficient_basis,
    out_of_domain,
    index_out_of_range,
    singular_kkt,
    solver_failure,
    dimension_mismatch,
    grid_too_small,
    step_underflow,
    nan_detected,
    drying,
    invalid_config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-checkable kind alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace bspf

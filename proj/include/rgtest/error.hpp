#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rgtest {

enum class ErrorKind {
    invalid_input,
    infeasible_k,
    invalid_k,
    invalid_degree,
    invalid_weight,
    invalid_df,
    degenerate_size,
    ill_conditioned,
    budget_exceeded,
    config,
    internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace rgtest

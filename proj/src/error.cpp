#include "rgtest/error.hpp"

namespace rgtest {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_input: return "invalid-input";
        case ErrorKind::infeasible_k: return "infeasible-k";
        case ErrorKind::invalid_k: return "invalid-k";
        case ErrorKind::invalid_degree: return "invalid-degree";
        case ErrorKind::invalid_weight: return "invalid-weight";
        case ErrorKind::invalid_df: return "invalid-df";
        case ErrorKind::degenerate_size: return "degenerate-size";
        case ErrorKind::ill_conditioned: return "ill-conditioned-graph";
        case ErrorKind::budget_exceeded: return "budget-exceeded";
        case ErrorKind::config: return "config";
        case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

}  // namespace rgtest

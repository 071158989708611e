#include "kgo/error.hpp"

namespace kgo {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
        case Errc::invalid_params: return "InvalidParams";
        case Errc::degenerate_indicial: return "DegenerateIndicial";
        case Errc::zero_frequency: return "ZeroFrequency";
        case Errc::domain_error: return "DomainError";
        case Errc::not_converged: return "NotConverged";
        case Errc::no_root_found: return "NoRootFound";
        case Errc::no_convergence: return "NoConvergence";
        case Errc::negative_discriminant: return "NegativeDiscriminant";
        case Errc::eval_error: return "EvalError";
        case Errc::zero_norm: return "ZeroNorm";
        case Errc::discretization_error: return "DiscretizationError";
    }
    return "Unknown";
}

} // namespace kgo

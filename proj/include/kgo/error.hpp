#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgo {

/// Failure categories raised by the solver library.
enum class Errc {
    invalid_params,
    degenerate_indicial,
    zero_frequency,
    domain_error,
    not_converged,
    no_root_found,
    no_convergence,
    negative_discriminant,
    eval_error,
    zero_norm,
    discretization_error,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error
{
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

} // namespace kgo

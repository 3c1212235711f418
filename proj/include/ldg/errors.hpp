#pragma once

#include <stdexcept>
#include <string>

namespace ldg {

/// Raised when an input violates a documented precondition (bad mesh size,
/// out-of-range parameter, malformed file). Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the forward solver. Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
  public:
    enum class Kind { NonConvergence, SingularLinearSolve };

    SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw ValidationError(message);
    }
}

}  // namespace ldg

#ifndef GMROI_ERRORS_HPP
#define GMROI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gmroi {

// Base error. `category()` is a stable machine-readable token; the CLI maps
// it onto its exit diagnostics, tests match on it.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(category + ": " + message),
          category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

struct ZeroInventoryError : Error {
    explicit ZeroInventoryError(const std::string& msg)
        : Error("zero_inventory", msg) {}
};

struct InvalidConfigError : Error {
    explicit InvalidConfigError(const std::string& msg)
        : Error("invalid_config", msg) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg)
        : Error("validation_error", msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse_error", msg) {}
};

struct InfeasibleError : Error {
    explicit InfeasibleError(const std::string& msg)
        : Error("infeasible", msg) {}
};

struct MaxIterationsError : Error {
    explicit MaxIterationsError(const std::string& msg)
        : Error("max_iterations_exceeded", msg) {}
};

struct SubproblemFailureError : Error {
    explicit SubproblemFailureError(const std::string& msg)
        : Error("subproblem_failure", msg) {}
};

struct InvalidWarmStartError : Error {
    explicit InvalidWarmStartError(const std::string& msg)
        : Error("invalid_warm_start", msg) {}
};

struct BracketingFailedError : Error {
    explicit BracketingFailedError(const std::string& msg)
        : Error("bracketing_failed", msg) {}
};

struct BudgetOverflowError : Error {
    explicit BudgetOverflowError(const std::string& msg)
        : Error("budget_overflow", msg) {}
};

struct TooLargeError : Error {
    explicit TooLargeError(const std::string& msg) : Error("too_large", msg) {}
};

}  // namespace gmroi

#endif  // GMROI_ERRORS_HPP

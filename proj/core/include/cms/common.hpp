#pragma once

#include <stdexcept>
#include <string>

namespace cms {

// Absolute tolerance used for probability sums and value comparisons.
inline constexpr double kTol = 1e-9;

// Slope differences below this are treated as collinear when merging
// piecewise-linear breakpoints.
inline constexpr double kSlopeMergeTol = 1e-12;

inline constexpr int kDefaultTreeNodeBudget = 100000;
inline constexpr int kDefaultSupportCap = 100000;
inline constexpr int kDefaultBreakpointBudget = 100000;
inline constexpr int kDefaultEnumerationBudget = 20;
inline constexpr long long kDefaultProductStateBudget = 2000000;

// Raised when an input violates a documented precondition or validity rule.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an exact computation would exceed its configured budget.
// Budgets are hard errors; nothing silently truncates.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a policy does not match the process it is run on.
class PolicyMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cms

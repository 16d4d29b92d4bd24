#pragma once
#include <stdexcept>
#include <string>

namespace probprem {

// Invalid construction arguments, domain violations, derivative-at-kink queries.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No sign change found over the scanned bracket.
class no_bracket_error : public solver_error {
 public:
  using solver_error::solver_error;
};

}  // namespace probprem

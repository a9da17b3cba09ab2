#pragma once

#include <stdexcept>
#include <string>

namespace lbk {

// Requested grade/order is beyond what the context was built for.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Precondition violation: mismatched orders/alphabets, non-primitive input, ...
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int column)
      : std::runtime_error(std::move(msg) + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        line(line),
        column(column) {}
  int line;
  int column;
};

// Two independently computed routes disagreed; an algebra bug, not user error.
struct InternalCheckError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace lbk

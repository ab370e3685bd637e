#pragma once

#include <stdexcept>
#include <string>

namespace splitsurf {

// Raised when a computation cannot be decided within the library's bounds
// (torsion degree caps, unresolved BSGS ambiguity). Callers must not treat
// this as a negative answer.
class Undetermined : public std::runtime_error {
 public:
  explicit Undetermined(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace splitsurf

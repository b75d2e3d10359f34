#pragma once

#include <stdexcept>
#include <string>

namespace ifsp {

// Error taxonomy shared across the library. The CLI maps these onto process
// exit codes: DomainError/ConstructionError are caller mistakes (bad arguments,
// malformed inputs, exit 2), IntegrityError marks a numeric invariant violated
// at runtime (non-finite chain state, failed bracket, non-monotone map; exit 3).

class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

class ConstructionError : public std::invalid_argument {
public:
  explicit ConstructionError(const std::string& msg) : std::invalid_argument(msg) {}
};

class IntegrityError : public std::runtime_error {
public:
  explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ifsp

#pragma once

#include <stdexcept>
#include <string>

namespace skewprod {

/// A small divisor vanished to full precision (rational rotation number).
class DegenerateDivisor : public std::runtime_error {
 public:
  explicit DegenerateDivisor(const std::string& what) : std::runtime_error(what) {}
};

/// The requested computation needs more fractional bits than allowed.
class InsufficientPrecision : public std::runtime_error {
 public:
  explicit InsufficientPrecision(const std::string& what) : std::runtime_error(what) {}
};

/// Inputs violate a documented precondition or schema.
class MalformedInput : public std::invalid_argument {
 public:
  explicit MalformedInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Two series or germs with different truncation orders were combined.
class TruncationMismatch : public std::invalid_argument {
 public:
  explicit TruncationMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// g_0(w) == w to truncation: the linearizable case is not handled here.
class IdenticallyLinearFiber : public std::invalid_argument {
 public:
  explicit IdenticallyLinearFiber(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace skewprod

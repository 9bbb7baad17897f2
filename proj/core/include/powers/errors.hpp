#pragma once

#include <stdexcept>
#include <string>

namespace powers {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A generator index referenced a generator outside the descriptor's rank.
class InvalidGenerator : public Error {
 public:
  using Error::Error;
};

/// A group descriptor violated a structural constraint (rank, nesting depth).
class InvalidDescriptor : public Error {
 public:
  using Error::Error;
};

/// Two operands belong to different groups.
class GroupMismatch : public Error {
 public:
  using Error::Error;
};

/// Two operands carry different scalar modes (exact vs float).
class ModeMismatch : public Error {
 public:
  using Error::Error;
};

/// A support, ball, or iteration budget was exceeded. Budgets are hard
/// errors rather than silent truncations: truncating would invalidate
/// certified upper bounds.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An operation specific to one group backend was called on another.
class WrongBackend : public Error {
 public:
  using Error::Error;
};

/// Convex weights did not sum to one or contained a negative entry.
class WeightError : public Error {
 public:
  using Error::Error;
};

/// A conjugation target was the identity (excluded by every averaging
/// condition the engine certifies).
class IdentityTarget : public Error {
 public:
  using Error::Error;
};

/// A geometric conjugator schedule was seeded with the identity.
class IdentityGenerator : public Error {
 public:
  using Error::Error;
};

/// A certificate failed structural validation before re-derivation.
class MalformedCertificate : public Error {
 public:
  using Error::Error;
};

/// Text or JSON input did not parse.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace powers

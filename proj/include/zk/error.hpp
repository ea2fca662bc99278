#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zk {

/// Base class for all recoverable library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad group string, matrix literal, unknown experiment id.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A configured resource bound (field size, group order) would be exceeded.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// The characteristic divides n for an SL_n family and no override was given.
class GuardViolation : public Error {
 public:
  using Error::Error;
};

/// An operation precondition failed (singular matrix, zero parameter, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Process-wide resource limits. Set once at startup (CLI flags or
/// environment), read everywhere else.
struct Limits {
  std::uint64_t max_field = std::uint64_t{1} << 20;
  std::uint64_t max_group = 2'000'000;
  bool allow_bad_char = false;
};

Limits& limits();

/// Reads ZK_MAX_GROUP and ZK_MAX_FIELD into limits(). Unparsable values are
/// reported as UsageError.
void load_limits_from_env();

/// RAII override of the global limits, restored on scope exit.
class ScopedLimits {
 public:
  explicit ScopedLimits(const Limits& l) : saved_(limits()) { limits() = l; }
  ~ScopedLimits() { limits() = saved_; }
  ScopedLimits(const ScopedLimits&) = delete;
  ScopedLimits& operator=(const ScopedLimits&) = delete;

 private:
  Limits saved_;
};

}  // namespace zk

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace oppmdp {

/// Index of a basic state, 0-based.
using StateIndex = std::size_t;

/// Opaque action identifier; meaning is owned by the model that issued it.
using ActionId = std::uint32_t;

struct Transition {
  StateIndex next;
  double probability;
};

/// A probability vector failed the normalization check.
class InvalidDistribution : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The model violated its own contract (empty menu, illegal action, ...).
class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A quantity that must be finite was not. Carries the slot where it happened
/// when known.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, std::int64_t slot = -1)
      : std::runtime_error(what), slot_(slot) {}

  std::int64_t slot() const noexcept { return slot_; }

 private:
  std::int64_t slot_;
};

/// Brute-force enumeration would exceed its guard.
class InstanceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Invalid user-facing configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace oppmdp

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace satrrm {

/// Input failed schema or invariant checks. `field()` names the offender so
/// callers (and the CLI) can report which part of the document is bad.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// An exhaustive-search guard rail rejected the instance size.
class GuardRailError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace satrrm

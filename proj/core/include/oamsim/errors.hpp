// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace oamsim {

/// Base class for all library errors. Subclasses map onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Precondition or domain violation (bad parameters, empty columns, ...). Exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (CSV/JSON syntax, wrong labels, ...). Exit code 3.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A numerical invariant that must hold by construction was breached.
/// Indicates an implementation bug, never a physics result. Exit code 4.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace oamsim

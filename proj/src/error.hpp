// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace porohdg {

enum class ErrorKind {
  InvalidInput,  // violated precondition on an argument
  Config,        // malformed or inconsistent configuration
  Solver,        // factorization or linear solve failure
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace porohdg

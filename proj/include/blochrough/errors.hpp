// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_ERRORS_HPP
#define BLOCHROUGH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blochrough
{

// Base class for all library errors.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (non-finite input, point below the band, ...).
class DomainError : public Error
{
public:
  using Error::Error;
};

// Invalid construction parameters.
class ParameterError : public Error
{
public:
  using Error::Error;
};

// The flattening map is not a diffeomorphism at some point.
class SingularMapError : public Error
{
public:
  using Error::Error;
};

// Evaluation at a singular point (Green's function at its source).
class SingularityError : public Error
{
public:
  using Error::Error;
};

// Explicit storage would exceed the configured budget.
class StorageGuardError : public Error
{
public:
  using Error::Error;
};

// Relative error requested against a vanishing reference.
class DegenerateReferenceError : public Error
{
public:
  using Error::Error;
};

// Zero pivot during incomplete factorization.
class PivotError : public Error
{
public:
  PivotError(int block, int row)
    : Error("zero pivot in block " + std::to_string(block) + ", row " + std::to_string(row)),
      block_(block), row_(row)
  {
  }
  int block() const { return block_; }
  int row() const { return row_; }

private:
  int block_, row_;
};

// Malformed configuration text.
class ParseError : public Error
{
public:
  ParseError(int line, const std::string &msg)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line)
  {
  }
  int line() const { return line_; }

private:
  int line_;
};

// Failure inside one pipeline stage of an experiment run.
class StageError : public Error
{
public:
  StageError(const std::string &stage, const std::string &msg)
    : Error("stage '" + stage + "' failed: " + msg), stage_(stage)
  {
  }
  const std::string &stage() const { return stage_; }

private:
  std::string stage_;
};

}  // namespace blochrough

#endif  // BLOCHROUGH_ERRORS_HPP

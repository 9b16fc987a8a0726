#pragma once

#include <stdexcept>
#include <string>

namespace adcal {

// Caller bug or malformed argument (wrong map length, unknown query id, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Text that could not be parsed (rationals, instance files, click logs).
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A well-formed request whose answer is a domain outcome rather than a value.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pr_f is undefined because the map shows no ad at all.
class EmptySelection : public DomainError {
 public:
  EmptySelection() : DomainError("empty selection: no ad shows under this map") {}
};

// Exhaustive search would exceed the caller's configuration budget.
class BudgetExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace adcal

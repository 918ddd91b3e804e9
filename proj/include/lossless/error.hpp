#pragma once

#include <stdexcept>
#include <string>

namespace lossless {

enum class Errc {
  UnknownRelation,
  UnknownAttribute,
  HeaderClash,
  HeaderMismatch,
  SortMismatch,
  DomainMissing,
  MissingView,
  ParseError,
  InvalidSchema,
  NoJustifyingDependency,
  AttributePartitionInvalid,
  UnsupportedCondition,
  UnsupportedConstraint,
  AttributeNotNullable,
  MissingKey,
  DanglingForeignKey,
  NameClash,
  NotInCarmForm,
  StepFailed,
  UnsupportedConstraintForDialect,
  ConstraintViolation,
  NotRepresentable,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code), message_(message) {}

  Errc code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

/// A parse failure with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(Errc::ParseError, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace lossless

#pragma once

#include <stdexcept>
#include <string>

namespace cca {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: malformed lexicon patterns, unknown formats, invalid
// flag combinations. Maps to CLI exit code 1.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Bad input data: unreadable corpus, duplicate record ids, unknown work ids.
// Maps to CLI exit code 2.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what) {}
};

// A significance test whose preconditions are not met (fewer than two
// groups, a single response pattern, an empty comparison).
class UndefinedTestError : public DataError {
 public:
  explicit UndefinedTestError(const std::string& what) : DataError(what) {}
};

}  // namespace cca

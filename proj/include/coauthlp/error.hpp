#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coauthlp {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed input record. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Violated precondition on an argument (unknown node, degenerate labels, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A pipeline artifact required by a command is missing.
class MissingArtifact : public Error {
 public:
  MissingArtifact(const std::string& path, const std::string& producer)
      : Error("missing artifact " + path + "; run `" + producer + "` first"), producer_(producer) {}
  const std::string& producer() const noexcept { return producer_; }

 private:
  std::string producer_;
};

}  // namespace coauthlp

#pragma once

#include <stdexcept>
#include <string>

namespace idtrack {

// Base for every error raised by the library. CLI code maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class DuplicateEntry : public Error { public: using Error::Error; };
class UnknownTrack : public Error { public: using Error::Error; };
class GridMismatch : public Error { public: using Error::Error; };
class FeasibilityExhausted : public Error { public: using Error::Error; };
class InvalidConfig : public Error { public: using Error::Error; };
class MissingTags : public Error { public: using Error::Error; };
class InvalidK : public Error { public: using Error::Error; };
class InsufficientData : public Error { public: using Error::Error; };

// A metric whose definition has an empty denominator (no TP, no ground truth).
class UndefinedMetric : public Error { public: using Error::Error; };

}  // namespace idtrack

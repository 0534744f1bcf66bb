#pragma once

#include <stdexcept>
#include <string>

namespace clonetag {

// Base class for every fatal condition raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pipeline stage failed; what() is prefixed with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace clonetag

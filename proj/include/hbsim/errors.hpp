#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hbsim {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An event was scheduled into the past.
class SchedulingError : public Error {
 public:
  using Error::Error;
};

/// A sampling routine received parameters outside its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class EmptyTallyError : public Error {
 public:
  EmptyTallyError() : Error("summary requested on an empty tally") {}
};

/// A caller broke an operation's precondition (e.g. observing an
/// unsubscribed target).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration. `line()` is 0 when the problem is not
/// tied to a particular line of the config text.
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : Error(line == 0 ? "config: " + what
                        : "config line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace hbsim

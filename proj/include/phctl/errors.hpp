#pragma once

#include <stdexcept>
#include <string>

namespace phctl {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Quartic has no sign change on the bracket; the equilibrium constants are corrupt.
class NoRoot : public Error {
public:
  using Error::Error;
};

class StateDiverged : public Error {
public:
  StateDiverged(const std::string &what, long step = -1)
      : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

private:
  long step_;
};

class NoOscillation : public Error {
public:
  using Error::Error;
};

class EmptyAggregate : public Error {
public:
  using Error::Error;
};

class SegmentTooShort : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class CsvError : public Error {
public:
  CsvError(const std::string &what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace phctl

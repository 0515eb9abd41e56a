#pragma once

#include <stdexcept>
#include <string>

namespace mdl {

// Base of every error raised by the library. The CLI maps subclasses onto
// process exit codes (see exit_code()).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Requested operation is not defined for this kind of input, e.g. exact
// evaluation on a distribution without finite support.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an algorithm was violated at run time
// (oracle norm bound, uncertified LP solution, ...). Runs abort on these.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A partial-feedback learner received feedback that does not match the set
// it announced.
class ProtocolViolation : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

inline int exit_code(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return 2;
  if (dynamic_cast<const ContractViolation*>(&e)) return 3;
  if (dynamic_cast<const ResourceLimit*>(&e)) return 4;
  return 2;
}

}  // namespace mdl

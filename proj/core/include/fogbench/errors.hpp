#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fogbench {

/// Base class for every error raised by the harness.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed config or descriptor file (syntax, unknown keys, wrong types).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Violation {
  std::string field;   // e.g. "modes", "workloads[2].services"
  std::string entity;  // offending id, may be empty
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Raised by validate_run_config with every violation found, not only the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class ProvisionFailure : public Error {
 public:
  ProvisionFailure(std::string node_id, const std::string& diagnostic)
      : Error("provisioning failed on node '" + node_id + "': " + diagnostic),
        node_id_(std::move(node_id)) {}

  const std::string& node_id() const noexcept { return node_id_; }

 private:
  std::string node_id_;
};

class ExecFailure : public Error {
 public:
  using Error::Error;
};

class TransferFailure : public Error {
 public:
  using Error::Error;
};

class ProbeFailure : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class StressAlreadyActive : public Error {
 public:
  using Error::Error;
};

class AlreadyReleased : public Error {
 public:
  using Error::Error;
};

class SpawnFailure : public Error {
 public:
  using Error::Error;
};

class DuplicateName : public Error {
 public:
  using Error::Error;
};

class InvalidDescriptor : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class HeterogeneousKey : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fogbench

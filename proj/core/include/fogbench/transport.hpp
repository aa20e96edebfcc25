#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace fogbench {

struct CommandResult {
  int exit_code = 0;
  std::string output;  // captured stdout + stderr
};

using RemotePid = std::int64_t;

/// One open connection to a node. Implementations need not be thread-safe;
/// the testbed serializes access per node.
class RemoteSession {
 public:
  virtual ~RemoteSession() = default;

  virtual CommandResult exec(const std::vector<std::string>& argv) = 0;
  virtual void put(std::span<const std::uint8_t> bytes, const std::string& remote_path) = 0;
  virtual std::vector<std::uint8_t> get(const std::string& remote_path) = 0;

  /// Background processes (stressors). Throws SpawnFailure.
  virtual RemotePid spawn(const std::vector<std::string>& argv) = 0;
  virtual void terminate(RemotePid pid) = 0;

  virtual void close() = 0;
};

/// Remote command transport contract. open() throws TransportError when the
/// address is unreachable.
class RemoteTransport {
 public:
  virtual ~RemoteTransport() = default;
  virtual std::unique_ptr<RemoteSession> open(const std::string& address) = 0;
};

/// Name -> transport adapter. The global registry ships "local", "ssh" and "stub".
class TransportRegistry {
 public:
  using Factory = std::function<std::shared_ptr<RemoteTransport>()>;

  TransportRegistry();

  static TransportRegistry& global();

  void add(const std::string& name, Factory factory);
  void add(const std::string& name, std::shared_ptr<RemoteTransport> instance);
  bool contains(const std::string& name) const;
  std::shared_ptr<RemoteTransport> create(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, Factory> factories_;
};

// ---------------------------------------------------------------------------
// Adapters
// ---------------------------------------------------------------------------

/// Runs commands as local child processes; the address is the working
/// directory that plays the role of the remote file system.
class LocalProcessTransport final : public RemoteTransport {
 public:
  std::unique_ptr<RemoteSession> open(const std::string& address) override;
};

/// Drives `ssh <address> ...` through local child processes.
class SshTransport final : public RemoteTransport {
 public:
  explicit SshTransport(std::vector<std::string> ssh_command = {"ssh", "-o", "BatchMode=yes"})
      : ssh_command_(std::move(ssh_command)) {}

  std::unique_ptr<RemoteSession> open(const std::string& address) override;

  /// POSIX single-quote escaping of one argument for a remote shell.
  static std::string shell_quote(const std::string& arg);
  static std::string join_quoted(const std::vector<std::string>& argv);

 private:
  std::vector<std::string> ssh_command_;
};

/// Process-local scripted transport for tests. Every call is logged; exec
/// replies come from an optional handler (default: exit 0, empty output).
class StubTransport final : public RemoteTransport,
                            public std::enable_shared_from_this<StubTransport> {
 public:
  struct Call {
    std::string op;  // open, exec, put, get, spawn, terminate, close
    std::string address;
    std::vector<std::string> args;
  };
  using ExecHandler = std::function<CommandResult(const std::vector<std::string>&)>;

  std::unique_ptr<RemoteSession> open(const std::string& address) override;

  void refuse_connections(bool refuse);
  void on_exec(ExecHandler handler);
  /// Optional artificial delay per exec, in seconds of real time.
  void set_exec_delay(double seconds);

  std::vector<Call> calls() const;
  std::vector<Call> calls(const std::string& op) const;
  std::vector<RemotePid> live_processes() const;
  bool has_file(const std::string& path) const;

 private:
  friend class StubSession;

  mutable std::mutex mutex_;
  bool refuse_ = false;
  double exec_delay_ = 0.0;
  ExecHandler handler_;
  std::vector<Call> calls_;
  std::map<std::string, std::vector<std::uint8_t>> files_;
  std::vector<RemotePid> live_;
  RemotePid next_pid_ = 1000;
};

// ---------------------------------------------------------------------------
// Local process helpers
// ---------------------------------------------------------------------------

/// Runs argv to completion, feeding `input` on stdin. Throws TransportError
/// when the program cannot be started.
CommandResult run_process(const std::vector<std::string>& argv, const std::string& cwd = {},
                          std::span<const std::uint8_t> input = {});

/// Starts argv detached from stdio; returns the child pid.
RemotePid spawn_process(const std::vector<std::string>& argv, const std::string& cwd = {});

/// SIGTERM then reap. Returns false if the pid was not a live child.
bool terminate_process(RemotePid pid);

}  // namespace fogbench

#include "fogbench/transport.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "fogbench/errors.hpp"

namespace fs = std::filesystem;

namespace fogbench {

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

TransportRegistry::TransportRegistry() {
  factories_["local"] = [] { return std::make_shared<LocalProcessTransport>(); };
  factories_["ssh"] = [] { return std::make_shared<SshTransport>(); };
  factories_["stub"] = [] { return std::make_shared<StubTransport>(); };
}

TransportRegistry& TransportRegistry::global() {
  static TransportRegistry registry;
  return registry;
}

void TransportRegistry::add(const std::string& name, Factory factory) {
  std::lock_guard lock(mutex_);
  factories_[name] = std::move(factory);
}

void TransportRegistry::add(const std::string& name, std::shared_ptr<RemoteTransport> instance) {
  add(name, [instance = std::move(instance)] { return instance; });
}

bool TransportRegistry::contains(const std::string& name) const {
  std::lock_guard lock(mutex_);
  return factories_.contains(name);
}

std::shared_ptr<RemoteTransport> TransportRegistry::create(const std::string& name) const {
  Factory factory;
  {
    std::lock_guard lock(mutex_);
    auto it = factories_.find(name);
    if (it == factories_.end()) throw TransportError("unknown transport adapter '" + name + "'");
    factory = it->second;
  }
  return factory();
}

std::vector<std::string> TransportRegistry::names() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, _] : factories_) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------
// Local processes
// ---------------------------------------------------------------------------

namespace {

class LocalSession final : public RemoteSession {
 public:
  explicit LocalSession(fs::path root) : root_(std::move(root)) {}
  ~LocalSession() override { close(); }

  CommandResult exec(const std::vector<std::string>& argv) override {
    return run_process(argv, root_.string());
  }

  void put(std::span<const std::uint8_t> bytes, const std::string& remote_path) override {
    const fs::path target = root_ / remote_path;
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw TransferFailure("cannot write " + target.string());
  }

  std::vector<std::uint8_t> get(const std::string& remote_path) override {
    const fs::path source = root_ / remote_path;
    std::ifstream in(source, std::ios::binary);
    if (!in) throw TransferFailure("cannot read " + source.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  RemotePid spawn(const std::vector<std::string>& argv) override {
    RemotePid pid = spawn_process(argv, root_.string());
    children_.push_back(pid);
    return pid;
  }

  void terminate(RemotePid pid) override {
    auto it = std::find(children_.begin(), children_.end(), pid);
    if (it == children_.end()) throw TransportError("pid " + std::to_string(pid) + " not spawned here");
    children_.erase(it);
    terminate_process(pid);
  }

  void close() override {
    for (RemotePid pid : children_) terminate_process(pid);
    children_.clear();
  }

 private:
  fs::path root_;
  std::vector<RemotePid> children_;
};

}  // namespace

std::unique_ptr<RemoteSession> LocalProcessTransport::open(const std::string& address) {
  fs::path root = address.empty() ? fs::current_path() : fs::path(address);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (!fs::is_directory(root, ec)) throw TransportError("local root '" + root.string() + "' unavailable");
  return std::make_unique<LocalSession>(std::move(root));
}

// ---------------------------------------------------------------------------
// SSH
// ---------------------------------------------------------------------------

std::string SshTransport::shell_quote(const std::string& arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

std::string SshTransport::join_quoted(const std::vector<std::string>& argv) {
  std::string out;
  for (const auto& a : argv) {
    if (!out.empty()) out += ' ';
    out += shell_quote(a);
  }
  return out;
}

namespace {

class SshSession final : public RemoteSession {
 public:
  SshSession(std::vector<std::string> ssh, std::string address)
      : ssh_(std::move(ssh)), address_(std::move(address)) {}

  CommandResult exec(const std::vector<std::string>& argv) override {
    return run_process(remote(SshTransport::join_quoted(argv)));
  }

  void put(std::span<const std::uint8_t> bytes, const std::string& remote_path) override {
    auto r = run_process(remote("cat > " + SshTransport::shell_quote(remote_path)), {}, bytes);
    if (r.exit_code != 0) throw TransferFailure("ssh put " + remote_path + ": " + r.output);
  }

  std::vector<std::uint8_t> get(const std::string& remote_path) override {
    auto r = run_process(remote("cat " + SshTransport::shell_quote(remote_path)));
    if (r.exit_code != 0) throw TransferFailure("ssh get " + remote_path + " failed");
    return {r.output.begin(), r.output.end()};
  }

  RemotePid spawn(const std::vector<std::string>& argv) override {
    auto r = run_process(
        remote("nohup " + SshTransport::join_quoted(argv) + " >/dev/null 2>&1 & echo $!"));
    if (r.exit_code != 0) throw SpawnFailure("ssh spawn failed: " + r.output);
    try {
      return std::stoll(r.output);
    } catch (const std::exception&) {
      throw SpawnFailure("ssh spawn returned no pid: " + r.output);
    }
  }

  void terminate(RemotePid pid) override { run_process(remote("kill " + std::to_string(pid))); }

  void close() override {}

 private:
  std::vector<std::string> remote(std::string command) const {
    auto argv = ssh_;
    argv.push_back(address_);
    argv.push_back(std::move(command));
    return argv;
  }

  std::vector<std::string> ssh_;
  std::string address_;
};

}  // namespace

std::unique_ptr<RemoteSession> SshTransport::open(const std::string& address) {
  auto argv = ssh_command_;
  argv.push_back(address);
  argv.push_back("true");
  CommandResult r;
  try {
    r = run_process(argv);
  } catch (const TransportError& e) {
    throw TransportError("ssh " + address + ": " + e.what());
  }
  if (r.exit_code != 0) throw TransportError("ssh " + address + " unreachable: " + r.output);
  return std::make_unique<SshSession>(ssh_command_, address);
}

// ---------------------------------------------------------------------------
// Stub
// ---------------------------------------------------------------------------

class StubSession final : public RemoteSession {
 public:
  StubSession(std::shared_ptr<StubTransport> owner, std::string address)
      : owner_(std::move(owner)), address_(std::move(address)) {}

  CommandResult exec(const std::vector<std::string>& argv) override {
    StubTransport::ExecHandler handler;
    double delay = 0.0;
    {
      std::lock_guard lock(owner_->mutex_);
      owner_->calls_.push_back({"exec", address_, argv});
      handler = owner_->handler_;
      delay = owner_->exec_delay_;
    }
    if (delay > 0) std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    return handler ? handler(argv) : CommandResult{};
  }

  void put(std::span<const std::uint8_t> bytes, const std::string& remote_path) override {
    std::lock_guard lock(owner_->mutex_);
    owner_->calls_.push_back({"put", address_, {remote_path, std::to_string(bytes.size())}});
    owner_->files_[remote_path].assign(bytes.begin(), bytes.end());
  }

  std::vector<std::uint8_t> get(const std::string& remote_path) override {
    std::lock_guard lock(owner_->mutex_);
    owner_->calls_.push_back({"get", address_, {remote_path}});
    auto it = owner_->files_.find(remote_path);
    if (it == owner_->files_.end()) throw TransferFailure("stub: no such file " + remote_path);
    return it->second;
  }

  RemotePid spawn(const std::vector<std::string>& argv) override {
    std::lock_guard lock(owner_->mutex_);
    owner_->calls_.push_back({"spawn", address_, argv});
    RemotePid pid = owner_->next_pid_++;
    owner_->live_.push_back(pid);
    return pid;
  }

  void terminate(RemotePid pid) override {
    std::lock_guard lock(owner_->mutex_);
    owner_->calls_.push_back({"terminate", address_, {std::to_string(pid)}});
    std::erase(owner_->live_, pid);
  }

  void close() override {
    std::lock_guard lock(owner_->mutex_);
    owner_->calls_.push_back({"close", address_, {}});
  }

 private:
  std::shared_ptr<StubTransport> owner_;
  std::string address_;
};

std::unique_ptr<RemoteSession> StubTransport::open(const std::string& address) {
  std::lock_guard lock(mutex_);
  calls_.push_back({"open", address, {}});
  if (refuse_) throw TransportError("connection refused by " + address);
  return std::make_unique<StubSession>(shared_from_this(), address);
}

void StubTransport::refuse_connections(bool refuse) {
  std::lock_guard lock(mutex_);
  refuse_ = refuse;
}

void StubTransport::on_exec(ExecHandler handler) {
  std::lock_guard lock(mutex_);
  handler_ = std::move(handler);
}

void StubTransport::set_exec_delay(double seconds) {
  std::lock_guard lock(mutex_);
  exec_delay_ = seconds;
}

std::vector<StubTransport::Call> StubTransport::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

std::vector<StubTransport::Call> StubTransport::calls(const std::string& op) const {
  std::lock_guard lock(mutex_);
  std::vector<Call> out;
  std::copy_if(calls_.begin(), calls_.end(), std::back_inserter(out),
               [&](const Call& c) { return c.op == op; });
  return out;
}

std::vector<RemotePid> StubTransport::live_processes() const {
  std::lock_guard lock(mutex_);
  return live_;
}

bool StubTransport::has_file(const std::string& path) const {
  std::lock_guard lock(mutex_);
  return files_.contains(path);
}

}  // namespace fogbench

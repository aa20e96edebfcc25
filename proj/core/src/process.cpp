#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "fogbench/errors.hpp"
#include "fogbench/transport.hpp"

namespace fogbench {

namespace {

struct Pipe {
  int fds[2] = {-1, -1};
  Pipe() {
    if (::pipe2(fds, O_CLOEXEC) != 0) throw TransportError(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  int read_end() const { return fds[0]; }
  int write_end() const { return fds[1]; }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
};

std::vector<char*> make_argv(const std::vector<std::string>& argv) {
  std::vector<char*> out;
  out.reserve(argv.size() + 1);
  for (const auto& a : argv) out.push_back(const_cast<char*>(a.c_str()));
  out.push_back(nullptr);
  return out;
}

// Exit code 127 from the child means exec failed; the error pipe tells the
// parent apart from a program that legitimately exits 127.
[[noreturn]] void exec_child(const std::vector<char*>& argv, const std::string& cwd, int error_fd) {
  if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
    int err = errno;
    (void)!::write(error_fd, &err, sizeof err);
    ::_exit(127);
  }
  ::execvp(argv[0], argv.data());
  int err = errno;
  (void)!::write(error_fd, &err, sizeof err);
  ::_exit(127);
}

void check_exec_error(Pipe& errors, const std::string& program) {
  errors.close_write();
  int err = 0;
  ssize_t n;
  do {
    n = ::read(errors.read_end(), &err, sizeof err);
  } while (n < 0 && errno == EINTR);
  if (n == static_cast<ssize_t>(sizeof err)) {
    throw TransportError("cannot start '" + program + "': " + std::strerror(err));
  }
}

}  // namespace

CommandResult run_process(const std::vector<std::string>& argv, const std::string& cwd,
                          std::span<const std::uint8_t> input) {
  if (argv.empty()) throw TransportError("empty command");
  auto cargv = make_argv(argv);
  Pipe in, out, errors;

  pid_t pid = ::fork();
  if (pid < 0) throw TransportError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in.read_end(), STDIN_FILENO);
    ::dup2(out.write_end(), STDOUT_FILENO);
    ::dup2(out.write_end(), STDERR_FILENO);
    exec_child(cargv, cwd, errors.write_end());
  }

  in.close_read();
  out.close_write();
  try {
    check_exec_error(errors, argv.front());
  } catch (...) {
    ::waitpid(pid, nullptr, 0);
    throw;
  }

  std::size_t written = 0;
  if (input.empty()) in.close_write();
  ::fcntl(in.write_end(), F_SETFL, O_NONBLOCK);

  CommandResult result;
  char buffer[65536];
  bool reading = true;
  while (reading || in.write_end() >= 0) {
    pollfd fds[2];
    nfds_t count = 0;
    int out_index = -1, in_index = -1;
    if (reading) {
      fds[count] = {out.read_end(), POLLIN, 0};
      out_index = static_cast<int>(count++);
    }
    if (in.write_end() >= 0) {
      fds[count] = {in.write_end(), POLLOUT, 0};
      in_index = static_cast<int>(count++);
    }
    if (::poll(fds, count, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (out_index >= 0 && fds[out_index].revents) {
      ssize_t n = ::read(out.read_end(), buffer, sizeof buffer);
      if (n > 0) {
        result.output.append(buffer, static_cast<std::size_t>(n));
      } else if (n == 0 || errno != EINTR) {
        reading = false;
      }
    }
    if (in_index >= 0 && fds[in_index].revents) {
      if (fds[in_index].revents & (POLLERR | POLLHUP)) {
        in.close_write();
      } else {
        ssize_t n = ::write(in.write_end(), input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (written == input.size() || (n < 0 && errno != EAGAIN && errno != EINTR)) in.close_write();
      }
    }
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

RemotePid spawn_process(const std::vector<std::string>& argv, const std::string& cwd) {
  if (argv.empty()) throw SpawnFailure("empty command");
  auto cargv = make_argv(argv);
  Pipe errors;
  pid_t pid = ::fork();
  if (pid < 0) throw SpawnFailure(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    int devnull = ::open("/dev/null", O_RDWR);
    if (devnull >= 0) {
      ::dup2(devnull, STDIN_FILENO);
      ::dup2(devnull, STDOUT_FILENO);
      ::dup2(devnull, STDERR_FILENO);
    }
    exec_child(cargv, cwd, errors.write_end());
  }
  try {
    check_exec_error(errors, argv.front());
  } catch (const TransportError& e) {
    ::waitpid(pid, nullptr, 0);
    throw SpawnFailure(e.what());
  }
  return pid;
}

bool terminate_process(RemotePid pid) {
  if (::kill(static_cast<pid_t>(pid), SIGTERM) != 0) return false;
  int status = 0;
  while (::waitpid(static_cast<pid_t>(pid), &status, 0) < 0) {
    if (errno != EINTR) return false;
  }
  return true;
}

}  // namespace fogbench

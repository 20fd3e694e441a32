#include "rvosh/external_backend.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "rvosh/error.hpp"
#include "rvosh/protocol.hpp"

namespace rvosh {
namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

WorkerProcess::WorkerProcess(const std::string& command) {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw BackendError(errno_text("socketpair"));
  }
  pid_ = ::fork();
  if (pid_ < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw BackendError(errno_text("fork"));
  }
  if (pid_ == 0) {
    // Own process group, so the whole tree under the shell can be killed.
    ::setpgid(0, 0);
    // dup2 clears CLOEXEC on the new descriptors.
    ::dup2(fds[1], STDIN_FILENO);
    ::dup2(fds[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid_, pid_);
  group_ = pid_;
  ::close(fds[1]);
  fd_ = fds[0];
}

WorkerProcess::~WorkerProcess() {
  if (fd_ >= 0) ::close(fd_);
  // Closing our end is the polite shutdown; give the worker a moment to exit.
  bool exited = pid_ <= 0;
  for (int i = 0; i < 20 && !exited; ++i) {
    exited = ::waitpid(pid_, nullptr, WNOHANG) != 0;
    if (!exited) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  // Also reaches anything the shell left running in the group.
  if (group_ > 0) ::kill(-group_, SIGKILL);
  if (!exited) ::waitpid(pid_, nullptr, 0);
}

std::string WorkerProcess::describe_exit() {
  int status = 0;
  for (int i = 0; i < 40; ++i) {
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      pid_ = -1;
      if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
      if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
      return "stopped";
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return "closed its output";
}

void WorkerProcess::write_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw WorkerCrash("worker " + describe_exit() + " (" + errno_text("send") + ")");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string WorkerProcess::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      throw TimeoutError("worker gave no response within " + std::to_string(timeout.count()) +
                         " ms");
    }
    pollfd p{fd_, POLLIN, 0};
    const int r = ::poll(&p, 1, static_cast<int>(left.count()));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw BackendError(errno_text("poll"));
    }
    if (r == 0) continue;
    char chunk[65536];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw WorkerCrash("worker " + describe_exit() + " (" + errno_text("recv") + ")");
    }
    if (n == 0) throw WorkerCrash("worker " + describe_exit());
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

ExternalBackend::ExternalBackend(ExternalBackendOptions options) : options_(std::move(options)) {
  if (options_.command.empty()) throw std::invalid_argument("external backend needs a command");
}

ExternalBackend::~ExternalBackend() = default;

void ExternalBackend::start() {
  worker_.reset();
  worker_.emplace(options_.command);
  try {
    const int version = wire::parse_handshake(worker_->read_line(options_.startup_timeout));
    if (version != wire::kProtocolVersion) {
      throw ProtocolError("worker speaks protocol " + std::to_string(version) + ", expected " +
                          std::to_string(wire::kProtocolVersion));
    }
  } catch (...) {
    worker_.reset();
    throw;
  }
}

std::string ExternalBackend::exchange(const std::string& line, std::uint64_t id) {
  if (!worker_) start();
  try {
    worker_->write_line(line);
    std::string reply = worker_->read_line(options_.request_timeout);
    const auto response = wire::parse_response(reply);
    if (response.id != id) {
      throw ProtocolError("response id " + std::to_string(response.id) + " does not match request " +
                          std::to_string(id));
    }
    return reply;
  } catch (const BackendError&) {
    // The stream may now be out of step; never reuse it.
    worker_.reset();
    throw;
  }
}

MaskTrack ExternalBackend::predict(const PredictorRequest& request) {
  const std::uint64_t id = next_id_++;
  const auto response = wire::parse_response(exchange(wire::encode_predict(id, request), id));
  if (response.error) throw BackendError("worker error: " + *response.error);
  auto masks = wire::decode_masks(response, request.indices, request.video.height(),
                                  request.video.width());
  MaskTrack track(request.video.id());
  for (std::size_t i = 0; i < masks.size(); ++i) track.set(request.indices[i], std::move(masks[i]));
  return track;
}

std::vector<BinaryMask> ExternalBackend::propagate(const PropagateRequest& request) {
  const std::uint64_t id = next_id_++;
  const auto response = wire::parse_response(exchange(wire::encode_propagate(id, request), id));
  if (response.error) throw BackendError("worker error: " + *response.error);
  return wire::decode_masks(response, request.segment.targets, request.video.height(),
                            request.video.width());
}

}  // namespace rvosh

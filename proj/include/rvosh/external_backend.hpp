#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include <sys/types.h>

#include "rvosh/backend.hpp"

namespace rvosh {

/// A child process started through /bin/sh, talking lines over a socket
/// pair bound to its stdin and stdout. Killed on destruction.
class WorkerProcess {
 public:
  explicit WorkerProcess(const std::string& command);
  ~WorkerProcess();
  WorkerProcess(const WorkerProcess&) = delete;
  WorkerProcess& operator=(const WorkerProcess&) = delete;

  /// Throws WorkerCrash if the worker has gone away.
  void write_line(const std::string& line);
  /// Throws TimeoutError after `timeout`, WorkerCrash on end of stream.
  std::string read_line(std::chrono::milliseconds timeout);

  pid_t pid() const noexcept { return pid_; }

 private:
  std::string describe_exit();

  pid_t pid_ = -1;
  pid_t group_ = -1;
  int fd_ = -1;
  std::string buffer_;
};

struct ExternalBackendOptions {
  std::string command;
  std::chrono::milliseconds startup_timeout{10000};
  std::chrono::milliseconds request_timeout{60000};
};

/// Predictor and propagator served by one external worker over wire
/// protocol v1. One request in flight at a time, so not shareable. After a
/// failed exchange the worker is restarted before the next request.
class ExternalBackend final : public PredictorBackend, public PropagatorBackend {
 public:
  explicit ExternalBackend(ExternalBackendOptions options);
  ~ExternalBackend() override;

  MaskTrack predict(const PredictorRequest& request) override;
  std::vector<BinaryMask> propagate(const PropagateRequest& request) override;
  bool shareable() const override { return false; }

  /// Starts the worker now (normally done on first use). Throws on a bad handshake.
  void start();

 private:
  std::string exchange(const std::string& line, std::uint64_t id);

  ExternalBackendOptions options_;
  std::optional<WorkerProcess> worker_;
  std::uint64_t next_id_ = 1;
};

}  // namespace rvosh

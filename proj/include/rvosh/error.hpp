#pragma once

#include <stdexcept>
#include <string>

namespace rvosh {

/// Base for every error raised by the harness.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two masks (or a mask and a video) disagree on height/width.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed text, manifest, RLE or image content.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Failure inside a predictor or propagator backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// The worker violated wire protocol v1 (bad JSON, wrong id, wrong frame set, ...).
class ProtocolError : public BackendError {
 public:
  using BackendError::BackendError;
};

class TimeoutError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// The worker process exited or closed its output unexpectedly.
class WorkerCrash : public BackendError {
 public:
  using BackendError::BackendError;
};

}  // namespace rvosh

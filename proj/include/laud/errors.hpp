#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace laud {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete type to an exit code, the service maps it to an HTTP status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something outside an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Dataset, lexicon, snapshot or log content is malformed or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

// Not enough unannotated points left to fill a request.
class InsufficientCandidates : public DataError {
 public:
  InsufficientCandidates(std::size_t remaining, std::size_t requested)
      : DataError("only " + std::to_string(remaining) + " candidates remain, " +
                  std::to_string(requested) + " requested"),
        remaining_(remaining) {}
  std::size_t remaining() const noexcept { return remaining_; }

 private:
  std::size_t remaining_;
};

class OracleError : public Error {
 public:
  using Error::Error;
};

// The oracle could not be reached (after retries).
class OracleTransportError : public OracleError {
 public:
  using OracleError::OracleError;
};

// The oracle answered, but not in the documented schema.
class OracleProtocolError : public OracleError {
 public:
  OracleProtocolError(const std::string& what, std::string payload)
      : OracleError(what + ": " + payload), payload_(std::move(payload)) {}
  const std::string& payload() const noexcept { return payload_; }

 private:
  std::string payload_;
};

// A run-level invariant would be broken (duplicate annotation, single-class
// training set, state/pool mismatch during replay).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// A human submission that cannot be accepted: unknown, already answered, or
// arriving while the run is not waiting for it.
class ConflictError : public Error {
 public:
  ConflictError(std::string reason, std::string request_id)
      : Error(reason + ": " + request_id),
        reason_(std::move(reason)),
        request_id_(std::move(request_id)) {}
  const std::string& reason() const noexcept { return reason_; }
  const std::string& request_id() const noexcept { return request_id_; }

 private:
  std::string reason_;
  std::string request_id_;
};

}  // namespace laud

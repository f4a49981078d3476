#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roofline {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-positive or non-finite numeric input to the model math.
class DomainError : public Error {
public:
    using Error::Error;
};

// A dataset (or other structured input) violates a type invariant.
// path() names the offending JSON location, e.g. "machine.gflops[0].value".
class ValidationError : public Error {
public:
    ValidationError(std::string path, const std::string& reason)
        : Error(path + ": " + reason), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t byte_offset, const std::string& detail)
        : Error("malformed JSON at byte " + std::to_string(byte_offset) + ": " + detail),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

class VersionError : public Error {
public:
    using Error::Error;
};

// Network-level failure (connection refused, timeout, unsupported scheme).
class TransportError : public Error {
public:
    using Error::Error;
};

// The remote answered with a non-200 status.
class RemoteError : public Error {
public:
    RemoteError(int status, const std::string& what)
        : Error(what + " (HTTP " + std::to_string(status) + ")"), status_(status) {}

    int status() const noexcept { return status_; }

private:
    int status_;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class IntegrityError : public Error {
public:
    using Error::Error;
};

class RenderError : public Error {
public:
    using Error::Error;
};

class CapacityError : public RenderError {
public:
    using RenderError::RenderError;
};

} // namespace roofline

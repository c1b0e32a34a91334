#pragma once

#include <stdexcept>
#include <string>

namespace vckit {

// Base class for all library errors. The CLI maps these onto exit codes:
// usage/file problems -> 2, computation failures -> 1.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Malformed or unparseable file contents (bad magic, truncated header, ...).
class FormatError : public Error {
  public:
    explicit FormatError(const std::string &msg) : Error(msg) {}
};

// Structurally valid file that uses a codec/layout we do not handle.
class UnsupportedError : public Error {
  public:
    explicit UnsupportedError(const std::string &msg) : Error(msg) {}
};

// Argument outside its documented domain (shape mismatch, bad ratio, ...).
class ParamError : public Error {
  public:
    explicit ParamError(const std::string &msg) : Error(msg) {}
};

// Filesystem-level failure; message carries the offending path.
class IoError : public Error {
  public:
    explicit IoError(const std::string &msg) : Error(msg) {}
};

// Numerical failure during a computation (divergence, undefined statistic).
class ComputeError : public Error {
  public:
    explicit ComputeError(const std::string &msg) : Error(msg) {}
};

} // namespace vckit

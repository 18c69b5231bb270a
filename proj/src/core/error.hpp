#pragma once

#include <stdexcept>
#include <string>

namespace stodi {

// Error categories mirrored one-to-one by the C API status codes.
enum class ErrorKind {
  InvalidArgument,  // bad node id, action index, parameter range
  Parse,            // malformed JSON / fraction syntax
  Io,               // file not found, unreadable
  Precondition,     // standing-assumption or regularity violations
  Capacity,         // enumeration would exceed the configured cap
  NoConvergence,    // iterative solve hit its iteration limit
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); }
[[noreturn]] inline void throw_parse(const std::string& msg) { throw Error(ErrorKind::Parse, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorKind::Io, msg); }
[[noreturn]] inline void throw_precondition(const std::string& msg) { throw Error(ErrorKind::Precondition, msg); }
[[noreturn]] inline void throw_capacity(const std::string& msg) { throw Error(ErrorKind::Capacity, msg); }

}  // namespace stodi

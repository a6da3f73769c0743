#pragma once

#include <stdexcept>
#include <string>

namespace schedge {

// Error categories. The numeric values double as CLI exit codes and as the
// status codes returned through the C API, so keep them stable.
enum class Errc : int {
  ok = 0,
  internal = 1,
  config = 2,    // invalid configuration or malformed input data
  io = 3,        // filesystem problems (missing files, unwritable paths)
  invariant = 4, // simulation state inconsistency; must never occur
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

inline Error config_error(const std::string& what) { return Error(Errc::config, what); }
inline Error io_error(const std::string& what) { return Error(Errc::io, what); }
inline Error invariant_error(const std::string& what) { return Error(Errc::invariant, what); }

} // namespace schedge

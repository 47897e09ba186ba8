#pragma once

#include <stdexcept>
#include <string>

namespace pgl {

enum class ErrorKind {
  InvalidSize,
  InvalidPartition,
  InvalidGamma,
  InvalidArgument,
  Shape,
  Numeric,
  Instability,
  Pole,
  Degenerate,
  Parse,
  Convergence,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Numeric failures map to exit code 2 in the CLI, everything else to 1.
  bool is_numeric() const noexcept {
    return kind_ == ErrorKind::Numeric || kind_ == ErrorKind::Instability ||
           kind_ == ErrorKind::Pole || kind_ == ErrorKind::Convergence ||
           kind_ == ErrorKind::Degenerate;
  }

 private:
  ErrorKind kind_;
};

}  // namespace pgl

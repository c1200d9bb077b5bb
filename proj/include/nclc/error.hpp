#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nclc {

enum class ErrorKind {
  InvalidArgument,
  BackendMismatch,
  TruncationOverflow,
  SingularMetric,
  NonCentralResult,
  NonUnique,
  Inconsistent,
  NoSolution,
  NonSkew,
  NotEquivariant,
  RangeNotSymmetric,
  GridTooCoarse,
  SizeTooLarge,
  NonCommutativeBackend,
  NotCentralBasis,
};

std::string_view error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) {
  throw Error(kind, detail);
}

inline void require(bool cond, ErrorKind kind, const std::string& detail) {
  if (!cond) throw Error(kind, detail);
}

}  // namespace nclc

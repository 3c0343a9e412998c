#pragma once

#include <stdexcept>
#include <string>

namespace fpi {

enum class ErrorKind {
  InvalidArgument,
  Parse,
  Geometry,
  ElementInversion,
  Porosity,
  Singular,
  Divergence,
  Reconstruction,
  Config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fpi

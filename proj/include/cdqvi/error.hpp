#pragma once

#include <stdexcept>
#include <string>

namespace cdqvi {

enum class ErrorKind {
  Usage,            // bad argument or dimension mismatch
  InvalidInstance,  // structurally valid input that violates an instance invariant
  Io,
  Parse,
  Capability        // request exceeds a documented limit
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace cdqvi

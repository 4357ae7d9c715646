#pragma once

#include <stdexcept>
#include <string>

namespace loopeq {

enum class ErrorKind { usage, validation, numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void numerical_error(const std::string& what) {
  throw Error(ErrorKind::numerical, what);
}

[[noreturn]] inline void usage_error(const std::string& what) {
  throw Error(ErrorKind::usage, what);
}

}  // namespace loopeq

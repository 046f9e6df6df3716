#pragma once

#include <stdexcept>
#include <string>

namespace driftscope {

// Bad or unreadable input data (files, CLI usage). Maps to exit code 2.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structural problem in an input file; carries a location when known.
class ParseError : public IoError {
public:
  ParseError(const std::string& msg, std::size_t offset)
      : IoError(msg + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  explicit ParseError(const std::string& msg) : IoError(msg), offset_(0) {}

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// Invalid parameter combination or analysis failure. Maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace driftscope

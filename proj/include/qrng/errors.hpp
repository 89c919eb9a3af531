#pragma once

#include <stdexcept>
#include <string>

namespace qrng {

/// Malformed or truncated binary file content (bad magic, short payload,
/// out-of-range field values).
class format_error : public std::runtime_error {
 public:
  explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

/// A statistical test was handed fewer bits than its minimum input size.
/// The message names the violated minimum.
class input_size_error : public std::invalid_argument {
 public:
  explicit input_size_error(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace qrng

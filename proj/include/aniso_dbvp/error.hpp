#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adbvp {

/// Machine-readable failure categories. The string forms are part of the
/// report and CLI error-object format.
enum class Errc {
  invalid_argument,
  syntax_error,
  unknown_identifier,
  config_error,
  f_quadrature_failed,
  degenerate_denominator,
  not_separable,
  empty_interval,
  unbounded_interval,
  instance_too_large,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::syntax_error: return "syntax-error";
    case Errc::unknown_identifier: return "unknown-identifier";
    case Errc::config_error: return "config-error";
    case Errc::f_quadrature_failed: return "F-quadrature-failed";
    case Errc::degenerate_denominator: return "degenerate-denominator";
    case Errc::not_separable: return "not-separable";
    case Errc::empty_interval: return "empty-interval";
    case Errc::unbounded_interval: return "unbounded-interval";
    case Errc::instance_too_large: return "instance-too-large";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parse failure carrying the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(Errc code, const std::string& what, std::size_t offset)
      : Error(code, what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace adbvp

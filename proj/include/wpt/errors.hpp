#ifndef WPT_ERRORS_HPP
#define WPT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wpt {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A parameter or input document violates a stated constraint.
/// `field()` names the offending parameter or document path when known.
class validation_error : public error {
 public:
  explicit validation_error(const std::string& msg, std::string field = {})
      : error(msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Inconsistent configuration (e.g. two coils tuned to different frequencies).
class config_error : public error {
 public:
  using error::error;
};

/// Geometric operation cannot be performed (non-planar input, wrap too tight, ...).
class geometry_error : public error {
 public:
  using error::error;
};

/// An evaluation point lies on or inside a wire.
class proximity_error : public error {
 public:
  proximity_error(const std::string& msg, std::size_t segment, std::ptrdiff_t grid_index = -1)
      : error(msg), segment_(segment), grid_index_(grid_index) {}
  std::size_t segment() const { return segment_; }
  std::ptrdiff_t grid_index() const { return grid_index_; }

 private:
  std::size_t segment_;
  std::ptrdiff_t grid_index_;
};

/// Post-processing (fits, ratios) lacks usable samples.
class analysis_error : public error {
 public:
  using error::error;
};

/// Filesystem failure while reading or writing artifacts.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace wpt

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace duodiag {

struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct parse_error : error {
  int line, column;
  parse_error(const std::string& msg, int line_, int column_)
      : error(msg + " (line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ")"),
        line(line_), column(column_) {}
};

// Poset construction / algebra errors.
struct antisymmetry_violation : error { using error::error; };
struct not_zetless : error { using error::error; };
struct not_interval : error { using error::error; };
struct not_bracketed : error { using error::error; };
struct size_limit : error { using error::error; };
struct no_such_structure_map : error { using error::error; };

// Signature errors.
struct unknown_type : error { using error::error; };
struct duplicate_generator : error { using error::error; };
struct unknown_generator : error { using error::error; };
struct invalid_inclusion : error { using error::error; };

// Diagram validation: one exception class, discriminated by code so tests
// can pin the exact failure without string matching.
enum class validation_code {
  not_wire_linear,
  cyclic,
  type_mismatch,
  not_interval,
  no_input_inclusion,
  boundary_mismatch,
  signature_mismatch,
};

inline const char* to_string(validation_code c) {
  switch (c) {
    case validation_code::not_wire_linear: return "NotWireLinear";
    case validation_code::cyclic: return "Cyclic";
    case validation_code::type_mismatch: return "TypeMismatch";
    case validation_code::not_interval: return "NotInterval";
    case validation_code::no_input_inclusion: return "NoInputInclusion";
    case validation_code::boundary_mismatch: return "BoundaryMismatch";
    case validation_code::signature_mismatch: return "SignatureMismatch";
  }
  return "?";
}

struct validation_error : error {
  validation_code code;
  validation_error(validation_code c, const std::string& msg)
      : error(std::string(to_string(c)) + ": " + msg), code(c) {}
};

struct eval_error : error { using error::error; };

}  // namespace duodiag

// error.h -- error codes and the exception type shared by all modules.
#ifndef PAP_ERROR_H
#define PAP_ERROR_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pap {

enum class Errc {
  parse_error,
  arity_clash,
  duplicate_hypothesis,
  negative_weight,
  nonground,
  nonground_observation,
  nonground_hypothesis,
  unsafe_program,
  integer_overflow,
  hypothesis_in_head,
  missing_penalty,
  weak_in_program,
  fresh_predicate_collision,
  no_candidate_model,
  inconsistent,
  h_membership,
  too_large,
  illegal_configuration,
  input_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(errc_name(code) + std::string(": ") + message),
        code_(code), line_(line), column_(column) {}

  Errc code() const { return code_; }
  // 1-based input position; 0 when the error is not tied to a location.
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Errc code_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace pap

#endif

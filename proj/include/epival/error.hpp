#pragma once

#include <stdexcept>
#include <string>

namespace epival {

enum class errc {
  dimension_unsupported,
  dimension_mismatch,
  degenerate_input,
  unbounded,
  empty_input,
  negative_scale,
  empty_domain,
  outside_domain,
  zero_weight,
  arity_mismatch,
  rank_deficient,
  support_exceeds_grid,
  unbounded_window,
  oracle_failure,
  retry_exhausted,
  invalid_argument,
  io_failure,
};

// Single exception type; the code selects the CLI exit class.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace epival

#pragma once

#include <stdexcept>
#include <string>

namespace rffses {

// Base for every error raised by the library. Callers that only care about
// "something went wrong" catch this; the subclasses name the failed contract.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_argument_error : public error {
 public:
  using error::error;
};

class dimension_mismatch_error : public error {
 public:
  using error::error;
};

class unsupported_dimension_error : public error {
 public:
  using error::error;
};

class numeric_domain_error : public error {
 public:
  using error::error;
};

class contract_violation_error : public error {
 public:
  using error::error;
};

class singular_prior_error : public error {
 public:
  using error::error;
};

class rank_deficient_error : public error {
 public:
  using error::error;
};

class degenerate_system_error : public error {
 public:
  using error::error;
};

class index_out_of_range_error : public error {
 public:
  using error::error;
};

class undefined_metric_error : public error {
 public:
  using error::error;
};

class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class invalid_split_error : public error {
 public:
  using error::error;
};

class invalid_folds_error : public error {
 public:
  using error::error;
};

class label_domain_error : public error {
 public:
  using error::error;
};

class unsupported_method_error : public error {
 public:
  using error::error;
};

}  // namespace rffses

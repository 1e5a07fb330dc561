#pragma once

#include <stdexcept>
#include <string>

namespace gnnv {

/// Malformed or inconsistent user input (files, formula text, models).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size guard or resource cap refused the request.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gnnv

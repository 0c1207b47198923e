#pragma once

#include <stdexcept>
#include <string>

namespace xmodal {

// All recoverable failures in the library surface as this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xmodal

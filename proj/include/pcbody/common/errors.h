#ifndef PCBODY_COMMON_ERRORS_H_
#define PCBODY_COMMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pcbody {

// Malformed or missing file content (CSV, JSON).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine could not proceed (non-PD matrix, singular innovation).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcbody

#endif  // PCBODY_COMMON_ERRORS_H_

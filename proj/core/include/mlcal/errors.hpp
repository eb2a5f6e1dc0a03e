#pragma once

#include <stdexcept>
#include <string>

namespace mlcal {

/// Raised for malformed or inconsistent input data (bad records, unknown
/// labels, duplicate ids, mismatched files). The CLI maps it to exit status 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlcal

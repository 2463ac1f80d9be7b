#pragma once

#include <stdexcept>

namespace donsker {

// Bad user-supplied configuration: config-file keys, schedule parameters,
// unsupported law/function combinations. Structurally impossible inputs
// (empty samples, mismatched plan sizes, degenerate data) throw
// std::domain_error instead.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace donsker

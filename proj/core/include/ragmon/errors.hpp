#pragma once

#include <stdexcept>
#include <string>

namespace ragmon {

// Remote transport failure (connect, timeout, non-2xx after retries).
class RemoteUnavailableError : public std::runtime_error {
 public:
  explicit RemoteUnavailableError(const std::string& what)
      : std::runtime_error(what) {}
};

// Remote replied, but the payload does not parse into the expected shape.
// Never coerced into a default label or vector.
class UnparseableReplyError : public std::runtime_error {
 public:
  explicit UnparseableReplyError(const std::string& what)
      : std::runtime_error(what) {}
};

// Persisted index does not match the provider configuration it is loaded for.
class StaleIndexError : public std::runtime_error {
 public:
  explicit StaleIndexError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace ragmon

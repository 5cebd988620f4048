#pragma once

#include <stdexcept>
#include <string>

namespace alignkit {

/// Problems with user-supplied data: parse failures, invariant violations,
/// missing files. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unrecoverable LLM endpoint problems (misconfiguration, exhausted retries
/// where no fallback applies). Maps to CLI exit code 3.
class EndpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace alignkit

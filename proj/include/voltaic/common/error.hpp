#pragma once

#include <stdexcept>
#include <string>

namespace voltaic {

/// Input data or configuration failed a load-time check.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver or scenario run could not produce a result.
class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem read/write failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace voltaic

#pragma once

#include <stdexcept>
#include <string>

namespace tsaudit {

/// Bad or unusable input data: unreadable files, malformed CSV, missing columns.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a trustworthy answer
/// (rank deficiency, singular matrices, optimizer failure).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tsaudit

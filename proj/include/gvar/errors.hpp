#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gvar {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when an input violates a type invariant (weights, shapes, indices).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Raised when a combinatorial search would exceed its documented cap.
class SizeLimitError : public Error {
public:
    SizeLimitError(const std::string& what, std::size_t cap)
        : Error(what), cap_(cap) {}

    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

} // namespace gvar

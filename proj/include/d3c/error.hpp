#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace d3c {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

/// A file count (or group split) that does not meet the divisibility
/// requirement of the batch layout. Carries the smallest admissible N.
class DivisibilityError : public Error {
public:
    DivisibilityError(const std::string& what, std::uint64_t minimal_n)
        : Error(what), minimal_n_(minimal_n) {}

    std::uint64_t minimal_n() const noexcept { return minimal_n_; }

private:
    std::uint64_t minimal_n_;
};

class SegmentationError : public Error {
public:
    SegmentationError(const std::string& what, std::uint64_t padding_bits)
        : Error(what), padding_bits_(padding_bits) {}

    /// Bits that would have to be appended for the split to be even.
    std::uint64_t padding_bits() const noexcept { return padding_bits_; }

private:
    std::uint64_t padding_bits_;
};

/// Internal invariant broken. Never expected for valid schemes.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

class AccessViolation : public Error {
public:
    using Error::Error;
};

} // namespace d3c

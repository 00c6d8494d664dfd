#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace buafd {

// Base class for every error the library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Boundary values pass too close to zero for a stable winding number.
class IllConditioned : public Error {
public:
    using Error::Error;
};

class FactorizationFailed : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class EncoderError : public Error {
public:
    using Error::Error;
};

class UndefinedMetric : public Error {
public:
    using Error::Error;
};

class CorruptStream : public Error {
public:
    CorruptStream(const std::string& what, std::size_t byte_offset)
        : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_ = 0;
};

}  // namespace buafd

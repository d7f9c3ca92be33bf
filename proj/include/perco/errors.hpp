#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perco {

/// Bad parameter value (probability outside [0,1], zero runs, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Image, lattice or table dimensions that do not fit together.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A null distribution applied to data it was not simulated for.
class ProvenanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed Netpbm or distribution file. `offset()` is the byte position
/// where reading stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace perco

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bkit {

// Malformed file content. Carries the byte offset (binary) or line number (text).
class ParseError : public std::runtime_error {
public:
    enum class Locus { byte_offset, line };

    ParseError(Locus locus, std::size_t position, const std::string& what)
        : std::runtime_error(describe(locus, position, what)), locus_(locus), position_(position) {}

    Locus locus() const noexcept { return locus_; }
    std::size_t position() const noexcept { return position_; }

private:
    static std::string describe(Locus locus, std::size_t position, const std::string& what) {
        return (locus == Locus::byte_offset ? "at byte offset " : "at line ") + std::to_string(position) +
               ": " + what;
    }

    Locus locus_;
    std::size_t position_;
};

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is outside its allowed domain.
class ParameterError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class RangeError : public std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Two grids that must share geometry do not.
class ShapeError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A value violates a type invariant (mask cell of 2, negative width, ...).
class InvariantError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class SingularityError : public std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace bkit

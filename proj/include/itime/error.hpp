#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace itime {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A tick or event-log row that could not be decoded. `line()` is 1-based.
class ParseError : public Error
{
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), m_line{line}
    {}

    [[nodiscard]] std::size_t line() const noexcept { return m_line; }

private:
    std::size_t m_line;
};

} // namespace itime

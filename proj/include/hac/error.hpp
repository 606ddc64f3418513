#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hac
{

/// Base class of every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position` is a 0-based byte offset into the input.
class parse_error : public error
{
public:
    parse_error( const std::string& message, std::size_t position )
        : error( "at position " + std::to_string( position ) + ": " + message ), _position{ position }
    {
    }

    [[nodiscard]] std::size_t position() const { return _position; }

private:
    std::size_t _position;
};

/// Invalid input to a semantic operation (empty word, position out of range, foreign symbol).
class domain_error : public error
{
public:
    using error::error;
};

/// Structurally invalid model, or a model whose decision is undefined on some input.
class model_error : public error
{
public:
    using error::error;
};

/// An ordering between two attention scores could not be certified within the escalation limit.
class precision_error : public error
{
public:
    using error::error;
};

/// Malformed document (model file, set or constraint document).
class format_error : public error
{
public:
    using error::error;
};

} // namespace hac

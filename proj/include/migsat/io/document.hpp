#pragma once

#include "migsat/mig.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace migsat::io
{

enum class Provenance
{
    Native,
    Gpml,
    Api,
};

struct MigDocument
{
    Mig mig;
    Provenance source = Provenance::Native;
    std::vector<std::string> warnings;
};

// Syntax or semantic error in an input document. Line and column are 1-based; 0 when unknown.
class ParseError : public std::runtime_error
{
public:
    ParseError( std::size_t line, std::size_t column, const std::string& what );
    [[nodiscard]] std::size_t line() const { return _line; }
    [[nodiscard]] std::size_t column() const { return _column; }

private:
    std::size_t _line;
    std::size_t _column;
};

[[nodiscard]] const char* to_string( Provenance p );

// Atom names and link ids must match [A-Za-z0-9_.]+ to be written in the native format.
[[nodiscard]] bool is_identifier( std::string_view s );

// GPML when the first non-blank character is '<', native otherwise.
[[nodiscard]] MigDocument parse_document( std::string_view text );
[[nodiscard]] MigDocument load_document( const std::string& path );

} // namespace migsat::io

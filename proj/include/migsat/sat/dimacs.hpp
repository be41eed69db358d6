#pragma once

#include "migsat/sat/solver.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace migsat::sat
{

class DimacsError : public std::runtime_error
{
public:
    DimacsError( std::size_t line, const std::string& what );
    [[nodiscard]] std::size_t line() const { return _line; }

private:
    std::size_t _line;
};

// "p cnf V C" followed by one zero-terminated clause per line. Each comment is written as a `c` line
// before the header.
[[nodiscard]] std::string export_dimacs( const ClauseSet& cs, const std::vector<std::string>& comments = {} );

// Accepts comments, clauses spanning lines and a trailing `%` terminator. The header counts are checked.
[[nodiscard]] ClauseSet import_dimacs( std::string_view text );

} // namespace migsat::sat

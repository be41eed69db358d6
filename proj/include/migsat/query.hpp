#pragma once

#include "migsat/formula.hpp"
#include "migsat/mig.hpp"
#include "migsat/semantics.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace migsat
{

// A time-stamped atom reference, written `name@t`.
struct TimedAtom
{
    std::string atom;
    std::size_t time = 0;
    std::size_t position = 0; // offset in the query text

    bool operator==( const TimedAtom& o ) const { return atom == o.atom && time == o.time; }
};

class QueryError : public std::runtime_error
{
public:
    QueryError( std::size_t position, const std::string& what );
    [[nodiscard]] std::size_t position() const { return _position; }

private:
    std::size_t _position;
};

// Boolean combination of timed atoms. Grammar, loosest binding first:
//   query := disj? ; disj := conj ('|' conj)* ; conj := unary ('&' unary)*
//   unary := '!' unary | '(' disj ')' | 'true' | 'false' | name '@' digits
// The empty query stands for true.
class Query
{
public:
    Query() : _formula( Formula::verum() ) {}

    [[nodiscard]] static Query parse( std::string_view text );

    [[nodiscard]] const std::string& text() const { return _text; }
    // Variables index into atoms().
    [[nodiscard]] const Formula& formula() const { return _formula; }
    [[nodiscard]] const std::vector<TimedAtom>& atoms() const { return _atoms; }
    [[nodiscard]] std::size_t max_time() const;

    // Throws QueryError for undeclared atoms or times beyond the horizon.
    void check( const Mig& g, std::size_t horizon ) const;

    [[nodiscard]] bool holds( const Mig& g, const Trace& trace ) const;

private:
    friend class QueryParser;
    std::string _text;
    Formula _formula;
    std::vector<TimedAtom> _atoms;
};

} // namespace migsat

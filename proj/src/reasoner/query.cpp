#include "migsat/query.hpp"

#include <algorithm>
#include <cctype>

namespace migsat
{

QueryError::QueryError( std::size_t position, const std::string& what )
    : std::runtime_error( "column " + std::to_string( position + 1 ) + ": " + what ), _position( position )
{
}

namespace
{

bool name_char( char c )
{
    return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' || c == '.' || c == '-' || c == ':';
}

} // namespace

class QueryParser
{
public:
    explicit QueryParser( std::string_view text ) : _s( text ) {}

    Query run()
    {
        Query q;
        q._text = std::string( _s );
        skip();
        if ( _i == _s.size() )
            return q;
        q._formula = disj( q );
        skip();
        if ( _i != _s.size() )
            throw QueryError( _i, std::string( "unexpected '" ) + _s[_i] + "'" );
        return q;
    }

private:
    void skip()
    {
        while ( _i < _s.size() && std::isspace( static_cast<unsigned char>( _s[_i] ) ) )
            ++_i;
    }

    bool eat( char c )
    {
        skip();
        if ( _i < _s.size() && _s[_i] == c )
        {
            ++_i;
            return true;
        }
        return false;
    }

    Formula disj( Query& q )
    {
        std::vector<Formula> parts{ conj( q ) };
        while ( eat( '|' ) )
            parts.push_back( conj( q ) );
        return Formula::disjunction( std::move( parts ) );
    }

    Formula conj( Query& q )
    {
        std::vector<Formula> parts{ unary( q ) };
        while ( eat( '&' ) )
            parts.push_back( unary( q ) );
        return Formula::conjunction( std::move( parts ) );
    }

    Formula unary( Query& q )
    {
        skip();
        if ( _i == _s.size() )
            throw QueryError( _i, "unexpected end of query" );
        if ( eat( '!' ) )
            return Formula::negation( unary( q ) );
        if ( eat( '(' ) )
        {
            Formula f = disj( q );
            if ( !eat( ')' ) )
                throw QueryError( _i, "expected ')'" );
            return f;
        }
        const std::size_t start = _i;
        while ( _i < _s.size() && name_char( _s[_i] ) )
            ++_i;
        const std::string name( _s.substr( start, _i - start ) );
        if ( name.empty() )
            throw QueryError( start, std::string( "unexpected '" ) + _s[start] + "'" );
        if ( _i == _s.size() || _s[_i] != '@' )
        {
            if ( name == "true" )
                return Formula::verum();
            if ( name == "false" )
                return Formula::falsum();
            throw QueryError( _i, "expected '@<time>' after '" + name + "'" );
        }
        ++_i;
        const std::size_t tstart = _i;
        std::size_t t = 0;
        while ( _i < _s.size() && std::isdigit( static_cast<unsigned char>( _s[_i] ) ) )
        {
            if ( t > 1'000'000 )
                throw QueryError( tstart, "time stamp too large" );
            t = t * 10 + static_cast<std::size_t>( _s[_i] - '0' );
            ++_i;
        }
        if ( _i == tstart )
            throw QueryError( tstart, "expected a time stamp" );

        TimedAtom a{ name, t, start };
        auto it = std::find( q._atoms.begin(), q._atoms.end(), a );
        if ( it == q._atoms.end() )
        {
            q._atoms.push_back( a );
            it = q._atoms.end() - 1;
        }
        return Formula::var( static_cast<int>( it - q._atoms.begin() ) );
    }

    std::string_view _s;
    std::size_t _i = 0;
};

Query Query::parse( std::string_view text ) { return QueryParser( text ).run(); }

std::size_t Query::max_time() const
{
    std::size_t m = 0;
    for ( const auto& a : _atoms )
        m = std::max( m, a.time );
    return m;
}

void Query::check( const Mig& g, std::size_t horizon ) const
{
    for ( const auto& a : _atoms )
    {
        if ( !g.find_atom( a.atom ) )
            throw QueryError( a.position, "unknown atom '" + a.atom + "'" );
        if ( a.time > horizon )
            throw QueryError( a.position, "time " + std::to_string( a.time ) + " exceeds horizon " +
                                              std::to_string( horizon ) );
    }
}

bool Query::holds( const Mig& g, const Trace& trace ) const
{
    return eval( _formula, [&]( int v ) {
        const TimedAtom& a = _atoms.at( static_cast<std::size_t>( v ) );
        return trace.states.at( a.time ).contains( g.atom_index( a.atom ) );
    } );
}

} // namespace migsat

#include "migsat/sat/dimacs.hpp"

#include <charconv>
#include <sstream>

namespace migsat::sat
{

DimacsError::DimacsError( std::size_t line, const std::string& what )
    : std::runtime_error( "line " + std::to_string( line ) + ": " + what ), _line( line )
{
}

std::string export_dimacs( const ClauseSet& cs, const std::vector<std::string>& comments )
{
    check_clause_set( cs );
    std::string out;
    for ( const auto& c : comments )
        out += "c " + c + "\n";
    out += "p cnf " + std::to_string( cs.num_vars ) + " " + std::to_string( cs.clauses.size() ) + "\n";
    for ( const auto& clause : cs.clauses )
    {
        for ( int lit : clause )
            out += std::to_string( lit ) + " ";
        out += "0\n";
    }
    return out;
}

namespace
{

bool parse_int( std::string_view tok, long long& out )
{
    const auto* end = tok.data() + tok.size();
    auto [p, ec] = std::from_chars( tok.data(), end, out );
    return ec == std::errc() && p == end;
}

} // namespace

ClauseSet import_dimacs( std::string_view text )
{
    ClauseSet cs;
    bool header = false;
    long long declared_clauses = 0;
    std::vector<int> current;
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while ( pos <= text.size() )
    {
        const std::size_t nl = text.find( '\n', pos );
        std::string_view line = text.substr( pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos );
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if ( !line.empty() && line.back() == '\r' )
            line.remove_suffix( 1 );

        std::istringstream in{ std::string( line ) };
        std::string tok;
        if ( !( in >> tok ) || tok == "c" || tok[0] == 'c' )
            continue;
        if ( tok == "%" )
            break;
        if ( tok == "p" )
        {
            std::string fmt;
            std::string v;
            std::string c;
            long long nv = 0;
            if ( header )
                throw DimacsError( line_no, "duplicate header" );
            if ( !( in >> fmt >> v >> c ) || fmt != "cnf" || !parse_int( v, nv ) || !parse_int( c, declared_clauses ) ||
                 nv < 0 || declared_clauses < 0 || nv > 0x3FFFFFFF )
                throw DimacsError( line_no, "malformed header, expected 'p cnf <vars> <clauses>'" );
            cs.num_vars = static_cast<int>( nv );
            header = true;
            if ( in >> tok )
                throw DimacsError( line_no, "trailing text after header" );
            continue;
        }
        if ( !header )
            throw DimacsError( line_no, "clause before header" );
        do
        {
            long long lit = 0;
            if ( !parse_int( tok, lit ) )
                throw DimacsError( line_no, "bad literal '" + tok + "'" );
            if ( lit == 0 )
            {
                cs.clauses.push_back( std::move( current ) );
                current.clear();
                continue;
            }
            if ( lit > cs.num_vars || -lit > cs.num_vars )
                throw DimacsError( line_no, "literal " + tok + " exceeds declared variable count" );
            current.push_back( static_cast<int>( lit ) );
        } while ( in >> tok );
    }
    if ( !header )
        throw DimacsError( line_no, "missing header" );
    if ( !current.empty() )
        throw DimacsError( line_no, "last clause is not terminated by 0" );
    if ( static_cast<long long>( cs.clauses.size() ) != declared_clauses )
        throw DimacsError( line_no, "header declares " + std::to_string( declared_clauses ) + " clauses, found " +
                                        std::to_string( cs.clauses.size() ) );
    return cs;
}

} // namespace migsat::sat

#include "migsat/io/document.hpp"

#include "migsat/io/gpml.hpp"
#include "migsat/io/native.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace migsat::io
{

ParseError::ParseError( std::size_t line, std::size_t column, const std::string& what )
    : std::runtime_error( ( line ? "line " + std::to_string( line ) + ( column ? ", column " + std::to_string( column ) : "" ) +
                                       ": "
                                 : "" ) +
                          what ),
      _line( line ), _column( column )
{
}

const char* to_string( Provenance p )
{
    switch ( p )
    {
    case Provenance::Native:
        return "native";
    case Provenance::Gpml:
        return "gpml";
    case Provenance::Api:
        return "api";
    }
    return "?";
}

bool is_identifier( std::string_view s )
{
    if ( s.empty() )
        return false;
    for ( char c : s )
        if ( !std::isalnum( static_cast<unsigned char>( c ) ) && c != '_' && c != '.' )
            return false;
    return true;
}

MigDocument parse_document( std::string_view text )
{
    for ( char c : text )
    {
        if ( std::isspace( static_cast<unsigned char>( c ) ) )
            continue;
        if ( c == '<' )
            return import_gpml( text );
        break;
    }
    return parse_native( text );
}

MigDocument load_document( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw std::runtime_error( "cannot open '" + path + "'" );
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_document( buf.str() );
}

} // namespace migsat::io

#include "migsat/io/native.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace migsat::io
{

namespace
{

bool ident_char( char c ) { return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' || c == '.'; }

class Cursor
{
public:
    Cursor( std::string_view line, std::size_t line_no ) : _s( line ), _line( line_no ) {}

    void skip()
    {
        while ( _i < _s.size() && ( _s[_i] == ' ' || _s[_i] == '\t' ) )
            ++_i;
    }

    bool done()
    {
        skip();
        return _i >= _s.size();
    }

    std::size_t column() const { return _i + 1; }

    [[noreturn]] void fail( const std::string& what ) const { throw ParseError( _line, _i + 1, what ); }

    std::string ident( const char* what )
    {
        skip();
        const std::size_t start = _i;
        while ( _i < _s.size() && ident_char( _s[_i] ) )
            ++_i;
        if ( start == _i )
            fail( std::string( "expected " ) + what );
        return std::string( _s.substr( start, _i - start ) );
    }

    bool eat( std::string_view tok )
    {
        skip();
        if ( _s.substr( _i, tok.size() ) == tok )
        {
            _i += tok.size();
            return true;
        }
        return false;
    }

    void expect( std::string_view tok )
    {
        if ( !eat( tok ) )
            fail( "expected '" + std::string( tok ) + "'" );
    }

private:
    std::string_view _s;
    std::size_t _line;
    std::size_t _i = 0;
};

struct PendingLink
{
    Link link;
    bool ambiguous_arrow = false; // `->` with a single target: production or activation
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Where
{
    std::size_t line = 0;
    std::size_t column = 0;
};

} // namespace

bool natural_less( std::string_view a, std::string_view b )
{
    std::size_t i = 0;
    std::size_t j = 0;
    while ( i < a.size() && j < b.size() )
    {
        const bool da = std::isdigit( static_cast<unsigned char>( a[i] ) );
        const bool db = std::isdigit( static_cast<unsigned char>( b[j] ) );
        if ( da && db )
        {
            std::size_t ei = i;
            std::size_t ej = j;
            while ( ei < a.size() && std::isdigit( static_cast<unsigned char>( a[ei] ) ) )
                ++ei;
            while ( ej < b.size() && std::isdigit( static_cast<unsigned char>( b[ej] ) ) )
                ++ej;
            auto na = a.substr( i, ei - i );
            auto nb = b.substr( j, ej - j );
            while ( na.size() > 1 && na[0] == '0' )
                na.remove_prefix( 1 );
            while ( nb.size() > 1 && nb[0] == '0' )
                nb.remove_prefix( 1 );
            if ( na.size() != nb.size() )
                return na.size() < nb.size();
            if ( na != nb )
                return na < nb;
            i = ei;
            j = ej;
        }
        else
        {
            if ( a[i] != b[j] )
                return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if ( a.size() - i != b.size() - j )
        return a.size() - i < b.size() - j;
    return a < b;
}

MigDocument parse_native( std::string_view text )
{
    std::vector<Atom> atoms;
    std::map<std::string, Where> atom_at;
    std::vector<std::pair<std::string, std::optional<InitValue>>> init_entries;
    std::vector<Where> init_at;
    std::vector<PendingLink> pending;
    std::map<std::string, Where> link_at;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while ( pos < text.size() )
    {
        const std::size_t nl = text.find( '\n', pos );
        std::string_view line = text.substr( pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos );
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if ( !line.empty() && line.back() == '\r' )
            line.remove_suffix( 1 );
        if ( const auto hash = line.find( '#' ); hash != std::string_view::npos )
            line = line.substr( 0, hash );

        Cursor c( line, line_no );
        if ( c.done() )
            continue;
        const std::size_t directive_col = c.column();
        const std::string directive = c.ident( "a directive" );

        if ( directive == "atoms" )
        {
            const std::string kind = c.ident( "'exo' or 'endo'" );
            if ( kind != "exo" && kind != "endo" )
                throw ParseError( line_no, directive_col, "atom kind must be 'exo' or 'endo', got '" + kind + "'" );
            if ( c.done() )
                c.fail( "empty atoms section" );
            do
            {
                const std::size_t col = ( c.skip(), c.column() );
                std::string name = c.ident( "an atom name" );
                if ( atom_at.contains( name ) )
                    throw ParseError( line_no, col, "duplicate atom '" + name + "'" );
                atom_at[name] = { line_no, col };
                atoms.push_back( { std::move( name ), kind == "exo" ? AtomKind::Exogenous : AtomKind::Endogenous } );
            } while ( c.eat( "," ) );
        }
        else if ( directive == "init" )
        {
            if ( c.done() )
                c.fail( "empty init section" );
            do
            {
                c.skip();
                const std::size_t col = c.column();
                std::optional<InitValue> v;
                if ( c.eat( "+" ) )
                    v = InitValue::Present;
                else if ( c.eat( "-" ) )
                    v = InitValue::Absent;
                else if ( !c.eat( "?" ) )
                    c.fail( "expected '+', '-' or '?' before an atom name" );
                init_entries.emplace_back( c.ident( "an atom name" ), v );
                init_at.push_back( { line_no, col } );
            } while ( c.eat( "," ) );
        }
        else if ( directive == "link" )
        {
            PendingLink p;
            p.line = line_no;
            p.column = ( c.skip(), c.column() );
            p.link.id = c.ident( "a link id" );
            if ( link_at.contains( p.link.id ) )
                throw ParseError( line_no, p.column, "duplicate link id '" + p.link.id + "'" );
            link_at[p.link.id] = { line_no, p.column };
            c.expect( ":" );
            do
                p.link.sources.push_back( c.ident( "a source atom" ) );
            while ( c.eat( "," ) );

            std::vector<std::string> targets;
            std::optional<LinkKind> kind;
            if ( c.eat( "=>" ) )
                kind = LinkKind::ProduceConsume;
            else if ( c.eat( "-|" ) )
                kind = LinkKind::Inhibit;
            else if ( !c.eat( "->" ) )
                c.fail( "expected '->', '=>' or '-|'" );
            do
                targets.push_back( c.ident( "a target" ) );
            while ( c.eat( "," ) );
            if ( !c.done() )
                c.fail( "unexpected text after link" );

            if ( kind == LinkKind::Inhibit )
            {
                if ( targets.size() != 1 )
                    throw ParseError( line_no, p.column, "a regulation targets exactly one link" );
                p.link.kind = LinkKind::Inhibit;
                p.link.target_link = targets[0];
            }
            else if ( kind == LinkKind::ProduceConsume || targets.size() > 1 )
            {
                p.link.kind = kind.value_or( LinkKind::ProduceKeep );
                p.link.target_atoms = std::move( targets );
            }
            else
            {
                p.ambiguous_arrow = true;
                p.link.kind = LinkKind::ProduceKeep;
                p.link.target_atoms = std::move( targets );
            }
            pending.push_back( std::move( p ) );
        }
        else
            throw ParseError( line_no, directive_col, "unknown directive '" + directive + "'" );
    }

    if ( atoms.empty() )
        throw ParseError( line_no, 0, "no atoms declared" );

    for ( const auto& [id, where] : link_at )
        if ( atom_at.contains( id ) )
            throw ParseError( where.line, where.column, "'" + id + "' names both an atom and a link" );

    InitialConditions init;
    for ( std::size_t i = 0; i < init_entries.size(); ++i )
    {
        const auto& [name, value] = init_entries[i];
        if ( !atom_at.contains( name ) )
            throw ParseError( init_at[i].line, init_at[i].column, "initial value for undeclared atom '" + name + "'" );
        if ( !value )
            continue;
        try
        {
            init.set( name, *value );
        }
        catch ( const std::invalid_argument& )
        {
            throw ParseError( init_at[i].line, init_at[i].column, "conflicting initial values for '" + name + "'" );
        }
    }
    for ( std::size_t i = 0; i < init_entries.size(); ++i )
        if ( !init_entries[i].second && !init.is_free( init_entries[i].first ) )
            throw ParseError( init_at[i].line, init_at[i].column,
                              "atom '" + init_entries[i].first + "' is both set and free" );

    std::vector<Link> links;
    for ( auto& p : pending )
    {
        if ( p.ambiguous_arrow && link_at.contains( p.link.target_atoms[0] ) )
        {
            p.link.kind = LinkKind::Activate;
            p.link.target_link = p.link.target_atoms[0];
            p.link.target_atoms.clear();
        }
        links.push_back( std::move( p.link ) );
    }

    Mig g( std::move( atoms ), std::move( init ), std::move( links ) );
    if ( auto errors = validate_mig( g ); !errors.empty() )
    {
        const auto& e = errors.front();
        Where w;
        if ( auto it = link_at.find( e.subject ); it != link_at.end() )
            w = it->second;
        else if ( auto at = atom_at.find( e.subject ); at != atom_at.end() )
            w = at->second;
        throw ParseError( w.line, w.column, e.message );
    }
    return { std::move( g ), Provenance::Native, {} };
}

namespace
{

const std::string& checked( const std::string& s )
{
    if ( !is_identifier( s ) )
        throw std::invalid_argument( "'" + s + "' cannot be written in the native format" );
    return s;
}

} // namespace

std::string format_link( const Link& l )
{
    std::string out = "link " + checked( l.id ) + ": ";
    for ( std::size_t i = 0; i < l.sources.size(); ++i )
        out += ( i ? ", " : "" ) + checked( l.sources[i] );
    switch ( l.kind )
    {
    case LinkKind::ProduceKeep:
    case LinkKind::ProduceConsume:
        out += l.kind == LinkKind::ProduceKeep ? " -> " : " => ";
        for ( std::size_t i = 0; i < l.target_atoms.size(); ++i )
            out += ( i ? ", " : "" ) + checked( l.target_atoms[i] );
        break;
    case LinkKind::Activate:
        out += " -> " + checked( l.target_link );
        break;
    case LinkKind::Inhibit:
        out += " -| " + checked( l.target_link );
        break;
    }
    return out;
}

std::string serialize_native( const Mig& g, const std::vector<std::string>& comments )
{
    std::string out;
    for ( const auto& c : comments )
        out += "# " + c + "\n";

    const auto& atoms = g.atoms();
    for ( std::size_t i = 0; i < atoms.size(); )
    {
        const AtomKind k = atoms[i].kind;
        out += k == AtomKind::Exogenous ? "atoms exo " : "atoms endo ";
        for ( std::size_t j = i; i < atoms.size() && atoms[i].kind == k; ++i )
            out += ( i == j ? "" : ", " ) + checked( atoms[i].name );
        out += "\n";
    }

    std::string init;
    for ( const auto& a : atoms )
        if ( auto v = g.init().get( a.name ) )
            init += ( init.empty() ? "" : ", " ) + std::string( *v == InitValue::Present ? "+" : "-" ) + a.name;
    if ( !init.empty() )
        out += "init " + init + "\n";

    std::vector<const Link*> links;
    for ( const auto& l : g.links() )
        links.push_back( &l );
    std::stable_sort( links.begin(), links.end(),
                      []( const Link* a, const Link* b ) { return natural_less( a->id, b->id ); } );
    for ( const Link* l : links )
        out += format_link( *l ) + "\n";
    return out;
}

} // namespace migsat::io

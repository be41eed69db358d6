#include "migsat/mig.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace migsat
{

void InitialConditions::set( const std::string& atom, InitValue value )
{
    auto it = _entries.find( atom );
    if ( it != _entries.end() && it->second != value )
        throw std::invalid_argument( "atom '" + atom + "' is both present and absent in the initial conditions" );
    _entries[atom] = value;
}

std::optional<InitValue> InitialConditions::get( const std::string& atom ) const
{
    auto it = _entries.find( atom );
    if ( it == _entries.end() )
        return std::nullopt;
    return it->second;
}

Mig::Mig( std::vector<Atom> atoms, InitialConditions init, std::vector<Link> links )
    : _atoms( std::move( atoms ) ), _init( std::move( init ) ), _links( std::move( links ) )
{
    build_index();
}

void Mig::build_index()
{
    _atom_by_name.clear();
    _link_by_id.clear();
    for ( std::size_t i = 0; i < _atoms.size(); ++i )
        _atom_by_name.emplace( _atoms[i].name, i );
    for ( std::size_t i = 0; i < _links.size(); ++i )
        _link_by_id.emplace( _links[i].id, i );

    auto atom_ref = [this]( const std::string& name ) -> int {
        auto it = _atom_by_name.find( name );
        return it == _atom_by_name.end() ? -1 : static_cast<int>( it->second );
    };

    _resolved.assign( _links.size(), ResolvedLink{} );
    for ( std::size_t i = 0; i < _links.size(); ++i )
    {
        const Link& l = _links[i];
        ResolvedLink& r = _resolved[i];
        for ( const auto& s : l.sources )
            r.sources.push_back( atom_ref( s ) );
        if ( is_production( l.kind ) )
        {
            for ( const auto& t : l.target_atoms )
                r.target_atoms.push_back( atom_ref( t ) );
        }
        else
        {
            auto it = _link_by_id.find( l.target_link );
            r.target_link = it == _link_by_id.end() ? -1 : static_cast<int>( it->second );
        }
    }
    for ( std::size_t i = 0; i < _links.size(); ++i )
    {
        const int t = _resolved[i].target_link;
        if ( t < 0 )
            continue;
        if ( _links[i].kind == LinkKind::Activate )
            _resolved[t].activators.push_back( static_cast<int>( i ) );
        else
            _resolved[t].inhibitors.push_back( static_cast<int>( i ) );
    }

    // Depth by walking target chains; a chain longer than the link count is a cycle.
    _stratified = true;
    for ( std::size_t i = 0; i < _links.size(); ++i )
    {
        if ( is_production( _links[i].kind ) )
            continue;
        int depth = 0;
        int cur = _resolved[i].target_link;
        std::size_t steps = 0;
        bool ok = true;
        while ( true )
        {
            if ( cur < 0 || steps > _links.size() )
            {
                ok = false;
                break;
            }
            if ( is_production( _links[cur].kind ) )
                break;
            cur = _resolved[cur].target_link;
            ++depth;
            ++steps;
        }
        _resolved[i].depth = ok ? depth : -2;
        _stratified = _stratified && ok;
    }

    _eval_order.resize( _links.size() );
    for ( std::size_t i = 0; i < _links.size(); ++i )
        _eval_order[i] = static_cast<int>( i );
    std::stable_sort( _eval_order.begin(), _eval_order.end(),
                      [this]( int a, int b ) { return _resolved[a].depth > _resolved[b].depth; } );
}

std::optional<std::size_t> Mig::find_atom( const std::string& name ) const
{
    auto it = _atom_by_name.find( name );
    if ( it == _atom_by_name.end() )
        return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Mig::find_link( const std::string& id ) const
{
    auto it = _link_by_id.find( id );
    if ( it == _link_by_id.end() )
        return std::nullopt;
    return it->second;
}

std::size_t Mig::atom_index( const std::string& name ) const
{
    if ( auto i = find_atom( name ) )
        return *i;
    throw std::out_of_range( "unknown atom '" + name + "'" );
}

std::size_t Mig::link_index( const std::string& id ) const
{
    if ( auto i = find_link( id ) )
        return *i;
    throw std::out_of_range( "unknown link '" + id + "'" );
}

int Mig::max_regulation_depth() const
{
    int d = -1;
    for ( const auto& r : _resolved )
        d = std::max( d, r.depth );
    return d;
}

std::vector<std::string> Mig::free_atoms() const
{
    std::vector<std::string> out;
    for ( const auto& a : _atoms )
        if ( _init.is_free( a.name ) )
            out.push_back( a.name );
    return out;
}

Mig Mig::with_init( InitialConditions init ) const { return Mig( _atoms, std::move( init ), _links ); }

Mig Mig::with_atom_kind( const std::string& atom, AtomKind kind ) const
{
    auto atoms = _atoms;
    atoms.at( atom_index( atom ) ).kind = kind;
    return Mig( std::move( atoms ), _init, _links );
}

Mig Mig::with_links( std::vector<Link> links ) const { return Mig( _atoms, _init, std::move( links ) ); }

namespace
{

std::string join_errors( const std::vector<StructuralError>& errors )
{
    std::string msg = "invalid graph:";
    for ( const auto& e : errors )
        msg += "\n  " + e.message;
    return msg;
}

} // namespace

InvalidMig::InvalidMig( std::vector<StructuralError> errors )
    : std::runtime_error( join_errors( errors ) ), _errors( std::move( errors ) )
{
}

std::vector<StructuralError> validate_mig( const Mig& g )
{
    using K = StructuralError::Kind;
    std::vector<StructuralError> errors;
    auto report = [&]( K kind, const std::string& subject, std::string msg ) {
        errors.push_back( { kind, std::move( msg ), subject } );
    };

    std::set<std::string> seen_atoms;
    for ( const auto& a : g.atoms() )
    {
        if ( a.name.empty() )
            report( K::EmptyName, a.name, "atom with empty name" );
        else if ( !seen_atoms.insert( a.name ).second )
            report( K::DuplicateAtom, a.name, "duplicate atom '" + a.name + "'" );
    }

    std::set<std::string> seen_links;
    for ( const auto& l : g.links() )
    {
        if ( l.id.empty() )
            report( K::EmptyName, l.id, "link with empty id" );
        else if ( !seen_links.insert( l.id ).second )
            report( K::DuplicateLink, l.id, "duplicate link id '" + l.id + "'" );
    }

    for ( const auto& [name, value] : g.init().entries() )
        if ( !g.find_atom( name ) )
            report( K::DanglingName, name, "initial condition names undeclared atom '" + name + "'" );

    for ( std::size_t i = 0; i < g.link_count(); ++i )
    {
        const Link& l = g.links()[i];
        const ResolvedLink& r = g.resolved( i );
        if ( l.sources.empty() )
            report( K::EmptySources, l.id, "link '" + l.id + "' has no sources" );
        for ( std::size_t s = 0; s < l.sources.size(); ++s )
            if ( r.sources[s] < 0 )
                report( K::DanglingName, l.id, "link '" + l.id + "' sources undeclared atom '" + l.sources[s] + "'" );

        if ( is_production( l.kind ) )
        {
            if ( !l.target_link.empty() )
                report( K::MalformedLink, l.id, "production '" + l.id + "' targets a link" );
            if ( l.target_atoms.empty() )
                report( K::EmptyTargets, l.id, "production '" + l.id + "' has no targets" );
            for ( std::size_t t = 0; t < l.target_atoms.size(); ++t )
                if ( r.target_atoms[t] < 0 )
                    report( K::DanglingName, l.id,
                            "link '" + l.id + "' targets undeclared atom '" + l.target_atoms[t] + "'" );
        }
        else
        {
            if ( !l.target_atoms.empty() )
                report( K::MalformedLink, l.id, "regulation '" + l.id + "' targets atoms" );
            if ( r.target_link < 0 )
                report( K::DanglingName, l.id, "regulation '" + l.id + "' targets undeclared link '" + l.target_link + "'" );
            else if ( r.depth == -2 )
            {
                // Only cycles are left: dangling chains were reported on their own link.
                std::size_t cur = i;
                bool dangling = false;
                for ( std::size_t steps = 0; steps <= g.link_count(); ++steps )
                {
                    const int next = g.resolved( cur ).target_link;
                    if ( next < 0 )
                    {
                        dangling = true;
                        break;
                    }
                    if ( is_production( g.links()[next].kind ) )
                        break;
                    cur = static_cast<std::size_t>( next );
                }
                if ( !dangling )
                    report( K::RegulationCycle, l.id, "regulation '" + l.id + "' lies on a circular chain of regulations" );
            }
        }
    }
    return errors;
}

void require_valid( const Mig& g )
{
    auto errors = validate_mig( g );
    if ( !errors.empty() )
        throw InvalidMig( std::move( errors ) );
}

bool is_normalized( const Mig& g )
{
    return std::all_of( g.links().begin(), g.links().end(), []( const Link& l ) {
        return !is_production( l.kind ) || l.target_atoms.size() == 1;
    } );
}

Mig normalize( const Mig& g )
{
    if ( is_normalized( g ) )
        return g;

    std::set<std::string> taken;
    for ( const auto& l : g.links() )
        taken.insert( l.id );
    for ( const auto& a : g.atoms() )
        taken.insert( a.name );
    auto fresh = [&taken]( const std::string& base ) {
        std::string id = base;
        for ( int n = 2; taken.contains( id ); ++n )
            id = base + "_" + std::to_string( n );
        taken.insert( id );
        return id;
    };

    // Root production of every link.
    std::vector<int> root( g.link_count(), -1 );
    for ( std::size_t i = 0; i < g.link_count(); ++i )
    {
        int cur = static_cast<int>( i );
        while ( cur >= 0 && !is_production( g.links()[cur].kind ) )
            cur = g.resolved( cur ).target_link;
        root[i] = cur;
    }

    // New id of link i in the copy made for the split target `copy` of its root.
    std::map<std::pair<std::size_t, std::size_t>, std::string> renamed;
    std::vector<Link> out;
    for ( std::size_t i = 0; i < g.link_count(); ++i )
    {
        const Link& l = g.links()[i];
        const int r = root[i];
        const std::size_t copies = r >= 0 ? g.links()[r].target_atoms.size() : 1;
        if ( copies <= 1 )
            continue;
        for ( std::size_t c = 0; c < copies; ++c )
            renamed[{ i, c }] = fresh( l.id + "." + g.links()[r].target_atoms[c] );
    }

    for ( std::size_t i = 0; i < g.link_count(); ++i )
    {
        const Link& l = g.links()[i];
        const int r = root[i];
        const std::size_t copies = r >= 0 ? g.links()[r].target_atoms.size() : 1;
        if ( copies <= 1 )
        {
            out.push_back( l );
            continue;
        }
        for ( std::size_t c = 0; c < copies; ++c )
        {
            Link copy = l;
            copy.id = renamed[{ i, c }];
            if ( is_production( l.kind ) )
                copy.target_atoms = { l.target_atoms[c] };
            else
                copy.target_link = renamed[{ static_cast<std::size_t>( g.resolved( i ).target_link ), c }];
            out.push_back( std::move( copy ) );
        }
    }
    return Mig( g.atoms(), g.init(), std::move( out ) );
}

std::vector<std::string> direct_regulations( const Mig& g, const std::string& link, Polarity polarity )
{
    const auto& r = g.resolved( g.link_index( link ) );
    const auto& ids = polarity == Polarity::Activating ? r.activators : r.inhibitors;
    std::vector<std::string> out;
    for ( int i : ids )
        out.push_back( g.links()[i].id );
    return out;
}

std::string canonical_form( const Mig& g )
{
    std::vector<std::string> memo( g.link_count() );
    std::function<std::string( std::size_t, std::size_t )> describe = [&]( std::size_t i, std::size_t guard ) {
        if ( !memo[i].empty() )
            return memo[i];
        const Link& l = g.links()[i];
        std::set<std::string> src( l.sources.begin(), l.sources.end() );
        std::ostringstream os;
        os << to_string( l.kind ) << '(';
        for ( const auto& s : src )
            os << s << ',';
        os << ")->";
        if ( is_production( l.kind ) )
        {
            std::set<std::string> tgt( l.target_atoms.begin(), l.target_atoms.end() );
            os << '{';
            for ( const auto& t : tgt )
                os << t << ',';
            os << '}';
        }
        else
        {
            const int t = g.resolved( i ).target_link;
            if ( t < 0 || guard > g.link_count() )
                os << "[?" << l.target_link << ']';
            else
                os << '[' << describe( static_cast<std::size_t>( t ), guard + 1 ) << ']';
        }
        memo[i] = os.str();
        return memo[i];
    };

    std::ostringstream os;
    for ( const auto& a : g.atoms() )
        os << a.name << ':' << to_string( a.kind ) << ';';
    os << '|';
    for ( const auto& [name, value] : g.init().entries() )
        os << ( value == InitValue::Present ? '+' : '-' ) << name << ';';
    os << '|';
    std::set<std::string> links;
    for ( std::size_t i = 0; i < g.link_count(); ++i )
        links.insert( describe( i, 0 ) );
    for ( const auto& l : links )
        os << l << ';';
    return os.str();
}

const char* to_string( LinkKind kind )
{
    switch ( kind )
    {
    case LinkKind::ProduceKeep:
        return "produce";
    case LinkKind::ProduceConsume:
        return "consume";
    case LinkKind::Activate:
        return "activate";
    case LinkKind::Inhibit:
        return "inhibit";
    }
    return "?";
}

const char* to_string( AtomKind kind ) { return kind == AtomKind::Exogenous ? "exo" : "endo"; }

} // namespace migsat

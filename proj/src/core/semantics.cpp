#include "migsat/semantics.hpp"

#include <stdexcept>

namespace migsat
{

State::State( const Mig& g, const std::vector<std::string>& present ) : _present( g.atom_count(), false )
{
    for ( const auto& name : present )
        _present[g.atom_index( name )] = true;
}

std::vector<std::string> State::names( const Mig& g ) const
{
    std::vector<std::string> out;
    for ( std::size_t i = 0; i < _present.size(); ++i )
        if ( _present[i] )
            out.push_back( g.atoms()[i].name );
    return out;
}

std::vector<bool> active_links( const Mig& g, const State& d )
{
    std::vector<bool> active( g.link_count(), false );
    for ( int i : g.evaluation_order() )
    {
        const ResolvedLink& r = g.resolved( i );
        bool on = true;
        for ( int s : r.sources )
            on = on && s >= 0 && d.contains( static_cast<std::size_t>( s ) );
        for ( int a : r.activators )
            on = on && active[a];
        for ( int h : r.inhibitors )
            on = on && !active[h];
        active[i] = on;
    }
    return active;
}

namespace
{

bool link_active( const Mig& g, std::size_t x, const State& d )
{
    const ResolvedLink& r = g.resolved( x );
    for ( int s : r.sources )
        if ( s < 0 || !d.contains( static_cast<std::size_t>( s ) ) )
            return false;
    for ( int a : r.activators )
        if ( !link_active( g, static_cast<std::size_t>( a ), d ) )
            return false;
    for ( int h : r.inhibitors )
        if ( link_active( g, static_cast<std::size_t>( h ), d ) )
            return false;
    return true;
}

bool produced_at( const Mig& g, std::size_t p, const std::vector<bool>& active )
{
    if ( g.is_exogenous( p ) )
        return false;
    for ( std::size_t i = 0; i < g.link_count(); ++i )
    {
        if ( !active[i] || !is_production( g.links()[i].kind ) )
            continue;
        for ( int t : g.resolved( i ).target_atoms )
            if ( t == static_cast<int>( p ) )
                return true;
    }
    return false;
}

bool consumed_at( const Mig& g, std::size_t p, const std::vector<bool>& active )
{
    if ( g.is_exogenous( p ) )
        return false;
    for ( std::size_t i = 0; i < g.link_count(); ++i )
    {
        if ( !active[i] || g.links()[i].kind != LinkKind::ProduceConsume )
            continue;
        for ( int s : g.resolved( i ).sources )
            if ( s == static_cast<int>( p ) )
                return true;
    }
    return false;
}

} // namespace

bool is_active( const Mig& g, const std::string& link, const State& d )
{
    return link_active( g, g.link_index( link ), d );
}

bool produced( const Mig& g, const std::string& atom, const State& d )
{
    return produced_at( g, g.atom_index( atom ), active_links( g, d ) );
}

bool consumed( const Mig& g, const std::string& atom, const State& d )
{
    return consumed_at( g, g.atom_index( atom ), active_links( g, d ) );
}

State step( const Mig& g, const State& t )
{
    const auto active = active_links( g, t );
    std::vector<bool> prod( g.atom_count(), false );
    std::vector<bool> cons( g.atom_count(), false );
    for ( std::size_t i = 0; i < g.link_count(); ++i )
    {
        if ( !active[i] || !is_production( g.links()[i].kind ) )
            continue;
        const ResolvedLink& r = g.resolved( i );
        for ( int q : r.target_atoms )
            prod[q] = true;
        if ( g.links()[i].kind == LinkKind::ProduceConsume )
            for ( int s : r.sources )
                cons[s] = true;
    }

    State next( g.atom_count() );
    for ( std::size_t p = 0; p < g.atom_count(); ++p )
    {
        if ( g.is_exogenous( p ) )
            next.set( p, t.contains( p ) );
        else
            next.set( p, prod[p] || ( t.contains( p ) && !cons[p] ) );
    }
    return next;
}

TotalAssignment complete_init( const Mig& g, const std::map<std::string, bool>& overrides )
{
    for ( const auto& [name, value] : overrides )
        if ( !g.find_atom( name ) )
            throw std::invalid_argument( "unknown atom '" + name + "'" );

    TotalAssignment out( g.atom_count(), false );
    std::vector<std::string> missing;
    for ( std::size_t i = 0; i < g.atom_count(); ++i )
    {
        const auto& name = g.atoms()[i].name;
        if ( auto it = overrides.find( name ); it != overrides.end() )
            out[i] = it->second;
        else if ( auto v = g.init().get( name ) )
            out[i] = *v == InitValue::Present;
        else
            missing.push_back( name );
    }
    if ( !missing.empty() )
    {
        std::string msg = "free atoms need an initial value:";
        for ( const auto& m : missing )
            msg += " " + m;
        throw std::invalid_argument( msg );
    }
    return out;
}

std::optional<std::size_t> find_stabilization( const std::vector<State>& states )
{
    for ( std::size_t k = 0; k + 1 < states.size(); ++k )
        if ( states[k + 1] == states[k] )
            return k;
    return std::nullopt;
}

Trace simulate( const Mig& g, const TotalAssignment& init, std::size_t horizon )
{
    if ( init.size() != g.atom_count() )
        throw std::invalid_argument( "initial assignment must give a value to every atom" );

    Trace trace;
    trace.states.reserve( horizon + 1 );
    State s( g.atom_count() );
    for ( std::size_t i = 0; i < init.size(); ++i )
        s.set( i, init[i] );
    trace.states.push_back( s );
    for ( std::size_t k = 0; k < horizon; ++k )
    {
        trace.states.push_back( step( g, trace.states.back() ) );
        if ( !trace.stabilized_at && trace.states[k + 1] == trace.states[k] )
            trace.stabilized_at = k;
    }
    return trace;
}

} // namespace migsat

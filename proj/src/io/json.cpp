#include "migsat/io/json.hpp"

#include "migsat/io/native.hpp"

#include <algorithm>
#include <set>

namespace migsat::io
{

namespace
{

const char* init_name( const Mig& g, const std::string& atom )
{
    const auto v = g.init().get( atom );
    if ( !v )
        return "free";
    return *v == InitValue::Present ? "present" : "absent";
}

LinkKind parse_link_kind( const std::string& s )
{
    if ( s == "produce" )
        return LinkKind::ProduceKeep;
    if ( s == "consume" )
        return LinkKind::ProduceConsume;
    if ( s == "activate" )
        return LinkKind::Activate;
    if ( s == "inhibit" )
        return LinkKind::Inhibit;
    throw ParseError( 0, 0, "unknown link kind '" + s + "'" );
}

std::vector<std::string> strings( const json& j, const char* what )
{
    if ( !j.is_array() )
        throw ParseError( 0, 0, std::string( what ) + " must be an array of strings" );
    std::vector<std::string> out;
    for ( const auto& e : j )
    {
        if ( !e.is_string() )
            throw ParseError( 0, 0, std::string( what ) + " must be an array of strings" );
        out.push_back( e.get<std::string>() );
    }
    return out;
}

} // namespace

InitValue parse_init_value( const std::string& s )
{
    if ( s == "present" )
        return InitValue::Present;
    if ( s == "absent" )
        return InitValue::Absent;
    throw ParseError( 0, 0, "initial value must be 'present' or 'absent', got '" + s + "'" );
}

AtomKind parse_atom_kind( const std::string& s )
{
    if ( s == "exo" )
        return AtomKind::Exogenous;
    if ( s == "endo" )
        return AtomKind::Endogenous;
    throw ParseError( 0, 0, "atom kind must be 'exo' or 'endo', got '" + s + "'" );
}

json graph_to_json( const Mig& g )
{
    json atoms = json::array();
    for ( const auto& a : g.atoms() )
        atoms.push_back( { { "name", a.name }, { "kind", to_string( a.kind ) }, { "init", init_name( g, a.name ) } } );
    json links = json::array();
    for ( const auto& l : g.links() )
    {
        json j = { { "id", l.id }, { "kind", to_string( l.kind ) }, { "sources", l.sources } };
        if ( is_production( l.kind ) )
            j["targets"] = l.target_atoms;
        else
            j["target"] = l.target_link;
        links.push_back( std::move( j ) );
    }
    return { { "atoms", std::move( atoms ) }, { "links", std::move( links ) } };
}

Mig graph_from_json( const json& j )
{
    try
    {
        if ( !j.is_object() || !j.contains( "atoms" ) || !j.at( "atoms" ).is_array() )
            throw ParseError( 0, 0, "graph must be an object with an 'atoms' array" );
        std::vector<Atom> atoms;
        InitialConditions init;
        for ( const auto& a : j.at( "atoms" ) )
        {
            const auto name = a.at( "name" ).get<std::string>();
            atoms.push_back( { name, parse_atom_kind( a.value( "kind", std::string( "endo" ) ) ) } );
            const auto v = a.value( "init", std::string( "free" ) );
            if ( v != "free" )
                init.set( name, parse_init_value( v ) );
        }
        if ( atoms.empty() )
            throw ParseError( 0, 0, "no atoms declared" );
        std::vector<Link> links;
        for ( const auto& l : j.value( "links", json::array() ) )
        {
            Link link;
            link.id = l.at( "id" ).get<std::string>();
            link.kind = parse_link_kind( l.at( "kind" ).get<std::string>() );
            link.sources = strings( l.at( "sources" ), "sources" );
            if ( is_production( link.kind ) )
                link.target_atoms = strings( l.at( "targets" ), "targets" );
            else
                link.target_link = l.at( "target" ).get<std::string>();
            links.push_back( std::move( link ) );
        }
        Mig g( std::move( atoms ), std::move( init ), std::move( links ) );
        if ( auto errors = validate_mig( g ); !errors.empty() )
            throw ParseError( 0, 0, errors.front().message );
        return g;
    }
    catch ( const json::exception& e )
    {
        throw ParseError( 0, 0, std::string( "bad graph JSON: " ) + e.what() );
    }
    catch ( const std::invalid_argument& e )
    {
        throw ParseError( 0, 0, e.what() );
    }
}

json trace_to_json( const Mig& g, const Trace& t )
{
    json states = json::array();
    for ( const auto& s : t.states )
        states.push_back( s.names( g ) );
    return { { "states", std::move( states ) },
             { "stabilized_at", t.stabilized_at ? json( *t.stabilized_at ) : json( nullptr ) } };
}

json query_result_to_json( const QueryResult& r, bool with_stats )
{
    json witnesses = json::array();
    for ( std::size_t i = 0; i < r.witnesses.size(); ++i )
    {
        json w = json::object();
        for ( const auto& [name, value] : r.witness_map( i ) )
            w[name] = value ? "present" : "absent";
        witnesses.push_back( std::move( w ) );
    }
    json out = { { "mode", to_string( r.mode ) }, { "free_atoms", r.free_atoms }, { "witnesses", std::move( witnesses ) } };
    if ( with_stats )
        out["stats"] = { { "solver_calls", r.stats.solver_calls }, { "elapsed_ms", r.stats.elapsed_ms } };
    return out;
}

json validation_to_json( const Mig& g, const ValidationResult& r )
{
    json out = { { "sat", r.sat } };
    if ( r.witness )
        out["trace"] = trace_to_json( g, *r.witness );
    return out;
}

json graph_diff( const Mig& before, const Mig& after )
{
    std::set<std::string> old_lines;
    std::set<std::string> new_lines;
    for ( const auto& l : before.links() )
        old_lines.insert( format_link( l ) );
    for ( const auto& l : after.links() )
        new_lines.insert( format_link( l ) );
    json added = json::array();
    json removed = json::array();
    for ( const auto& l : new_lines )
        if ( !old_lines.contains( l ) )
            added.push_back( l );
    for ( const auto& l : old_lines )
        if ( !new_lines.contains( l ) )
            removed.push_back( l );
    return { { "added", std::move( added ) }, { "removed", std::move( removed ) } };
}

json proposal_to_json( const Mig& before, const EditProposal& p, bool with_stats )
{
    json edit = { { "kind", to_string( p.edit.kind ) }, { "description", p.edit.describe() } };
    if ( !p.edit.link.empty() )
        edit["link"] = p.edit.link;
    if ( !p.edit.source.empty() )
        edit["source"] = p.edit.source;
    if ( !p.edit.target.empty() )
        edit["target"] = p.edit.target;
    if ( p.edit.kind != EditKind::RemoveLink )
        edit["new_kind"] = to_string( p.edit.new_kind );
    if ( !p.edit.new_id.empty() )
        edit["new_id"] = p.edit.new_id;
    if ( !p.edit.removed.empty() )
        edit["removed"] = p.edit.removed;
    return { { "edit", std::move( edit ) },
             { "diff", graph_diff( before, p.resulting_mig ) },
             { "native", serialize_native( p.resulting_mig, { "edit: " + p.edit.describe() } ) },
             { "witnesses", query_result_to_json( p.witnesses, with_stats ) } };
}

json update_result_to_json( const Mig& before, const UpdateResult& r, bool with_stats )
{
    json proposals = json::array();
    for ( const auto& p : r.proposals )
        proposals.push_back( proposal_to_json( before, p, with_stats ) );
    json out = { { "already_satisfied", r.already_satisfied },
                 { "truncated", r.truncated },
                 { "candidates", r.candidates },
                 { "checked", r.checked },
                 { "proposals", std::move( proposals ) } };
    if ( r.already_satisfied )
        out["current"] = query_result_to_json( r.current, with_stats );
    return out;
}

} // namespace migsat::io

#include "migsat/server.hpp"

#include "migsat/io/gpml.hpp"
#include "migsat/io/native.hpp"

#include <mutex>

namespace migsat::server
{

namespace
{

using io::json;

struct HttpError : std::runtime_error
{
    HttpError( int status, const std::string& what ) : std::runtime_error( what ), status( status ) {}
    int status;
};

Response error( int status, const std::string& message, json extra = json::object() )
{
    extra["error"] = message;
    return { status, std::move( extra ) };
}

std::vector<std::string> split_path( const std::string& path )
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while ( i < path.size() )
    {
        const std::size_t j = path.find( '/', i );
        const std::size_t end = j == std::string::npos ? path.size() : j;
        if ( end > i )
            out.push_back( path.substr( i, end - i ) );
        i = end + 1;
    }
    return out;
}

json parse_body( const std::string& body )
{
    if ( body.find_first_not_of( " \t\r\n" ) == std::string::npos )
        return json::object();
    json j = json::parse( body, nullptr, false );
    if ( j.is_discarded() || !j.is_object() )
        throw HttpError( 400, "request body must be a JSON object" );
    return j;
}

template <class T>
T field( const json& body, const char* name, T fallback )
{
    if ( !body.contains( name ) )
        return fallback;
    try
    {
        return body.at( name ).get<T>();
    }
    catch ( const json::exception& )
    {
        throw HttpError( 400, std::string( "field '" ) + name + "' has the wrong type" );
    }
}

QueryMode parse_mode( const std::string& s )
{
    if ( s == "exists" )
        return QueryMode::ExistsAll;
    if ( s == "forall-endo" )
        return QueryMode::ForallEndogenous;
    throw HttpError( 400, "mode must be 'exists' or 'forall-endo', got '" + s + "'" );
}

bool starts_with( const std::string& s, const char* prefix ) { return s.rfind( prefix, 0 ) == 0; }

} // namespace

Service::Service( ServiceOptions opts ) : _opts( std::move( opts ) ) {}

std::shared_ptr<Service::Session> Service::find( const std::string& id ) const
{
    std::shared_lock lock( _sessions_mutex );
    auto it = _sessions.find( id );
    return it == _sessions.end() ? nullptr : it->second;
}

json Service::describe( const Session& s ) const
{
    return { { "id", s.id },
             { "version", s.version },
             { "source", io::to_string( s.doc.source ) },
             { "warnings", s.doc.warnings },
             { "graph", io::graph_to_json( s.doc.mig ) } };
}

std::size_t Service::horizon_of( const json& body ) const
{
    const auto k = field<long long>( body, "horizon", 10 );
    if ( k < 0 || static_cast<unsigned long long>( k ) > _opts.max_horizon )
        throw HttpError( 400, "horizon must be between 0 and " + std::to_string( _opts.max_horizon ) );
    return static_cast<std::size_t>( k );
}

Response Service::handle( const Request& req )
{
    try
    {
        const auto parts = split_path( req.path );
        if ( parts.empty() || parts[0] != "graphs" )
            return error( 404, "no such resource" );
        if ( parts.size() == 1 )
        {
            if ( req.method != "POST" )
                return error( 405, "use POST to upload a graph" );
            return create( req );
        }

        auto session = find( parts[1] );
        if ( !session )
            return error( 404, "no graph with id '" + parts[1] + "'" );
        std::lock_guard lock( session->mutex );

        if ( parts.size() == 2 )
        {
            if ( req.method != "GET" )
                return error( 405, "use GET to read a graph" );
            return get( *session );
        }

        const json body = parse_body( req.body );
        if ( body.contains( "version" ) && field<std::uint64_t>( body, "version", 0 ) != session->version )
            return error( 409, "graph is at version " + std::to_string( session->version ),
                          { { "version", session->version } } );

        if ( parts.size() == 4 && parts[2] == "atoms" )
        {
            if ( req.method != "PATCH" )
                return error( 405, "use PATCH to change an atom" );
            return patch_atom( *session, parts[3], body );
        }
        if ( parts.size() != 3 )
            return error( 404, "no such resource" );
        if ( req.method != "POST" )
            return error( 405, "tasks are started with POST" );
        if ( parts[2] == "simulate" )
            return simulate( *session, body );
        if ( parts[2] == "query" )
            return run_query( *session, body );
        if ( parts[2] == "update" )
            return run_update( *session, body );
        if ( parts[2] == "apply" )
            return apply( *session, body );
        return error( 404, "no such task '" + parts[2] + "'" );
    }
    catch ( const HttpError& e )
    {
        return error( e.status, e.what() );
    }
    catch ( const io::ParseError& e )
    {
        return error( 400, e.what(), { { "line", e.line() }, { "column", e.column() } } );
    }
    catch ( const QueryError& e )
    {
        return error( 400, e.what(), { { "position", e.position() } } );
    }
    catch ( const LimitError& e )
    {
        return error( 422, e.what() );
    }
    catch ( const std::invalid_argument& e )
    {
        return error( 400, e.what() );
    }
    catch ( const std::exception& e )
    {
        return error( 500, e.what() );
    }
}

Response Service::create( const Request& req )
{
    io::MigDocument doc;
    if ( starts_with( req.content_type, "application/json" ) )
    {
        const json j = json::parse( req.body, nullptr, false );
        if ( j.is_discarded() )
            throw HttpError( 400, "body is not valid JSON" );
        doc.mig = io::graph_from_json( j );
        doc.source = io::Provenance::Api;
    }
    else if ( starts_with( req.content_type, "application/xml" ) || starts_with( req.content_type, "text/xml" ) )
        doc = io::import_gpml( req.body );
    else
        doc = io::parse_document( req.body );

    auto s = std::make_shared<Session>();
    s->doc = std::move( doc );
    {
        std::unique_lock lock( _sessions_mutex );
        s->id = "g" + std::to_string( _next_id++ );
        _sessions[s->id] = s;
    }
    return { 201, describe( *s ) };
}

Response Service::get( Session& s ) { return { 200, describe( s ) }; }

Response Service::patch_atom( Session& s, const std::string& atom, const json& body )
{
    const Mig& g = s.doc.mig;
    if ( !g.find_atom( atom ) )
        return error( 404, "no atom '" + atom + "'" );
    if ( !body.contains( "kind" ) && !body.contains( "init" ) )
        throw HttpError( 400, "nothing to change: give 'kind' and/or 'init'" );

    Mig next = g;
    if ( body.contains( "kind" ) )
        next = next.with_atom_kind( atom, io::parse_atom_kind( field<std::string>( body, "kind", "" ) ) );
    if ( body.contains( "init" ) )
    {
        const auto v = field<std::string>( body, "init", "" );
        InitialConditions init = next.init();
        init.clear( atom );
        if ( v != "free" )
            init.set( atom, io::parse_init_value( v ) );
        next = next.with_init( std::move( init ) );
    }
    s.doc.mig = std::move( next );
    ++s.version;
    s.cache.clear();
    s.last_update.reset();
    return { 200, describe( s ) };
}

Response Service::simulate( Session& s, const json& body )
{
    const std::size_t k = horizon_of( body );
    std::map<std::string, bool> overrides;
    if ( body.contains( "init" ) )
    {
        if ( !body["init"].is_object() )
            throw HttpError( 400, "'init' must map atom names to present|absent" );
        for ( const auto& [name, v] : body["init"].items() )
        {
            if ( !v.is_string() )
                throw HttpError( 400, "initial value of '" + name + "' must be a string" );
            overrides[name] = io::parse_init_value( v.get<std::string>() ) == InitValue::Present;
        }
    }
    const Mig& g = s.doc.mig;
    const std::string key = "simulate " + std::to_string( k ) + " " + json( overrides ).dump();
    if ( auto it = s.cache.find( key ); it != s.cache.end() )
        return { 200, it->second };
    json out = io::trace_to_json( g, migsat::simulate( g, complete_init( g, overrides ), k ) );
    out["version"] = s.version;
    s.cache[key] = out;
    return { 200, out };
}

Response Service::run_query( Session& s, const json& body )
{
    const std::size_t k = horizon_of( body );
    const Query q = Query::parse( field<std::string>( body, "query", "" ) );
    const QueryMode mode = parse_mode( field<std::string>( body, "mode", "exists" ) );
    const std::string key = "query " + std::to_string( k ) + " " + to_string( mode ) + " " + q.text();
    if ( auto it = s.cache.find( key ); it != s.cache.end() )
        return { 200, it->second };
    json out = io::query_result_to_json( query( s.doc.mig, k, q, mode, _opts.reasoner ), false );
    out["version"] = s.version;
    out["horizon"] = k;
    out["query"] = q.text();
    s.cache[key] = out;
    return { 200, out };
}

Response Service::run_update( Session& s, const json& body )
{
    const std::size_t k = horizon_of( body );
    const Query q = Query::parse( field<std::string>( body, "query", "" ) );
    UpdateOptions opts;
    opts.reasoner = _opts.reasoner;
    opts.mode = parse_mode( field<std::string>( body, "mode", "exists" ) );
    const auto budget = field<long long>( body, "time_budget_ms", _opts.update_budget.count() );
    opts.time_budget = std::chrono::milliseconds( std::clamp<long long>( budget, 0, _opts.update_budget.count() ) );

    UpdateResult r = update( s.doc.mig, k, q, opts );
    json out = io::update_result_to_json( s.doc.mig, r, false );
    out["version"] = s.version;
    out["horizon"] = k;
    out["query"] = q.text();
    s.last_update = std::move( r );
    return { 200, out };
}

Response Service::apply( Session& s, const json& body )
{
    if ( !body.contains( "proposal" ) )
        throw HttpError( 400, "give the 'proposal' index to apply" );
    if ( !s.last_update )
        return error( 409, "no update has been run on version " + std::to_string( s.version ) );
    const auto i = field<long long>( body, "proposal", -1 );
    if ( i < 0 || static_cast<std::size_t>( i ) >= s.last_update->proposals.size() )
        throw HttpError( 400, "proposal index out of range" );

    const EditProposal& p = s.last_update->proposals[static_cast<std::size_t>( i )];
    json out = { { "applied", p.edit.describe() } };
    s.doc.mig = p.resulting_mig;
    ++s.version;
    s.cache.clear();
    s.last_update.reset();
    out.update( describe( s ) );
    return { 200, out };
}

} // namespace migsat::server

// Command-line front end: simulate, validate, query, update, export, serve.

#include "migsat/encoder.hpp"
#include "migsat/io/document.hpp"
#include "migsat/io/gpml.hpp"
#include "migsat/io/json.hpp"
#include "migsat/io/native.hpp"
#include "migsat/reasoner.hpp"
#include "migsat/sat/dimacs.hpp"
#include "migsat/server.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

using namespace migsat;
using io::json;
using Clock = std::chrono::steady_clock;

enum Exit
{
    Ok = 0,
    Usage = 1,
    Parse = 2,
    Limits = 3,
};

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Options
{
    std::string file;
    std::size_t horizon = 10;
    std::vector<std::string> init;
    std::string query;
    std::string mode = "exists";
    std::string format = "table";
    std::size_t max_free = 20;
    double time_budget = 0; // seconds, 0 = none
    std::string dimacs;
    std::string map;
    std::string host = "127.0.0.1";
    int port = 8080;
};

std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw UsageError( "cannot open '" + path + "'" );
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fnv1a( std::string_view data )
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for ( unsigned char c : data )
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf( out, sizeof out, "%016llx", static_cast<unsigned long long>( h ) );
    return out;
}

struct Input
{
    std::string text;
    io::MigDocument doc;
};

Input load( const Options& o )
{
    Input in;
    in.text = read_file( o.file );
    in.doc = o.file.ends_with( ".gpml" ) ? io::import_gpml( in.text ) : io::parse_document( in.text );
    for ( const auto& w : in.doc.warnings )
        std::cerr << "warning: " << w << "\n";
    return in;
}

QueryMode mode_of( const std::string& s )
{
    return s == "forall-endo" ? QueryMode::ForallEndogenous : QueryMode::ExistsAll;
}

std::map<std::string, bool> init_overrides( const Mig& g, const std::vector<std::string>& items )
{
    std::map<std::string, bool> out;
    for ( const auto& item : items )
    {
        const auto eq = item.find( '=' );
        if ( eq == std::string::npos )
            throw UsageError( "--init expects name=present|absent, got '" + item + "'" );
        const std::string name = item.substr( 0, eq );
        const std::string value = item.substr( eq + 1 );
        if ( !g.find_atom( name ) )
            throw UsageError( "--init names unknown atom '" + name + "'" );
        if ( value != "present" && value != "absent" )
            throw UsageError( "--init value for '" + name + "' must be present or absent" );
        out[name] = value == "present";
    }
    return out;
}

double ms_since( Clock::time_point start )
{
    return std::chrono::duration<double, std::milli>( Clock::now() - start ).count();
}

json report( const std::string& task, const Input& in, const Options& o, json results, double total_ms )
{
    return { { "task", task },
             { "inputs", { { "file", o.file }, { "digest", fnv1a( in.text ) } } },
             { "horizon", o.horizon },
             { "results", std::move( results ) },
             { "timings", { { "total_ms", total_ms } } } };
}

void print_trace( const Mig& g, const Trace& t )
{
    std::size_t width = 4;
    for ( const auto& a : g.atoms() )
        width = std::max( width, a.name.size() );
    std::size_t cell = std::to_string( t.states.size() - 1 ).size() + 1;

    std::cout << std::string( width, ' ' );
    for ( std::size_t i = 0; i < t.states.size(); ++i )
    {
        const std::string n = std::to_string( i );
        std::cout << std::string( cell - n.size(), ' ' ) << n;
    }
    std::cout << "\n";
    for ( std::size_t a = 0; a < g.atom_count(); ++a )
    {
        const std::string& name = g.atoms()[a].name;
        std::cout << name << std::string( width - name.size(), ' ' );
        for ( const auto& s : t.states )
            std::cout << std::string( cell - 1, ' ' ) << ( s.contains( a ) ? '+' : '.' );
        std::cout << "\n";
    }
    if ( t.stabilized_at )
        std::cout << "stabilized at " << *t.stabilized_at << "\n";
    else
        std::cout << "not stabilized within horizon " << t.states.size() - 1 << "\n";
}

void print_witnesses( const QueryResult& r )
{
    if ( r.witnesses.empty() )
    {
        std::cout << "no witnesses\n";
        return;
    }
    for ( std::size_t i = 0; i < r.witnesses.size(); ++i )
    {
        std::cout << "witness " << i + 1 << ":";
        if ( r.free_atoms.empty() )
            std::cout << " (no free atoms)";
        for ( std::size_t j = 0; j < r.free_atoms.size(); ++j )
            std::cout << " " << r.free_atoms[j] << "=" << ( r.witnesses[i][j] ? "present" : "absent" );
        std::cout << "\n";
    }
}

int cmd_simulate( const Options& o )
{
    const auto start = Clock::now();
    const Input in = load( o );
    const Mig& g = in.doc.mig;
    require_valid( g );
    const auto overrides = init_overrides( g, o.init );
    std::vector<std::string> missing;
    for ( const auto& f : g.free_atoms() )
        if ( !overrides.contains( f ) )
            missing.push_back( f );
    if ( !missing.empty() )
    {
        std::string names;
        for ( const auto& m : missing )
            names += ( names.empty() ? "" : ", " ) + m;
        throw UsageError( "free atoms need an --init value: " + names );
    }
    const Trace t = simulate( g, complete_init( g, overrides ), o.horizon );
    if ( o.format == "json" )
        std::cout << report( "simulate", in, o, io::trace_to_json( g, t ), ms_since( start ) ).dump( 2 ) << "\n";
    else
        print_trace( g, t );
    return Ok;
}

int cmd_validate( const Options& o )
{
    const auto start = Clock::now();
    const Input in = load( o );
    const ValidationResult r = validate( in.doc.mig, o.horizon );
    if ( o.format == "json" )
        std::cout << report( "validate", in, o, io::validation_to_json( in.doc.mig, r ), ms_since( start ) ).dump( 2 )
                  << "\n";
    else
    {
        std::cout << ( r.sat ? "SAT" : "UNSAT" ) << "\n";
        if ( r.witness )
            print_trace( in.doc.mig, *r.witness );
    }
    return Ok;
}

int cmd_query( const Options& o )
{
    const auto start = Clock::now();
    const Input in = load( o );
    ReasonerOptions ro;
    ro.max_free = o.max_free;
    const QueryResult r = query( in.doc.mig, o.horizon, Query::parse( o.query ), mode_of( o.mode ), ro );
    if ( o.format == "json" )
    {
        json j = report( "query", in, o, io::query_result_to_json( r, false ), ms_since( start ) );
        j["results"]["query"] = o.query;
        j["timings"]["solver_calls"] = r.stats.solver_calls;
        j["timings"]["query_ms"] = r.stats.elapsed_ms;
        std::cout << j.dump( 2 ) << "\n";
    }
    else
    {
        std::cout << "mode: " << to_string( r.mode ) << "\nfree atoms:";
        for ( const auto& f : r.free_atoms )
            std::cout << " " << f;
        std::cout << ( r.free_atoms.empty() ? " none\n" : "\n" );
        print_witnesses( r );
    }
    return Ok;
}

int cmd_update( const Options& o )
{
    const auto start = Clock::now();
    const Input in = load( o );
    UpdateOptions uo;
    uo.reasoner.max_free = o.max_free;
    uo.mode = mode_of( o.mode );
    if ( o.time_budget > 0 )
        uo.time_budget = std::chrono::milliseconds( static_cast<long long>( o.time_budget * 1000 ) );
    const Mig& g = in.doc.mig;
    const UpdateResult r = update( g, o.horizon, Query::parse( o.query ), uo );

    if ( o.format == "json" )
    {
        json j = report( "update", in, o, io::update_result_to_json( g, r, false ), ms_since( start ) );
        j["results"]["query"] = o.query;
        std::cout << j.dump( 2 ) << "\n";
        return Ok;
    }
    if ( r.already_satisfied )
    {
        std::cout << "query already has witnesses; no edit needed\n";
        print_witnesses( r.current );
        return Ok;
    }
    std::cout << r.proposals.size() << " proposal(s) from " << r.checked << " of " << r.candidates
              << " candidate edits\n";
    if ( r.truncated )
        std::cout << "time budget exhausted; list is partial\n";
    for ( std::size_t i = 0; i < r.proposals.size(); ++i )
    {
        const auto& p = r.proposals[i];
        std::cout << "[" << i + 1 << "] " << p.edit.describe() << "\n";
        const json d = io::graph_diff( g, p.resulting_mig );
        for ( const auto& line : d["removed"] )
            std::cout << "    - " << line.get<std::string>() << "\n";
        for ( const auto& line : d["added"] )
            std::cout << "    + " << line.get<std::string>() << "\n";
        std::cout << "    " << p.witnesses.witnesses.size() << " witness(es)\n";
    }
    return Ok;
}

int cmd_export( const Options& o )
{
    const auto start = Clock::now();
    if ( o.dimacs.empty() && o.map.empty() )
        throw UsageError( "export needs --dimacs and/or --map" );
    const Input in = load( o );
    const GroundTheory t = ground( in.doc.mig, o.horizon );
    const sat::ClauseSet cs = to_clauses( t );
    const auto write = []( const std::string& path, const std::string& text ) {
        std::ofstream out( path, std::ios::binary );
        if ( !out )
            throw UsageError( "cannot write '" + path + "'" );
        out << text;
    };
    if ( !o.dimacs.empty() )
        write( o.dimacs, sat::export_dimacs( cs, { "migsat ground theory, horizon " + std::to_string( o.horizon ),
                                                    "variables 1.." + std::to_string( t.vars.size() ) +
                                                        " are ground atoms; see the variable map" } ) );
    if ( !o.map.empty() )
        write( o.map, var_map_text( t.vars ) );

    const json results = { { "variables", cs.num_vars },
                           { "ground_atoms", t.vars.size() },
                           { "clauses", cs.clauses.size() },
                           { "dimacs", o.dimacs },
                           { "map", o.map } };
    if ( o.format == "json" )
        std::cout << report( "export", in, o, results, ms_since( start ) ).dump( 2 ) << "\n";
    else
        std::cout << cs.num_vars << " variables (" << t.vars.size() << " ground atoms), " << cs.clauses.size()
                  << " clauses\n";
    return Ok;
}

int cmd_serve( const Options& o )
{
    server::Service service;
    server::HttpServer http( service );
    std::cerr << "listening on " << o.host << ":" << o.port << "\n";
    if ( !http.listen( o.host, o.port ) )
        throw UsageError( "cannot listen on " + o.host + ":" + std::to_string( o.port ) );
    return Ok;
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Reasoning over molecular interaction graphs" };
    app.require_subcommand( 1 );
    Options o;

    const auto common = [&o]( CLI::App* sub, bool task ) {
        sub->add_option( "file", o.file, "Graph file (native format or GPML)" )->required();
        sub->add_option( "-k,--horizon", o.horizon, "Time horizon" )->capture_default_str();
        sub->add_option( "--format", o.format, "Output format" )
            ->check( CLI::IsMember( { "table", "json" } ) )
            ->capture_default_str();
        if ( task )
            sub->add_option( "--max-free", o.max_free, "Refuse queries with more free atoms" )->capture_default_str();
    };
    const auto querying = [&o]( CLI::App* sub ) {
        sub->add_option( "-q,--query", o.query, "Query, e.g. \"Glucose@3 & !Lactose@3\"" )->required();
        sub->add_option( "--mode", o.mode, "Witness mode" )
            ->check( CLI::IsMember( { "exists", "forall-endo" } ) )
            ->capture_default_str();
    };

    auto* sim = app.add_subcommand( "simulate", "Print the trace of a graph" );
    common( sim, false );
    sim->add_option( "--init", o.init, "Initial value for a free atom, name=present|absent (repeatable)" );

    auto* val = app.add_subcommand( "validate", "Check that the ground theory is satisfiable" );
    common( val, false );

    auto* qry = app.add_subcommand( "query", "Find initial values of the free atoms that make a query hold" );
    common( qry, true );
    querying( qry );

    auto* upd = app.add_subcommand( "update", "Propose single-edit repairs that make a query satisfiable" );
    common( upd, true );
    querying( upd );
    upd->add_option( "--time-budget", o.time_budget, "Stop checking candidates after this many seconds" );

    auto* exp = app.add_subcommand( "export", "Write the ground theory as DIMACS" );
    common( exp, false );
    exp->add_option( "--dimacs", o.dimacs, "DIMACS output path" );
    exp->add_option( "--map", o.map, "Variable map output path" );

    auto* srv = app.add_subcommand( "serve", "Run the HTTP service" );
    srv->add_option( "--host", o.host, "Address to bind" )->capture_default_str();
    srv->add_option( "--port", o.port, "Port to bind" )->capture_default_str();

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        const int code = app.exit( e );
        return code == 0 ? Ok : Usage;
    }

    try
    {
        if ( *sim )
            return cmd_simulate( o );
        if ( *val )
            return cmd_validate( o );
        if ( *qry )
            return cmd_query( o );
        if ( *upd )
            return cmd_update( o );
        if ( *exp )
            return cmd_export( o );
        return cmd_serve( o );
    }
    catch ( const io::ParseError& e )
    {
        std::cerr << "parse error: " << o.file << ": " << e.what() << "\n";
        return Parse;
    }
    catch ( const QueryError& e )
    {
        std::cerr << "query error: " << e.what() << "\n";
        return Parse;
    }
    catch ( const InvalidMig& e )
    {
        std::cerr << "invalid graph: " << e.what() << "\n";
        return Parse;
    }
    catch ( const LimitError& e )
    {
        std::cerr << "limit: " << e.what() << "\n";
        return Limits;
    }
    catch ( const UsageError& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }
    catch ( const std::exception& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }
}

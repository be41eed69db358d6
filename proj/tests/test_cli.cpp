#include "migsat/encoder.hpp"
#include "migsat/io/json.hpp"
#include "migsat/sat/dimacs.hpp"

#include "support/generators.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace migsat;
using migsat::testing::fixture;
namespace fs = std::filesystem;

namespace
{

struct Run
{
    int code = -1;
    std::string out;
};

Run run( const std::string& args )
{
    const std::string cmd = std::string( MIGSAT_CLI ) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen( cmd.c_str(), "r" );
    REQUIRE( p != nullptr );
    char buf[4096];
    std::size_t n = 0;
    while ( ( n = fread( buf, 1, sizeof buf, p ) ) > 0 )
        r.out.append( buf, n );
    const int status = pclose( p );
    r.code = WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
    return r;
}

std::string fx( const std::string& name ) { return std::string( MIGSAT_FIXTURES_DIR ) + "/" + name; }

std::string slurp( const fs::path& p )
{
    std::ifstream in( p );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch( const std::string& name )
{
    const fs::path dir = fs::temp_directory_path() / "migsat_cli_test";
    fs::create_directories( dir );
    return dir / name;
}

std::string row( const std::string& table, const std::string& atom )
{
    std::istringstream in( table );
    for ( std::string line; std::getline( in, line ); )
        if ( line.rfind( atom + " ", 0 ) == 0 )
            return line;
    return {};
}

} // namespace

TEST_SUITE( "cli" )
{
    TEST_CASE( "simulate" )
    {
        const Run r = run( "simulate " + fx( "lac_operon.mig" ) + " --horizon 4" );
        CHECK( r.code == 0 );
        CHECK( row( r.out, "Glucose" ).ends_with( ". . + + +" ) );
        CHECK( row( r.out, "Lactose" ).ends_with( "+ + . . ." ) );
        CHECK( r.out.find( "stabilized at 2" ) != std::string::npos );

        const Run zero = run( "simulate " + fx( "lac_operon.mig" ) + " -k 0" );
        CHECK( zero.code == 0 );
        CHECK( row( zero.out, "Glucose" ).ends_with( " ." ) );
        CHECK( row( zero.out, "lacl" ).ends_with( " +" ) );
        CHECK( row( zero.out, "lacl" ).find( "+ +" ) == std::string::npos );

        CHECK( run( "simulate " + fx( "lac_query.mig" ) ).code == 1 );
        const Run chosen = run( "simulate " + fx( "lac_query.mig" ) + " --init Lactose=present -k 3" );
        CHECK( chosen.code == 0 );
        CHECK( row( chosen.out, "Glucose" ).ends_with( "+" ) );
        CHECK( run( "simulate " + fx( "lac_query.mig" ) + " --init Lactose=maybe" ).code == 1 );
    }

    TEST_CASE( "simulate json is deterministic apart from timings" )
    {
        const auto strip = []( const Run& r ) {
            auto j = io::json::parse( r.out );
            j.erase( "timings" );
            return j;
        };
        const Run a = run( "simulate " + fx( "lac_operon.mig" ) + " --format json" );
        const Run b = run( "simulate " + fx( "lac_operon.mig" ) + " --format json" );
        REQUIRE( a.code == 0 );
        CHECK( strip( a ) == strip( b ) );
        const auto j = io::json::parse( a.out );
        CHECK( j["task"] == "simulate" );
        CHECK( j["horizon"] == 10 );
        CHECK( j["inputs"]["digest"].get<std::string>().size() == 16 );
        CHECK( j["results"]["stabilized_at"] == 2 );
        CHECK( j.contains( "timings" ) );
    }

    TEST_CASE( "validate" )
    {
        const Run r = run( "validate " + fx( "lac_operon.mig" ) );
        CHECK( r.code == 0 );
        CHECK( r.out.rfind( "SAT\n", 0 ) == 0 );
        CHECK( run( "validate " + fx( "remark.mig" ) + " -k 0" ).out.rfind( "SAT\n", 0 ) == 0 );

        const fs::path bad = scratch( "conflict.mig" );
        std::ofstream( bad ) << "atoms endo a\ninit +a, -a\n";
        CHECK( run( "validate " + bad.string() ).code == 2 );
        CHECK( run( "validate /nonexistent.mig" ).code == 1 );
        CHECK( run( "validate " + migsat::testing::data_path( "catalysis.gpml" ) + " -k 2" ).out.rfind( "SAT\n", 0 ) == 0 );
    }

    TEST_CASE( "query" )
    {
        const Run r = run( "query " + fx( "lac_query.mig" ) + " --query Glucose@3 -k 3" );
        CHECK( r.code == 0 );
        CHECK( r.out.find( "witness 1: Lactose=present\n" ) != std::string::npos );
        CHECK( r.out.find( "witness 2" ) == std::string::npos );

        const Run j = run( "query " + fx( "lac_query.mig" ) + " -q Glucose@3 -k 3 --format json" );
        CHECK( io::json::parse( j.out )["results"]["witnesses"] == io::json{ { { "Lactose", "present" } } } );

        CHECK( run( "query " + fx( "lac_query.mig" ) + " -q 'Glucose@3 &' -k 3" ).code == 2 );
        CHECK( run( "query " + fx( "lac_query.mig" ) + " -q Glucose@11" ).code == 2 );
        CHECK( run( "query " + fx( "lac_query.mig" ) + " -q Glucose@3 --mode maybe" ).code == 1 );
        CHECK( run( "query " + fx( "atm_chk2_like.mig" ) + " -q arrest@3 --max-free 5" ).code == 3 );
        CHECK( run( "query " + fx( "lac_query.mig" ) ).code == 1 );
    }

    TEST_CASE( "update" )
    {
        const Run r = run( "update " + fx( "lac_minus_inhibition.mig" ) + " -q Glucose@4 -k 4" );
        CHECK( r.code == 0 );
        CHECK( r.out.find( "] add new1: Lactose -| 6\n    + link new1: Lactose -| 6\n" ) != std::string::npos );
        CHECK( r.out.find( "] add new1: lacZ -> Glucose\n" ) != std::string::npos );

        const Run done = run( "update " + fx( "lac_query.mig" ) + " -q Glucose@3 -k 3" );
        CHECK( done.code == 0 );
        CHECK( done.out.find( "no edit needed" ) != std::string::npos );

        const fs::path lone = scratch( "lone.mig" );
        std::ofstream( lone ) << "atoms endo a\ninit -a\n";
        const Run empty = run( "update " + lone.string() + " -q a@1 -k 1" );
        CHECK( empty.code == 0 );
        CHECK( empty.out.rfind( "0 proposal(s)", 0 ) == 0 );

        const Run j = run( "update " + fx( "lac_minus_inhibition.mig" ) + " -q Glucose@4 -k 4 --format json" );
        const auto parsed = io::json::parse( j.out );
        CHECK( parsed["results"]["truncated"] == false );
        CHECK( parsed["results"]["proposals"].size() > 2 );
    }

    TEST_CASE( "export" )
    {
        const fs::path cnf = scratch( "lac.cnf" );
        const fs::path map = scratch( "lac.map" );
        const Run r = run( "export " + fx( "lac_operon.mig" ) + " -k 10 --dimacs " + cnf.string() + " --map " +
                           map.string() );
        REQUIRE( r.code == 0 );

        const Mig g = fixture( "lac_operon.mig" ).mig;
        const GroundTheory t = ground( g, 10 );
        const sat::ClauseSet expected = to_clauses( t );
        const sat::ClauseSet got = sat::import_dimacs( slurp( cnf ) );
        CHECK( got == expected );
        CHECK( slurp( map ) == var_map_text( t.vars ) );
        CHECK( slurp( map ).find( "var 1 lacl\n" ) == 0 );

        const auto result = sat::solve( got );
        REQUIRE( result.sat() );
        CHECK( decode_model( t, result.model ) == simulate( g, complete_init( g, {} ), 10 ) );

        const Run zero = run( "export " + fx( "lac_operon.mig" ) + " -k 0 --dimacs " + cnf.string() );
        REQUIRE( zero.code == 0 );
        const sat::ClauseSet units = sat::import_dimacs( slurp( cnf ) );
        CHECK( units.clauses.size() == 7 );
        for ( const auto& c : units.clauses )
            CHECK( c.size() == 1 );

        CHECK( run( "export " + fx( "lac_operon.mig" ) ).code == 1 );
    }

    TEST_CASE( "usage" )
    {
        CHECK( run( "" ).code == 1 );
        CHECK( run( "frobnicate" ).code == 1 );
        CHECK( run( "--help" ).code == 0 );
        CHECK( run( "simulate " + fx( "lac_operon.mig" ) + " --horizon minus" ).code == 1 );
    }
}

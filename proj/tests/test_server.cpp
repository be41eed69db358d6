#include "migsat/server.hpp"

#include "support/generators.hpp"

#include <doctest.h>
#include <httplib.h>

#include <fstream>
#include <sstream>

using namespace migsat;
using namespace migsat::server;
using io::json;

namespace
{

std::string fixture_text( const std::string& name )
{
    std::ifstream in( std::string( MIGSAT_FIXTURES_DIR ) + "/" + name );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Response call( Service& s, const std::string& method, const std::string& path, const json& body = json::object() )
{
    return s.handle( { method, path, "application/json", body.dump() } );
}

std::string upload( Service& s, const std::string& fixture )
{
    const Response r = s.handle( { "POST", "/graphs", "text/plain", fixture_text( fixture ) } );
    REQUIRE( r.status == 201 );
    return r.body["id"];
}

} // namespace

TEST_SUITE( "api" )
{
    TEST_CASE( "upload and read back" )
    {
        Service s;
        const Response r = s.handle( { "POST", "/graphs", "text/plain", fixture_text( "lac_operon.mig" ) } );
        REQUIRE( r.status == 201 );
        CHECK( r.body["graph"]["atoms"].size() == 7 );
        CHECK( r.body["version"] == 1 );
        CHECK( r.body["source"] == "native" );
        const std::string id = r.body["id"];

        const Response g = call( s, "GET", "/graphs/" + id );
        CHECK( g.status == 200 );
        CHECK( g.body == r.body );

        const Response again = s.handle( { "POST", "/graphs", "application/json", g.body["graph"].dump() } );
        REQUIRE( again.status == 201 );
        CHECK( again.body["id"] != id );
        CHECK( again.body["graph"] == g.body["graph"] );
        CHECK( again.body["source"] == "api" );
    }

    TEST_CASE( "gpml upload" )
    {
        Service s;
        std::ifstream in( migsat::testing::data_path( "anchor_regulation.gpml" ) );
        std::stringstream ss;
        ss << in.rdbuf();
        const Response r = s.handle( { "POST", "/graphs", "application/xml", ss.str() } );
        REQUIRE( r.status == 201 );
        CHECK( r.body["source"] == "gpml" );
        CHECK( r.body["warnings"].size() == 2 );
    }

    TEST_CASE( "bad uploads" )
    {
        Service s;
        const Response r = s.handle( { "POST", "/graphs", "text/plain", "atoms endo a\nlink 1: a -> b\n" } );
        CHECK( r.status == 400 );
        CHECK( r.body["line"] == 2 );
        CHECK( s.handle( { "POST", "/graphs", "application/json", "{" } ).status == 400 );
        CHECK( call( s, "GET", "/graphs/nope" ).status == 404 );
        CHECK( call( s, "GET", "/elsewhere" ).status == 404 );
        CHECK( call( s, "GET", "/graphs" ).status == 405 );
    }

    TEST_CASE( "abduction after freeing lactose" )
    {
        Service s;
        const std::string id = upload( s, "lac_operon.mig" );
        const Response p = call( s, "PATCH", "/graphs/" + id + "/atoms/Lactose", { { "init", "free" } } );
        REQUIRE( p.status == 200 );
        CHECK( p.body["version"] == 2 );
        CHECK( p.body["graph"]["atoms"][4]["init"] == "free" );

        // Repressor present, as in the abduction fixture.
        REQUIRE( call( s, "PATCH", "/graphs/" + id + "/atoms/Repressor", { { "init", "present" } } ).status == 200 );

        const Response q = call( s, "POST", "/graphs/" + id + "/query", { { "query", "Glucose@3" }, { "horizon", 3 } } );
        REQUIRE( q.status == 200 );
        CHECK( q.body["witnesses"] == json{ { { "Lactose", "present" } } } );
        CHECK( q.body["version"] == 3 );

        const Response again = call( s, "POST", "/graphs/" + id + "/query", { { "query", "Glucose@3" }, { "horizon", 3 } } );
        CHECK( again.body == q.body );
    }

    TEST_CASE( "stale versions are rejected" )
    {
        Service s;
        const std::string id = upload( s, "lac_query.mig" );
        REQUIRE( call( s, "PATCH", "/graphs/" + id + "/atoms/CAMP", { { "kind", "endo" }, { "version", 1 } } ).status ==
                 200 );
        const Response stale = call( s, "POST", "/graphs/" + id + "/query", { { "query", "Glucose@3" }, { "version", 1 } } );
        CHECK( stale.status == 409 );
        CHECK( stale.body["version"] == 2 );
        CHECK( call( s, "POST", "/graphs/" + id + "/query", { { "query", "Glucose@3" }, { "version", 2 } } ).status ==
               200 );
    }

    TEST_CASE( "task errors" )
    {
        Service s;
        const std::string id = upload( s, "lac_query.mig" );
        const std::string base = "/graphs/" + id;
        const Response bad = call( s, "POST", base + "/query", { { "query", "Glucose@" } } );
        CHECK( bad.status == 400 );
        CHECK( bad.body.contains( "position" ) );
        CHECK( call( s, "POST", base + "/query", { { "query", "Glucose@11" } } ).status == 400 );
        CHECK( call( s, "POST", base + "/query", { { "query", "Glucose@1" }, { "mode", "sometimes" } } ).status == 400 );
        CHECK( call( s, "POST", base + "/query", { { "horizon", -1 } } ).status == 400 );
        CHECK( call( s, "POST", base + "/simulate" ).status == 400 );
        CHECK( call( s, "PATCH", base + "/atoms/Fructose", { { "init", "free" } } ).status == 404 );
        CHECK( call( s, "PATCH", base + "/atoms/Lactose", json::object() ).status == 400 );
        CHECK( call( s, "PATCH", base + "/atoms/Lactose", { { "init", "maybe" } } ).status == 400 );
        CHECK( call( s, "POST", base + "/apply", { { "proposal", 0 } } ).status == 409 );
        CHECK( call( s, "POST", base + "/explode" ).status == 404 );
        CHECK( s.handle( { "POST", base + "/query", "application/json", "[1]" } ).status == 400 );
    }

    TEST_CASE( "simulate" )
    {
        Service s;
        const std::string id = upload( s, "lac_query.mig" );
        const Response r =
            call( s, "POST", "/graphs/" + id + "/simulate", { { "init", { { "Lactose", "present" } } }, { "horizon", 3 } } );
        REQUIRE( r.status == 200 );
        CHECK( r.body["states"].size() == 4 );
        CHECK( r.body["states"][3] == json{ "lacl", "lacZ", "CAMP", "Repressor", "Galactosidase", "Glucose" } );
    }

    TEST_CASE( "repair, apply and query again" )
    {
        Service s;
        const std::string id = upload( s, "lac_minus_inhibition.mig" );
        const std::string base = "/graphs/" + id;
        const json task = { { "query", "Glucose@4" }, { "horizon", 4 } };
        CHECK( call( s, "POST", base + "/query", task ).body["witnesses"].empty() );

        const Response u = call( s, "POST", base + "/update", task );
        REQUIRE( u.status == 200 );
        CHECK( u.body["truncated"] == false );
        std::size_t index = u.body["proposals"].size();
        for ( std::size_t i = 0; i < u.body["proposals"].size(); ++i )
            if ( u.body["proposals"][i]["edit"]["description"] == "add new1: Lactose -| 6" )
                index = i;
        REQUIRE( index < u.body["proposals"].size() );

        const Response a = call( s, "POST", base + "/apply", { { "proposal", index } } );
        REQUIRE( a.status == 200 );
        CHECK( a.body["version"] == 2 );
        CHECK( a.body["applied"] == "add new1: Lactose -| 6" );
        CHECK( a.body["graph"]["links"].size() == 8 );

        const Response q = call( s, "POST", base + "/query", task );
        CHECK_FALSE( q.body["witnesses"].empty() );
        const Response none = call( s, "POST", base + "/update", task );
        CHECK( none.body["already_satisfied"] == true );
        CHECK( none.body["proposals"].empty() );

        CHECK( call( s, "POST", base + "/apply", { { "proposal", 0 } } ).status == 400 );
    }

    TEST_CASE( "update time budget" )
    {
        Service s;
        const std::string id = upload( s, "lac_minus_inhibition.mig" );
        const Response u = call( s, "POST", "/graphs/" + id + "/update",
                                 { { "query", "Glucose@4" }, { "horizon", 4 }, { "time_budget_ms", 0 } } );
        REQUIRE( u.status == 200 );
        CHECK( u.body["truncated"] == true );
    }

    TEST_CASE( "over http" )
    {
        Service service;
        HttpServer http( service );
        REQUIRE( http.start( "127.0.0.1", 0 ) );
        httplib::Client client( "127.0.0.1", http.port() );

        auto up = client.Post( "/graphs", fixture_text( "lac_query.mig" ), "text/plain" );
        REQUIRE( up );
        CHECK( up->status == 201 );
        const std::string id = json::parse( up->body )["id"];

        auto q = client.Post( "/graphs/" + id + "/query", R"({"query": "Glucose@3", "horizon": 3})", "application/json" );
        REQUIRE( q );
        CHECK( q->status == 200 );
        CHECK( json::parse( q->body )["witnesses"] == json{ { { "Lactose", "present" } } } );

        auto p = client.Patch( "/graphs/" + id + "/atoms/Lactose", R"({"init": "absent"})", "application/json" );
        REQUIRE( p );
        CHECK( json::parse( p->body )["version"] == 2 );

        auto missing = client.Get( "/graphs/g999" );
        REQUIRE( missing );
        CHECK( missing->status == 404 );
        http.stop();
    }
}

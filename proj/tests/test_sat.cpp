#include "migsat/sat/dimacs.hpp"
#include "migsat/sat/solver.hpp"

#include "support/generators.hpp"

#include <doctest.h>

using namespace migsat;
using namespace migsat::sat;

TEST_SUITE( "sat" )
{
    TEST_CASE( "trivial clause sets" )
    {
        CHECK_FALSE( solve( ClauseSet{ 1, { { 1 }, { -1 } } } ).sat() );
        CHECK( solve( ClauseSet{} ).sat() );
        CHECK( solve( ClauseSet{ 3, {} } ).model.size() == 4 );
        CHECK_FALSE( solve( ClauseSet{ 1, { {} } } ).sat() );
        CHECK_THROWS_AS( check_clause_set( ClauseSet{ 1, { { 2 } } } ), std::invalid_argument );
        CHECK_THROWS_AS( check_clause_set( ClauseSet{ 1, { { 0 } } } ), std::invalid_argument );
    }

    TEST_CASE( "pigeonhole 4 into 3 is unsatisfiable" )
    {
        ClauseSet cs;
        cs.num_vars = 12;
        const auto v = []( int p, int h ) { return p * 3 + h + 1; };
        for ( int p = 0; p < 4; ++p )
            cs.clauses.push_back( { v( p, 0 ), v( p, 1 ), v( p, 2 ) } );
        for ( int h = 0; h < 3; ++h )
            for ( int p = 0; p < 4; ++p )
                for ( int q = p + 1; q < 4; ++q )
                    cs.clauses.push_back( { -v( p, h ), -v( q, h ) } );
        CHECK_FALSE( solve( cs ).sat() );
    }

    TEST_CASE( "assumptions are scoped to one call" )
    {
        Solver s( ClauseSet{ 2, { { 1, 2 } } } );
        const int a[] = { -1, -2 };
        CHECK( s.solve( a ) == Status::Unsat );
        CHECK( s.solve() == Status::Sat );
        const int b[] = { -1 };
        REQUIRE( s.solve( b ) == Status::Sat );
        CHECK( s.model_value( 2 ) );
        CHECK_FALSE( s.model_value( 1 ) );
        CHECK( s.stats().solves == 3 );
    }

    TEST_CASE( "incremental clauses" )
    {
        Solver s;
        s.ensure_vars( 2 );
        CHECK( s.add_clause( { 1, 2 } ) );
        CHECK( s.solve() == Status::Sat );
        s.add_clause( { -1 } );
        s.add_clause( { -2 } );
        CHECK( s.solve() == Status::Unsat );
    }

    TEST_CASE( "enumeration order and limit" )
    {
        const ClauseSet cs{ 2, { { 1, 2 } } };
        const int proj[] = { 1, 2 };
        const auto e = enumerate_models( cs, proj, 10 );
        CHECK( e.models == std::vector<std::vector<bool>>{ { true, true }, { true, false }, { false, true } } );
        CHECK_FALSE( e.limit_reached );

        const auto cut = enumerate_models( cs, proj, 2 );
        CHECK( cut.models.size() == 2 );
        CHECK( cut.limit_reached );

        const auto exact = enumerate_models( cs, proj, 3 );
        CHECK( exact.models.size() == 3 );
        CHECK_FALSE( exact.limit_reached );

        const int one[] = { 1 };
        CHECK( enumerate_models( cs, one, 10 ).models.size() == 2 );
        CHECK( enumerate_models( ClauseSet{ 1, { { 1 }, { -1 } } }, one, 10 ).models.empty() );
    }

    TEST_CASE( "dimacs" )
    {
        const ClauseSet cs = import_dimacs( "p cnf 2 1\n1 -2 0\n" );
        CHECK( cs.num_vars == 2 );
        CHECK( cs.clauses == std::vector<std::vector<int>>{ { 1, -2 } } );
        CHECK( export_dimacs( cs ) == "p cnf 2 1\n1 -2 0\n" );
        CHECK( export_dimacs( cs, { "hello" } ) == "c hello\np cnf 2 1\n1 -2 0\n" );

        const ClauseSet multi = import_dimacs( "c comment\np cnf 3 2\n1 2\n 3 0 -1\n0\n%\n0\n" );
        CHECK( multi.clauses == std::vector<std::vector<int>>{ { 1, 2, 3 }, { -1 } } );

        CHECK_THROWS_AS( (void)import_dimacs( "1 2 0\n" ), DimacsError );
        CHECK_THROWS_AS( (void)import_dimacs( "p cnf 2 2\n1 0\n" ), DimacsError );
        CHECK_THROWS_AS( (void)import_dimacs( "p cnf 1 1\n2 0\n" ), DimacsError );
        CHECK_THROWS_AS( (void)import_dimacs( "p cnf 1 1\n1 x 0\n" ), DimacsError );
        try
        {
            (void)import_dimacs( "p cnf 1 1\n\n1 x 0\n" );
        }
        catch ( const DimacsError& e )
        {
            CHECK( e.line() == 3 );
        }
    }
}

TEST_SUITE( "sat properties" )
{
    TEST_CASE( "agrees with the truth table on random 3-CNF" )
    {
        std::mt19937 rng( 99 );
        int sat_count = 0;
        for ( int i = 0; i < 500; ++i )
        {
            const ClauseSet cs = migsat::testing::random_3cnf( rng, 16 );
            const auto r = solve( cs );
            CHECK( r.sat() == migsat::testing::brute_force_sat( cs ) );
            if ( r.sat() )
            {
                ++sat_count;
                CHECK( migsat::testing::satisfies( cs, r.model ) );
            }
        }
        CHECK( sat_count > 50 );
        CHECK( sat_count < 450 );
    }

    TEST_CASE( "enumeration counts match the truth table" )
    {
        std::mt19937 rng( 4 );
        for ( int i = 0; i < 100; ++i )
        {
            ClauseSet cs = migsat::testing::random_3cnf( rng, 8 );
            cs.clauses.resize( cs.clauses.size() / 3 );
            std::vector<int> proj;
            for ( int v = 1; v <= cs.num_vars; ++v )
                proj.push_back( v );
            std::size_t expected = 0;
            for ( const auto& a : migsat::testing::all_assignments( static_cast<std::size_t>( cs.num_vars ) ) )
            {
                std::vector<bool> m( 1, false );
                m.insert( m.end(), a.begin(), a.end() );
                expected += migsat::testing::satisfies( cs, m );
            }
            const auto e = enumerate_models( cs, proj, 1U << 10 );
            CHECK( e.models.size() == expected );
            CHECK( std::is_sorted( e.models.begin(), e.models.end(), std::greater<>() ) );
        }
    }

    TEST_CASE( "deterministic" )
    {
        std::mt19937 rng( 17 );
        for ( int i = 0; i < 50; ++i )
        {
            const ClauseSet cs = migsat::testing::random_3cnf( rng, 40 );
            const auto a = solve( cs );
            const auto b = solve( cs );
            CHECK( a.status == b.status );
            CHECK( a.model == b.model );
        }
    }

    TEST_CASE( "dimacs round trip" )
    {
        std::mt19937 rng( 8 );
        for ( int i = 0; i < 50; ++i )
        {
            const ClauseSet cs = migsat::testing::random_3cnf( rng, 30 );
            CHECK( import_dimacs( export_dimacs( cs, { "x" } ) ) == cs );
        }
    }
}

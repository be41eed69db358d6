#include "migsat/encoder.hpp"
#include "migsat/formula.hpp"
#include "migsat/sat/solver.hpp"

#include "support/generators.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace migsat;
using migsat::testing::fixture;

namespace
{

Mig lac() { return fixture( "lac_operon.mig" ).mig; }

Formula v( const Mig& g, const char* name ) { return Formula::var( static_cast<int>( g.atom_index( name ) ) ); }

Formula neg( Formula f ) { return Formula::negation( std::move( f ) ); }

std::string show( const Mig& g, const Formula& f )
{
    return to_string( f, [&g]( int i ) { return g.atoms().at( static_cast<std::size_t>( i ) ).name; } );
}

bool eval_state( const Formula& f, const std::vector<bool>& d )
{
    return eval( f, [&d]( int i ) { return static_cast<bool>( d.at( static_cast<std::size_t>( i ) ) ); } );
}

State to_state( const std::vector<bool>& d )
{
    State s( d.size() );
    for ( std::size_t i = 0; i < d.size(); ++i )
        s.set( i, d[i] );
    return s;
}

} // namespace

TEST_SUITE( "formula" )
{
    TEST_CASE( "operator counting" )
    {
        const Formula p = Formula::var( 0 );
        const Formula q = Formula::var( 1 );
        const Formula r = Formula::var( 2 );
        CHECK( formula_size( p ) == 0 );
        CHECK( formula_size( neg( p ) ) == 1 );
        CHECK( formula_size( Formula::disjunction( { p, Formula::conjunction( { q, r } ) } ) ) == 2 );
        CHECK( formula_size( Formula::conjunction( { p, q, r } ) ) == 2 );
        CHECK( formula_size( Formula::always( Formula::iff( Formula::next( p ), q ) ) ) == 3 );
        const std::vector<Formula> set{ neg( p ), Formula::conjunction( { p, q } ) };
        CHECK( theory_size( set ) == 2 );
    }

    TEST_CASE( "simplify folds constants" )
    {
        const Formula p = Formula::var( 0 );
        CHECK( simplify( Formula::disjunction( { Formula::falsum(), p } ) ).op() == Op::Var );
        CHECK( simplify( Formula::conjunction( { p, neg( Formula::falsum() ) } ) ).op() == Op::Var );
        CHECK( simplify( Formula::conjunction( { p, Formula::falsum() } ) ).op() == Op::False );
        CHECK( simplify( neg( neg( p ) ) ).op() == Op::Var );
        CHECK( simplify( Formula::iff( p, Formula::falsum() ) ).op() == Op::Not );
    }

    TEST_CASE( "negation normal form" )
    {
        const Formula p = Formula::var( 0 );
        const Formula q = Formula::var( 1 );
        const Formula f = Formula::conjunction( { p, neg( Formula::disjunction( { q, Formula::iff( p, q ) } ) ) } );
        const Formula n = negate_nnf( f );
        CHECK( is_nnf( n ) );
        CHECK( equivalent( n, neg( f ) ) );
        CHECK_FALSE( is_nnf( f ) );
    }

    TEST_CASE( "temporal operators are not classically evaluable" )
    {
        CHECK_THROWS_AS( (void)eval( Formula::next( Formula::var( 0 ) ), std::vector<bool>{ true } ), std::logic_error );
    }
}

TEST_SUITE( "encoder" )
{
    TEST_CASE( "activation formulas of the lac operon" )
    {
        const Mig g = lac();
        CHECK( show( g, activation_formula( g, "1" ) ) == "lacl" );

        const Formula expected = Formula::conjunction(
            { v( g, "lacZ" ), v( g, "CAMP" ), neg( v( g, "Glucose" ) ),
              Formula::disjunction( { neg( v( g, "Repressor" ) ), v( g, "Lactose" ) } ) } );
        CHECK( equivalent( activation_formula( g, "2" ), expected ) );

        const Mig two( { { "a", AtomKind::Exogenous }, { "b", AtomKind::Exogenous }, { "c", AtomKind::Endogenous } }, {},
                       { { "p", LinkKind::ProduceKeep, { "a", "b" }, { "c" }, {} } } );
        CHECK( show( two, activation_formula( two, "p" ) ) == "a ∧ b" );
        CHECK_THROWS_AS( (void)activation_formula( g, "nope" ), std::out_of_range );
    }

    TEST_CASE( "production and consumption formulas of the lac operon" )
    {
        const Mig g = lac();
        CHECK( prod_formula( g, "Lactose" ).op() == Op::False );
        CHECK( cons_formula( g, "Repressor" ).op() == Op::False );
        const Formula lg = Formula::conjunction( { v( g, "Lactose" ), v( g, "Galactosidase" ) } );
        CHECK( equivalent( prod_formula( g, "Glucose" ), lg ) );
        CHECK( equivalent( cons_formula( g, "Lactose" ), lg ) );
        CHECK( prod_formula( g, "lacl" ).op() == Op::False );
        CHECK( cons_formula( g, "lacl" ).op() == Op::False );
    }

    TEST_CASE( "encoding of the lac operon" )
    {
        const Mig g = lac();
        const LtlEncoding enc = encode( g );
        CHECK( enc.initial.size() == 7 );
        REQUIRE( enc.axioms.size() == 7 );
        for ( const auto& f : enc.formulas() )
        {
            const bool literal = f.op() == Op::Var || f.op() == Op::Not;
            const bool axiom = f.op() == Op::Always && f.children()[0].op() == Op::Iff &&
                               f.children()[0].children()[0].op() == Op::Next &&
                               f.children()[0].children()[1].is_classical();
            CHECK( ( literal || axiom ) );
        }

        const auto& rep = enc.axioms[g.atom_index( "Repressor" )];
        CHECK( show( g, simplify( rep.formula() ) ) == "□(◯Repressor ↔ (lacl ∨ Repressor))" );

        for ( const char* exo : { "lacl", "lacZ", "CAMP" } )
            CHECK( equivalent( enc.axioms[g.atom_index( exo )].body, v( g, exo ) ) );
    }

    TEST_CASE( "empty initial conditions give axioms only" )
    {
        const Mig g = lac().with_init( {} );
        const LtlEncoding enc = encode( g );
        CHECK( enc.initial.empty() );
        CHECK( enc.formulas().size() == g.atom_count() );
    }

    TEST_CASE( "grounding" )
    {
        const Mig g = lac();
        const GroundTheory t0 = ground( g, 0 );
        CHECK( t0.formulas.size() == 7 );
        for ( const auto& f : t0.formulas )
            CHECK( ( f.op() == Op::Var || f.op() == Op::Not ) );
        CHECK( t0.vars.size() == 3 + 4 );

        const GroundTheory t = ground( g, 20 );
        CHECK( t.vars.size() == 3 + 4 * 21 );
        CHECK( t.formulas.size() == 7 + 4 * 20 );
        const int lacl = t.vars.var( g.atom_index( "lacl" ), 0 );
        CHECK( lacl == t.vars.var( g.atom_index( "lacl" ), 7 ) );
        CHECK( t.vars.name( lacl ) == "lacl" );
        CHECK( t.vars.name( t.vars.var( g.atom_index( "Glucose" ), 3 ) ) == "Glucose@3" );
        CHECK_THROWS_AS( (void)t.vars.var( g.atom_index( "Glucose" ), 21 ), std::out_of_range );

        const std::vector<Formula> enc = encode( g ).formulas();
        for ( std::size_t n : { 1, 5, 20 } )
            CHECK( theory_size( ground( g, n ).formulas ) <= n * theory_size( enc ) );
    }

    TEST_CASE( "ground glucose axiom with exogenous lactose" )
    {
        const Mig g = lac().with_atom_kind( "Lactose", AtomKind::Exogenous );
        const GroundTheory t = ground( g, 3 );
        const std::size_t glc = g.atom_index( "Glucose" );
        const int next = t.vars.var( glc, 2 );
        const Formula* axiom = nullptr;
        for ( const auto& f : t.formulas )
            if ( f.op() == Op::Iff && f.children()[0].op() == Op::Var && f.children()[0].variable() == next )
                axiom = &f;
        REQUIRE( axiom != nullptr );
        const auto gv = [&]( const char* n, std::size_t i ) { return Formula::var( t.vars.var( g.atom_index( n ), i ) ); };
        const Formula expected = Formula::disjunction(
            { Formula::conjunction( { gv( "Lactose", 0 ), gv( "Galactosidase", 1 ) } ), gv( "Glucose", 1 ) } );
        CHECK( equivalent( axiom->children()[1], expected ) );
        CHECK( t.vars.name( t.vars.var( g.atom_index( "Lactose" ), 1 ) ) == "Lactose" );
    }

    TEST_CASE( "clause conversion" )
    {
        Clausifier single( 1 );
        single.add( Formula::var( 1 ) );
        CHECK( single.clauses().clauses == std::vector<std::vector<int>>{ { 1 } } );
        CHECK( single.clauses().num_vars == 1 );

        Clausifier iff( 3 );
        iff.add( Formula::iff( Formula::var( 1 ), Formula::disjunction( { Formula::var( 2 ), Formula::var( 3 ) } ) ) );
        CHECK( iff.clauses().num_vars == 3 );
        const std::set<std::vector<int>> got( iff.clauses().clauses.begin(), iff.clauses().clauses.end() );
        CHECK( got == std::set<std::vector<int>>{ { -1, 2, 3 }, { -2, 1 }, { -3, 1 } } );
    }

    TEST_CASE( "definitions agree with their formula on every assignment" )
    {
        std::mt19937 rng( 3 );
        for ( int round = 0; round < 50; ++round )
        {
            const Mig g = migsat::testing::random_mig( rng );
            Encoder e( g );
            for ( std::size_t x = 0; x < g.link_count(); ++x )
            {
                // Variables are atom indices shifted by one.
                const Formula f = rename( e.activation( x ), []( int a ) { return a + 1; } );
                Clausifier c( static_cast<int>( g.atom_count() ) );
                const int l = c.define( f );
                const sat::ClauseSet cs = c.take();
                for ( const auto& d : migsat::testing::all_assignments( g.atom_count() ) )
                {
                    std::vector<int> assume;
                    for ( std::size_t i = 0; i < d.size(); ++i )
                        assume.push_back( d[i] ? static_cast<int>( i + 1 ) : -static_cast<int>( i + 1 ) );
                    const bool truth = eval_state( e.activation( x ), d );
                    assume.push_back( truth ? l : -l );
                    CHECK( sat::solve( cs, assume ).sat() );
                    assume.back() = -assume.back();
                    CHECK_FALSE( sat::solve( cs, assume ).sat() );
                }
            }
        }
    }

    TEST_CASE( "decoding the unique model gives the simulated trace" )
    {
        const Mig g = lac();
        for ( std::size_t k : { 0, 1, 10 } )
        {
            const GroundTheory t = ground( g, k );
            const auto r = sat::solve( to_clauses( t ) );
            REQUIRE( r.sat() );
            CHECK( decode_model( t, r.model ) == simulate( g, complete_init( g, {} ), k ) );
        }
        CHECK_THROWS_AS( (void)decode_model( ground( g, 2 ), std::vector<bool>( 3 ) ), std::invalid_argument );
    }

    TEST_CASE( "ground formulas evaluate like their decoded states" )
    {
        const Mig g = fixture( "lac_query.mig" ).mig;
        const GroundTheory t = ground( g, 6 );
        const sat::ClauseSet cs = to_clauses( t );
        Encoder e( g );
        for ( bool lactose : { false, true } )
        {
            const int lv = t.vars.var( g.atom_index( "Lactose" ), 0 );
            const int assume[] = { lactose ? lv : -lv };
            const auto r = sat::solve( cs, assume );
            REQUIRE( r.sat() );
            const Trace tr = decode_model( t, r.model );
            for ( std::size_t i = 0; i <= 6; ++i )
            {
                std::vector<bool> d( g.atom_count() );
                for ( std::size_t a = 0; a < g.atom_count(); ++a )
                    d[a] = tr.states[i].contains( a );
                for ( std::size_t x = 0; x < g.link_count(); ++x )
                    CHECK( eval( ground_at( t.vars, e.activation( x ), i ), r.model ) == eval_state( e.activation( x ), d ) );
                for ( std::size_t a = 0; a < g.atom_count(); ++a )
                    CHECK( eval( ground_at( t.vars, e.production( a ), i ), r.model ) == eval_state( e.production( a ), d ) );
            }
        }
    }

    TEST_CASE( "variable map text" )
    {
        const Mig g = fixture( "remark.mig" ).mig;
        const GroundTheory t = ground( g, 1 );
        CHECK( var_map_text( t.vars ) == "var 1 p@0\nvar 2 p@1\nvar 3 q@0\nvar 4 q@1\nvar 5 r@0\nvar 6 r@1\n" );
    }
}

TEST_SUITE( "encoder properties" )
{
    TEST_CASE( "activation and inhibition match the semantics on every state" )
    {
        std::mt19937 rng( 11 );
        for ( int round = 0; round < 200; ++round )
        {
            const Mig g = migsat::testing::random_mig( rng );
            Encoder e( g );
            const auto states = migsat::testing::all_assignments( g.atom_count() );
            for ( std::size_t x = 0; x < g.link_count(); ++x )
            {
                const Formula a = e.activation( x );
                const Formula i = e.inhibition( x );
                CHECK( is_nnf( i ) );
                CHECK( equivalent( i, neg( a ) ) );
                for ( const auto& d : states )
                    CHECK( eval_state( a, d ) == is_active( g, g.links()[x].id, to_state( d ) ) );
            }
            for ( std::size_t p = 0; p < g.atom_count(); ++p )
                for ( const auto& d : states )
                {
                    CHECK( eval_state( e.production( p ), d ) == produced( g, g.atoms()[p].name, to_state( d ) ) );
                    CHECK( eval_state( e.consumption( p ), d ) == consumed( g, g.atoms()[p].name, to_state( d ) ) );
                }
        }
    }

    TEST_CASE( "grounding size bound on random graphs" )
    {
        std::mt19937 rng( 5 );
        for ( int round = 0; round < 100; ++round )
        {
            const Mig g = migsat::testing::random_mig( rng );
            const std::size_t s = theory_size( encode( g ).formulas() );
            for ( std::size_t n : { 1, 5, 20 } )
                CHECK( theory_size( ground( g, n ).formulas ) <= n * s );
        }
    }

    TEST_CASE( "one model per completion of the free atoms, each decoding to its trace" )
    {
        std::mt19937 rng( 23 );
        migsat::testing::MigShape shape;
        shape.free_ratio = 0.5;
        shape.max_free = 3;
        for ( int round = 0; round < 100; ++round )
        {
            const Mig g = migsat::testing::random_mig( rng, shape );
            const std::size_t k = migsat::testing::pick( rng, 0, 6 );
            const GroundTheory t = ground( g, k );
            const sat::ClauseSet cs = to_clauses( t );
            std::vector<int> every;
            for ( int x = 1; x <= t.vars.size(); ++x )
                every.push_back( x );
            const auto free = g.free_atoms();
            const auto e = sat::enumerate_models( cs, every, 1000 );
            CHECK_FALSE( e.limit_reached );
            REQUIRE( e.models.size() == ( std::size_t{ 1 } << free.size() ) );

            std::set<std::vector<bool>> seen;
            for ( const auto& m : e.models )
            {
                std::vector<bool> model( 1, false );
                model.insert( model.end(), m.begin(), m.end() );
                const Trace tr = decode_model( t, model );
                std::map<std::string, bool> chosen;
                for ( const auto& f : free )
                    chosen[f] = tr.states[0].contains( g.atom_index( f ) );
                CHECK( tr == simulate( g, complete_init( g, chosen ), k ) );
                std::vector<bool> key;
                for ( const auto& f : free )
                    key.push_back( chosen[f] );
                seen.insert( key );
            }
            CHECK( seen.size() == e.models.size() );
        }
    }
}


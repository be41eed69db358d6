#pragma once

#include "migsat/io/document.hpp"
#include "migsat/mig.hpp"
#include "migsat/sat/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace migsat::testing
{

inline io::MigDocument fixture( const std::string& name )
{
    return io::load_document( std::string( MIGSAT_FIXTURES_DIR ) + "/" + name );
}

inline std::string data_path( const std::string& name ) { return std::string( MIGSAT_TEST_DATA_DIR ) + "/" + name; }

struct MigShape
{
    std::size_t max_atoms = 6;
    std::size_t max_links = 8;
    int max_depth = 2;
    double exo_ratio = 0.3;
    // Initial values: each atom is left free with this probability, up to max_free atoms.
    double free_ratio = 0.0;
    std::size_t max_free = 0;
};

inline std::size_t pick( std::mt19937& rng, std::size_t lo, std::size_t hi )
{
    return std::uniform_int_distribution<std::size_t>( lo, hi )( rng );
}

inline bool coin( std::mt19937& rng, double p ) { return std::bernoulli_distribution( p )( rng ); }

inline std::vector<std::string> sample( std::mt19937& rng, const std::vector<std::string>& pool, std::size_t k )
{
    std::vector<std::string> copy = pool;
    std::shuffle( copy.begin(), copy.end(), rng );
    copy.resize( std::min( k, copy.size() ) );
    return copy;
}

// Random well-formed MIG. Regulations only target links created before them, so the
// targeting relation is acyclic by construction; depth is capped by shape.max_depth.
inline Mig random_mig( std::mt19937& rng, const MigShape& shape = {} )
{
    const std::size_t n = pick( rng, 1, shape.max_atoms );
    std::vector<Atom> atoms;
    std::vector<std::string> names;
    for ( std::size_t i = 0; i < n; ++i )
    {
        names.push_back( "a" + std::to_string( i ) );
        atoms.push_back( { names.back(), coin( rng, shape.exo_ratio ) ? AtomKind::Exogenous : AtomKind::Endogenous } );
    }

    std::vector<Link> links;
    std::vector<int> depth;
    const std::size_t m = pick( rng, 0, shape.max_links );
    for ( std::size_t i = 0; i < m; ++i )
    {
        Link l;
        l.id = "x" + std::to_string( i );
        std::vector<std::size_t> targets;
        for ( std::size_t j = 0; j < links.size(); ++j )
            if ( depth[j] < shape.max_depth )
                targets.push_back( j );
        if ( targets.empty() || coin( rng, 0.5 ) )
        {
            l.kind = coin( rng, 0.5 ) ? LinkKind::ProduceKeep : LinkKind::ProduceConsume;
            l.sources = sample( rng, names, pick( rng, 1, 3 ) );
            l.target_atoms = sample( rng, names, pick( rng, 1, 2 ) );
            depth.push_back( -1 );
        }
        else
        {
            const std::size_t t = targets[pick( rng, 0, targets.size() - 1 )];
            l.kind = coin( rng, 0.5 ) ? LinkKind::Activate : LinkKind::Inhibit;
            l.sources = sample( rng, names, pick( rng, 1, 2 ) );
            l.target_link = links[t].id;
            depth.push_back( depth[t] + 1 );
        }
        links.push_back( std::move( l ) );
    }

    InitialConditions init;
    std::size_t free = 0;
    for ( const auto& name : names )
    {
        if ( free < shape.max_free && coin( rng, shape.free_ratio ) )
        {
            ++free;
            continue;
        }
        init.set( name, coin( rng, 0.5 ) ? InitValue::Present : InitValue::Absent );
    }
    return Mig( std::move( atoms ), std::move( init ), std::move( links ) );
}

// Every subset of the atoms, as states.
inline std::vector<std::vector<bool>> all_assignments( std::size_t n )
{
    std::vector<std::vector<bool>> out;
    for ( std::uint64_t mask = 0; mask < ( std::uint64_t{ 1 } << n ); ++mask )
    {
        std::vector<bool> a( n );
        for ( std::size_t i = 0; i < n; ++i )
            a[i] = ( mask >> i ) & 1U;
        out.push_back( std::move( a ) );
    }
    return out;
}

inline sat::ClauseSet random_3cnf( std::mt19937& rng, int max_vars = 20 )
{
    sat::ClauseSet cs;
    cs.num_vars = static_cast<int>( pick( rng, 3, static_cast<std::size_t>( max_vars ) ) );
    // Around the 4.26 ratio so both answers are common.
    const auto m = static_cast<std::size_t>( cs.num_vars * std::uniform_real_distribution<double>( 3.0, 5.5 )( rng ) );
    for ( std::size_t i = 0; i < m; ++i )
    {
        std::vector<int> c;
        while ( c.size() < 3 )
        {
            const int v = static_cast<int>( pick( rng, 1, static_cast<std::size_t>( cs.num_vars ) ) );
            if ( std::find( c.begin(), c.end(), v ) != c.end() || std::find( c.begin(), c.end(), -v ) != c.end() )
                continue;
            c.push_back( coin( rng, 0.5 ) ? v : -v );
        }
        cs.clauses.push_back( std::move( c ) );
    }
    return cs;
}

// Truth-table oracle: does some assignment satisfy every clause?
inline bool brute_force_sat( const sat::ClauseSet& cs )
{
    for ( std::uint64_t mask = 0; mask < ( std::uint64_t{ 1 } << cs.num_vars ); ++mask )
    {
        bool all = true;
        for ( const auto& c : cs.clauses )
        {
            bool any = false;
            for ( int lit : c )
            {
                const bool val = ( mask >> ( std::abs( lit ) - 1 ) ) & 1U;
                if ( ( lit > 0 ) == val )
                {
                    any = true;
                    break;
                }
            }
            if ( !any )
            {
                all = false;
                break;
            }
        }
        if ( all )
            return true;
    }
    return false;
}

inline bool satisfies( const sat::ClauseSet& cs, const std::vector<bool>& model )
{
    for ( const auto& c : cs.clauses )
    {
        bool any = false;
        for ( int lit : c )
            any = any || model.at( static_cast<std::size_t>( std::abs( lit ) ) ) == ( lit > 0 );
        if ( !any )
            return false;
    }
    return true;
}

} // namespace migsat::testing

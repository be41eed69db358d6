#include "migsat/reasoner.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <thread>
#include <tuple>

namespace migsat
{

unsigned effective_threads( unsigned requested )
{
    unsigned n = requested != 0 ? requested : std::max( 1U, std::thread::hardware_concurrency() );
    if ( const char* env = std::getenv( "MIGSAT_THREADS" ) )
    {
        const long cap = std::strtol( env, nullptr, 10 );
        if ( cap > 0 )
            n = std::min( n, static_cast<unsigned>( cap ) );
    }
    return std::max( 1U, n );
}

ValidationResult validate( const Mig& g, std::size_t horizon )
{
    require_valid( g );
    const GroundTheory t = ground( g, horizon );
    const auto r = sat::solve( to_clauses( t ) );
    ValidationResult out;
    out.sat = r.sat();
    if ( r.sat() )
        out.witness = decode_model( t, r.model );
    return out;
}

std::map<std::string, bool> QueryResult::witness_map( std::size_t i ) const
{
    std::map<std::string, bool> out;
    for ( std::size_t j = 0; j < free_atoms.size(); ++j )
        out[free_atoms[j]] = witnesses.at( i )[j];
    return out;
}

namespace
{

using Clock = std::chrono::steady_clock;

std::vector<std::string> enumerated_atoms( const Mig& g, QueryMode mode )
{
    std::vector<std::string> out;
    for ( const auto& name : g.free_atoms() )
        if ( mode == QueryMode::ExistsAll || g.is_exogenous( g.atom_index( name ) ) )
            out.push_back( name );
    return out;
}

std::vector<bool> bits( std::size_t index, std::size_t width )
{
    std::vector<bool> out( width );
    for ( std::size_t j = 0; j < width; ++j )
        out[j] = ( index >> ( width - 1 - j ) ) & 1U;
    return out;
}

} // namespace

QueryResult query( const Mig& g, std::size_t horizon, const Query& q, QueryMode mode, const ReasonerOptions& opts )
{
    const auto start = Clock::now();
    require_valid( g );
    q.check( g, horizon );

    QueryResult out;
    out.mode = mode;
    out.free_atoms = enumerated_atoms( g, mode );
    const std::size_t f = out.free_atoms.size();
    if ( f > opts.max_free )
        throw LimitError( std::to_string( f ) + " free atoms exceed the limit of " + std::to_string( opts.max_free ) );

    const GroundTheory theory = ground( g, horizon );
    Clausifier c( theory.vars.size() );
    c.add_all( theory.formulas );
    const Formula grounded = rename( q.formula(), [&]( int v ) {
        const TimedAtom& a = q.atoms()[static_cast<std::size_t>( v )];
        return theory.vars.var( g.atom_index( a.atom ), a.time );
    } );
    const int qv = c.define( grounded );
    const sat::ClauseSet cs = c.take();

    std::vector<int> free_vars;
    for ( const auto& name : out.free_atoms )
        free_vars.push_back( theory.vars.var( g.atom_index( name ), 0 ) );

    // ExistsAll wants models of the query; ForallEndogenous wants the absence of counter-models.
    const int goal = mode == QueryMode::ExistsAll ? qv : -qv;
    const bool witness_when_sat = mode == QueryMode::ExistsAll;

    const std::size_t n = std::size_t{ 1 } << f;
    std::vector<char> hit( n, 0 );
    std::atomic<std::size_t> calls{ 1 };

    // No model of the goal at all: nothing to enumerate in either mode.
    bool settled = false;
    {
        sat::Solver s( cs );
        const int assume[] = { goal };
        if ( s.solve( assume ) == sat::Status::Unsat )
        {
            settled = true;
            if ( !witness_when_sat )
                std::fill( hit.begin(), hit.end(), 1 );
        }
    }

    if ( !settled )
        detail::parallel_for( n, effective_threads( opts.threads ), [&]() {
            return [&, solver = sat::Solver( cs ), assume = std::vector<int>()]( std::size_t i ) mutable {
                assume.assign( 1, goal );
                for ( std::size_t j = 0; j < f; ++j )
                    assume.push_back( ( ( i >> ( f - 1 - j ) ) & 1U ) ? free_vars[j] : -free_vars[j] );
                const bool sat = solver.solve( assume ) == sat::Status::Sat;
                ++calls;
                hit[i] = sat == witness_when_sat;
            };
        } );

    for ( std::size_t i = 0; i < n; ++i )
        if ( hit[i] )
            out.witnesses.push_back( bits( i, f ) );
    out.stats.solver_calls = calls;
    out.stats.elapsed_ms = std::chrono::duration<double, std::milli>( Clock::now() - start ).count();
    return out;
}

bool check_witness( const Mig& g, std::size_t horizon, const Query& q, const std::map<std::string, bool>& witness,
                    QueryMode mode )
{
    require_valid( g );
    q.check( g, horizon );
    const auto expected = enumerated_atoms( g, mode );
    for ( const auto& [name, value] : witness )
        if ( std::find( expected.begin(), expected.end(), name ) == expected.end() )
            throw std::invalid_argument( "witness assigns '" + name + "', which is not enumerated in this mode" );

    std::vector<std::string> rest;
    if ( mode == QueryMode::ForallEndogenous )
        for ( const auto& name : g.free_atoms() )
            if ( !g.is_exogenous( g.atom_index( name ) ) )
                rest.push_back( name );

    for ( std::size_t i = 0; i < ( std::size_t{ 1 } << rest.size() ); ++i )
    {
        auto overrides = witness;
        const auto b = bits( i, rest.size() );
        for ( std::size_t j = 0; j < rest.size(); ++j )
            overrides[rest[j]] = b[j];
        if ( !q.holds( g, simulate( g, complete_init( g, overrides ), horizon ) ) )
            return false;
    }
    return true;
}

std::string Edit::describe() const
{
    switch ( kind )
    {
    case EditKind::FlipKind:
        return "flip " + link + " to " + to_string( new_kind );
    case EditKind::RemoveLink: {
        std::string out = "remove " + link;
        if ( removed.size() > 1 )
        {
            out += " with";
            for ( std::size_t i = 1; i < removed.size(); ++i )
                out += ( i > 1 ? ", " : " " ) + removed[i];
        }
        return out;
    }
    case EditKind::AddRegulation:
        return "add " + new_id + ": " + source + ( new_kind == LinkKind::Activate ? " -> " : " -| " ) + link;
    case EditKind::AddProduction:
        return "add " + new_id + ": " + source + ( new_kind == LinkKind::ProduceKeep ? " -> " : " => " ) + target;
    }
    return {};
}

namespace
{

std::string fresh_id( const Mig& g )
{
    for ( int i = 1;; ++i )
    {
        std::string id = "new" + std::to_string( i );
        if ( !g.find_link( id ) && !g.find_atom( id ) )
            return id;
    }
}

LinkKind flipped( LinkKind k )
{
    switch ( k )
    {
    case LinkKind::ProduceKeep:
        return LinkKind::ProduceConsume;
    case LinkKind::ProduceConsume:
        return LinkKind::ProduceKeep;
    case LinkKind::Activate:
        return LinkKind::Inhibit;
    case LinkKind::Inhibit:
        return LinkKind::Activate;
    }
    return k;
}

auto sort_key( const Edit& e )
{
    return std::make_tuple( static_cast<int>( e.kind ), e.link, e.source, e.target, static_cast<int>( e.new_kind ) );
}

} // namespace

std::vector<std::pair<Edit, Mig>> neighbours( const Mig& g )
{
    require_valid( g );
    std::vector<std::pair<Edit, Mig>> cands;
    const auto& links = g.links();

    for ( std::size_t i = 0; i < links.size(); ++i )
    {
        Edit e;
        e.kind = EditKind::FlipKind;
        e.link = links[i].id;
        e.new_kind = flipped( links[i].kind );
        auto next = links;
        next[i].kind = e.new_kind;
        cands.emplace_back( e, g.with_links( std::move( next ) ) );
    }

    for ( const auto& l : links )
    {
        Edit e;
        e.kind = EditKind::RemoveLink;
        e.link = l.id;
        e.removed = { l.id };
        std::set<std::string> gone{ l.id };
        for ( bool grew = true; grew; )
        {
            grew = false;
            for ( const auto& r : links )
                if ( is_regulation( r.kind ) && gone.contains( r.target_link ) && !gone.contains( r.id ) )
                {
                    gone.insert( r.id );
                    e.removed.push_back( r.id );
                    grew = true;
                }
        }
        std::vector<Link> next;
        for ( const auto& r : links )
            if ( !gone.contains( r.id ) )
                next.push_back( r );
        cands.emplace_back( e, g.with_links( std::move( next ) ) );
    }

    const std::string id = fresh_id( g );
    const int depth_cap = g.max_regulation_depth();
    for ( std::size_t t = 0; t < links.size(); ++t )
    {
        if ( g.resolved( t ).depth > depth_cap )
            continue;
        for ( const auto& atom : g.atoms() )
            for ( LinkKind k : { LinkKind::Activate, LinkKind::Inhibit } )
            {
                Edit e;
                e.kind = EditKind::AddRegulation;
                e.link = links[t].id;
                e.source = atom.name;
                e.new_kind = k;
                e.new_id = id;
                auto next = links;
                next.push_back( Link{ id, k, { atom.name }, {}, links[t].id } );
                cands.emplace_back( e, g.with_links( std::move( next ) ) );
            }
    }

    for ( const auto& src : g.atoms() )
        for ( const auto& tgt : g.atoms() )
        {
            if ( src.name == tgt.name )
                continue;
            for ( LinkKind k : { LinkKind::ProduceKeep, LinkKind::ProduceConsume } )
            {
                Edit e;
                e.kind = EditKind::AddProduction;
                e.source = src.name;
                e.target = tgt.name;
                e.new_kind = k;
                e.new_id = id;
                auto next = links;
                next.push_back( Link{ id, k, { src.name }, { tgt.name }, {} } );
                cands.emplace_back( e, g.with_links( std::move( next ) ) );
            }
        }

    std::stable_sort( cands.begin(), cands.end(),
                      []( const auto& a, const auto& b ) { return sort_key( a.first ) < sort_key( b.first ); } );

    std::set<std::string> seen{ canonical_form( g ) };
    std::vector<std::pair<Edit, Mig>> out;
    for ( auto& c : cands )
        if ( validate_mig( c.second ).empty() && seen.insert( canonical_form( c.second ) ).second )
            out.push_back( std::move( c ) );
    return out;
}

UpdateResult update( const Mig& g, std::size_t horizon, const Query& q, const UpdateOptions& opts )
{
    if ( opts.budget != 1 )
        throw LimitError( "only single-edit updates are supported (budget " + std::to_string( opts.budget ) + ")" );
    const auto start = Clock::now();

    UpdateResult out;
    out.current = query( g, horizon, q, opts.mode, opts.reasoner );
    if ( !out.current.witnesses.empty() )
    {
        out.already_satisfied = true;
        return out;
    }

    auto cands = neighbours( g );
    out.candidates = cands.size();
    std::vector<std::optional<QueryResult>> results( cands.size() );
    std::atomic<bool> expired{ false };

    ReasonerOptions inner = opts.reasoner;
    inner.threads = 1;
    detail::parallel_for( cands.size(), effective_threads( opts.reasoner.threads ), [&]() {
        return [&]( std::size_t i ) {
            if ( opts.time_budget && Clock::now() - start > *opts.time_budget )
            {
                expired = true;
                return;
            }
            results[i] = query( cands[i].second, horizon, q, opts.mode, inner );
        };
    } );

    for ( std::size_t i = 0; i < cands.size(); ++i )
    {
        if ( !results[i] )
            continue;
        ++out.checked;
        if ( !results[i]->witnesses.empty() )
            out.proposals.push_back( { std::move( cands[i].first ), std::move( cands[i].second ), std::move( *results[i] ) } );
    }
    out.truncated = expired;
    return out;
}

const char* to_string( QueryMode mode ) { return mode == QueryMode::ExistsAll ? "exists" : "forall-endo"; }

const char* to_string( EditKind kind )
{
    switch ( kind )
    {
    case EditKind::FlipKind:
        return "flip";
    case EditKind::RemoveLink:
        return "remove";
    case EditKind::AddRegulation:
        return "add-regulation";
    case EditKind::AddProduction:
        return "add-production";
    }
    return "?";
}

} // namespace migsat

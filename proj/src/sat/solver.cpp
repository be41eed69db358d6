#include "migsat/sat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace migsat::sat
{

namespace
{

constexpr double var_decay = 0.95;
constexpr double clause_decay = 0.999;
constexpr int restart_unit = 100;

// Luby sequence 1,1,2,1,1,2,4,... scaled by y^k.
double luby( double y, int x )
{
    int size = 1;
    int seq = 0;
    while ( size < x + 1 )
    {
        ++seq;
        size = 2 * size + 1;
    }
    while ( size - 1 != x )
    {
        size = ( size - 1 ) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow( y, seq );
}

} // namespace

void check_clause_set( const ClauseSet& cs )
{
    if ( cs.num_vars < 0 )
        throw std::invalid_argument( "negative variable count" );
    for ( std::size_t i = 0; i < cs.clauses.size(); ++i )
        for ( int lit : cs.clauses[i] )
        {
            if ( lit == 0 )
                throw std::invalid_argument( "zero literal in clause " + std::to_string( i + 1 ) );
            if ( std::abs( lit ) > cs.num_vars )
                throw std::invalid_argument( "literal " + std::to_string( lit ) + " exceeds variable count " +
                                             std::to_string( cs.num_vars ) );
        }
}

Solver::Solver( const ClauseSet& cs )
{
    check_clause_set( cs );
    ensure_vars( cs.num_vars );
    for ( const auto& c : cs.clauses )
        if ( !add_clause( c ) )
            break;
}

int Solver::new_var()
{
    const auto v = static_cast<std::uint32_t>( _assigns.size() );
    _assigns.push_back( Undef );
    _phase.push_back( true );
    _level.push_back( 0 );
    _reason.push_back( no_reason );
    _activity.push_back( 0.0 );
    _seen.push_back( 0 );
    _heap_pos.push_back( -1 );
    _watches.emplace_back();
    _watches.emplace_back();
    heap_insert( v );
    return static_cast<int>( v ) + 1;
}

void Solver::ensure_vars( int n )
{
    while ( num_vars() < n )
        new_var();
}

bool Solver::add_clause( std::span<const int> lits )
{
    if ( !_ok )
        return false;
    cancel_until( 0 );

    std::vector<Lit> c;
    c.reserve( lits.size() );
    for ( int x : lits )
    {
        if ( x == 0 || std::abs( x ) > num_vars() )
            throw std::invalid_argument( "literal " + std::to_string( x ) + " out of range" );
        c.push_back( to_lit( x ) );
    }
    std::sort( c.begin(), c.end() );
    c.erase( std::unique( c.begin(), c.end() ), c.end() );

    std::size_t j = 0;
    for ( std::size_t i = 0; i < c.size(); ++i )
    {
        if ( value( c[i] ) == True || ( i + 1 < c.size() && c[i + 1] == negate( c[i] ) ) )
            return true; // satisfied at the root or tautological
        if ( value( c[i] ) != False )
            c[j++] = c[i];
    }
    c.resize( j );

    if ( c.empty() )
        return _ok = false;
    if ( c.size() == 1 )
    {
        enqueue( c[0], no_reason );
        if ( propagate() != no_reason )
            _ok = false;
        return _ok;
    }
    attach( std::move( c ), false );
    return true;
}

Solver::CRef Solver::attach( std::vector<Lit> lits, bool learnt )
{
    const auto cref = static_cast<CRef>( _db.size() );
    _watches[lits[0]].push_back( { cref, lits[1] } );
    _watches[lits[1]].push_back( { cref, lits[0] } );
    _db.push_back( Clause{ std::move( lits ), 0.0, learnt, false } );
    if ( learnt )
        _learnts.push_back( cref );
    return cref;
}

void Solver::enqueue( Lit p, CRef reason )
{
    const auto v = var_of( p );
    _assigns[v] = sign_of( p ) ? False : True;
    _level[v] = decision_level();
    _reason[v] = reason;
    _trail.push_back( p );
}

// Watch lists are keyed by the watched literal; they are visited when it becomes false.
Solver::CRef Solver::propagate()
{
    CRef confl = no_reason;
    while ( _qhead < _trail.size() )
    {
        const Lit false_lit = negate( _trail[_qhead++] );
        auto& ws = _watches[false_lit];
        ++_stats.propagations;

        std::size_t i = 0;
        std::size_t j = 0;
        while ( i < ws.size() )
        {
            const Watch w = ws[i];
            if ( value( w.blocker ) == True )
            {
                ws[j++] = ws[i++];
                continue;
            }
            Clause& c = _db[w.cref];
            if ( c.removed )
            {
                ++i;
                continue;
            }
            if ( c.lits[0] == false_lit )
                std::swap( c.lits[0], c.lits[1] );
            ++i;

            const Lit first = c.lits[0];
            const Watch nw{ w.cref, first };
            if ( first != w.blocker && value( first ) == True )
            {
                ws[j++] = nw;
                continue;
            }

            bool moved = false;
            for ( std::size_t k = 2; k < c.lits.size(); ++k )
                if ( value( c.lits[k] ) != False )
                {
                    std::swap( c.lits[1], c.lits[k] );
                    _watches[c.lits[1]].push_back( nw );
                    moved = true;
                    break;
                }
            if ( moved )
                continue;

            ws[j++] = nw;
            if ( value( first ) == False )
            {
                confl = w.cref;
                _qhead = _trail.size();
                while ( i < ws.size() )
                    ws[j++] = ws[i++];
            }
            else
                enqueue( first, w.cref );
        }
        ws.resize( j );
        if ( confl != no_reason )
            break;
    }
    return confl;
}

bool Solver::redundant( Lit p ) const
{
    const CRef r = _reason[var_of( p )];
    if ( r == no_reason )
        return false;
    const Clause& c = _db[r];
    for ( std::size_t k = 1; k < c.lits.size(); ++k )
    {
        const auto v = var_of( c.lits[k] );
        if ( !_seen[v] && _level[v] > 0 )
            return false;
    }
    return true;
}

void Solver::analyze( CRef confl, std::vector<Lit>& learnt, int& backtrack_level )
{
    learnt.clear();
    learnt.push_back( no_lit );
    int pending = 0;
    Lit p = no_lit;
    auto index = static_cast<std::ptrdiff_t>( _trail.size() ) - 1;

    do
    {
        Clause& c = _db[confl];
        if ( c.learnt )
            bump_clause( c );
        for ( std::size_t k = ( p == no_lit ? 0 : 1 ); k < c.lits.size(); ++k )
        {
            const Lit q = c.lits[k];
            const auto v = var_of( q );
            if ( _seen[v] || _level[v] == 0 )
                continue;
            bump_var( v );
            _seen[v] = 1;
            if ( _level[v] >= decision_level() )
                ++pending;
            else
                learnt.push_back( q );
        }
        while ( !_seen[var_of( _trail[index--] )] )
            ;
        p = _trail[index + 1];
        confl = _reason[var_of( p )];
        _seen[var_of( p )] = 0;
        --pending;
    } while ( pending > 0 );
    learnt[0] = negate( p );

    // Drop literals implied by the rest of the clause.
    const std::vector<Lit> original = learnt;
    std::size_t j = 1;
    for ( std::size_t i = 1; i < learnt.size(); ++i )
        if ( !redundant( learnt[i] ) )
            learnt[j++] = learnt[i];
    learnt.resize( j );
    for ( Lit q : original )
        _seen[var_of( q )] = 0;

    backtrack_level = 0;
    if ( learnt.size() > 1 )
    {
        std::size_t max_i = 1;
        for ( std::size_t i = 2; i < learnt.size(); ++i )
            if ( _level[var_of( learnt[i] )] > _level[var_of( learnt[max_i] )] )
                max_i = i;
        std::swap( learnt[1], learnt[max_i] );
        backtrack_level = _level[var_of( learnt[1] )];
    }
}

void Solver::cancel_until( int level )
{
    if ( decision_level() <= level )
        return;
    for ( auto c = static_cast<std::ptrdiff_t>( _trail.size() ) - 1; c >= _trail_lim[level]; --c )
    {
        const auto v = var_of( _trail[c] );
        _assigns[v] = Undef;
        _reason[v] = no_reason;
        _phase[v] = sign_of( _trail[c] );
        heap_insert( v );
    }
    _trail.resize( static_cast<std::size_t>( _trail_lim[level] ) );
    _qhead = _trail.size();
    _trail_lim.resize( static_cast<std::size_t>( level ) );
}

Solver::Lit Solver::pick_branch_lit()
{
    while ( !_heap.empty() )
    {
        const auto v = heap_pop();
        if ( _assigns[v] == Undef )
            return 2U * v + ( _phase[v] ? 1U : 0U );
    }
    return no_lit;
}

bool Solver::locked( CRef c ) const
{
    const Clause& cl = _db[c];
    const auto v = var_of( cl.lits[0] );
    return _reason[v] == c && value( cl.lits[0] ) == True;
}

void Solver::reduce_learnts()
{
    std::vector<CRef> live;
    for ( CRef c : _learnts )
        if ( !_db[c].removed )
            live.push_back( c );
    std::stable_sort( live.begin(), live.end(), [this]( CRef a, CRef b ) {
        const bool a_bin = _db[a].lits.size() == 2;
        const bool b_bin = _db[b].lits.size() == 2;
        if ( a_bin != b_bin )
            return b_bin;
        return _db[a].activity < _db[b].activity;
    } );

    std::vector<CRef> kept;
    const std::size_t half = live.size() / 2;
    for ( std::size_t i = 0; i < live.size(); ++i )
    {
        Clause& c = _db[live[i]];
        if ( i < half && c.lits.size() > 2 && !locked( live[i] ) )
        {
            c.removed = true;
            c.lits.clear();
            c.lits.shrink_to_fit();
        }
        else
            kept.push_back( live[i] );
    }
    _learnts = std::move( kept );
}

void Solver::bump_var( std::uint32_t v )
{
    if ( ( _activity[v] += _var_inc ) > 1e100 )
    {
        for ( auto& a : _activity )
            a *= 1e-100;
        _var_inc *= 1e-100;
    }
    if ( _heap_pos[v] >= 0 )
        heap_up( static_cast<std::size_t>( _heap_pos[v] ) );
}

void Solver::bump_clause( Clause& c )
{
    if ( ( c.activity += _cla_inc ) > 1e20 )
    {
        for ( CRef r : _learnts )
            _db[r].activity *= 1e-20;
        _cla_inc *= 1e-20;
    }
}

void Solver::decay_activities()
{
    _var_inc /= var_decay;
    _cla_inc /= clause_decay;
}

Status Solver::search( int conflict_budget, const std::vector<Lit>& assumptions, bool& assumption_conflict )
{
    int conflicts = 0;
    std::vector<Lit> learnt;
    for ( ;; )
    {
        const CRef confl = propagate();
        if ( confl != no_reason )
        {
            ++_stats.conflicts;
            ++conflicts;
            if ( decision_level() == 0 )
            {
                _ok = false;
                return Status::Unsat;
            }
            int backtrack_level = 0;
            analyze( confl, learnt, backtrack_level );
            cancel_until( backtrack_level );
            if ( learnt.size() == 1 )
                enqueue( learnt[0], no_reason );
            else
            {
                const CRef c = attach( learnt, true );
                bump_clause( _db[c] );
                enqueue( learnt[0], c );
            }
            decay_activities();
            continue;
        }

        if ( conflict_budget >= 0 && conflicts >= conflict_budget )
        {
            cancel_until( 0 );
            return Status::Unsat; // caller treats as "undecided" via the flag below
        }

        if ( static_cast<double>( _learnts.size() ) - static_cast<double>( _trail.size() ) >= _max_learnts )
            reduce_learnts();

        Lit next = no_lit;
        while ( decision_level() < static_cast<int>( assumptions.size() ) )
        {
            const Lit p = assumptions[static_cast<std::size_t>( decision_level() )];
            if ( value( p ) == True )
                new_decision_level();
            else if ( value( p ) == False )
            {
                assumption_conflict = true;
                return Status::Unsat;
            }
            else
            {
                next = p;
                break;
            }
        }
        if ( next == no_lit )
        {
            ++_stats.decisions;
            next = pick_branch_lit();
            if ( next == no_lit )
                return Status::Sat;
        }
        new_decision_level();
        enqueue( next, no_reason );
    }
}

Status Solver::solve( std::span<const int> assumptions )
{
    ++_stats.solves;
    _model.clear();
    if ( !_ok )
        return Status::Unsat;
    cancel_until( 0 );

    std::vector<Lit> assume;
    for ( int x : assumptions )
    {
        if ( x == 0 || std::abs( x ) > num_vars() )
            throw std::invalid_argument( "assumption " + std::to_string( x ) + " out of range" );
        assume.push_back( to_lit( x ) );
    }

    _max_learnts = std::max( 1000.0, static_cast<double>( _db.size() - _learnts.size() ) / 3.0 );
    Status status = Status::Unsat;
    for ( int restart = 0;; ++restart )
    {
        bool assumption_conflict = false;
        const auto budget = static_cast<int>( luby( 2.0, restart ) * restart_unit );
        const std::uint64_t before = _stats.conflicts;
        status = search( budget, assume, assumption_conflict );
        if ( status == Status::Sat || !_ok || assumption_conflict )
            break;
        // Budget exhausted: restart with more room.
        if ( _stats.conflicts - before < static_cast<std::uint64_t>( budget ) )
            break;
        ++_stats.restarts;
        _max_learnts *= 1.1;
    }

    if ( status == Status::Sat )
    {
        _model.assign( _assigns.size() + 1, false );
        for ( std::size_t v = 0; v < _assigns.size(); ++v )
            _model[v + 1] = _assigns[v] == True;
    }
    cancel_until( 0 );
    return status;
}

bool Solver::heap_less( std::uint32_t a, std::uint32_t b ) const
{
    if ( _activity[a] != _activity[b] )
        return _activity[a] > _activity[b];
    return a < b;
}

void Solver::heap_insert( std::uint32_t v )
{
    if ( _heap_pos[v] >= 0 )
        return;
    _heap_pos[v] = static_cast<int>( _heap.size() );
    _heap.push_back( v );
    heap_up( _heap.size() - 1 );
}

std::uint32_t Solver::heap_pop()
{
    const auto top = _heap.front();
    _heap.front() = _heap.back();
    _heap_pos[_heap.front()] = 0;
    _heap.pop_back();
    _heap_pos[top] = -1;
    if ( !_heap.empty() )
        heap_down( 0 );
    return top;
}

void Solver::heap_up( std::size_t i )
{
    const auto v = _heap[i];
    while ( i > 0 )
    {
        const std::size_t parent = ( i - 1 ) / 2;
        if ( !heap_less( v, _heap[parent] ) )
            break;
        _heap[i] = _heap[parent];
        _heap_pos[_heap[i]] = static_cast<int>( i );
        i = parent;
    }
    _heap[i] = v;
    _heap_pos[v] = static_cast<int>( i );
}

void Solver::heap_down( std::size_t i )
{
    const auto v = _heap[i];
    for ( ;; )
    {
        std::size_t child = 2 * i + 1;
        if ( child >= _heap.size() )
            break;
        if ( child + 1 < _heap.size() && heap_less( _heap[child + 1], _heap[child] ) )
            ++child;
        if ( !heap_less( _heap[child], v ) )
            break;
        _heap[i] = _heap[child];
        _heap_pos[_heap[i]] = static_cast<int>( i );
        i = child;
    }
    _heap[i] = v;
    _heap_pos[v] = static_cast<int>( i );
}

SolveResult solve( const ClauseSet& cs, std::span<const int> assumptions )
{
    Solver s( cs );
    SolveResult r;
    r.status = s.solve( assumptions );
    if ( r.sat() )
        r.model = s.model();
    return r;
}

Enumeration enumerate_models( const ClauseSet& cs, std::span<const int> projection, std::size_t limit )
{
    for ( int v : projection )
        if ( v <= 0 || v > cs.num_vars )
            throw std::invalid_argument( "projection variable " + std::to_string( v ) + " out of range" );

    Solver s( cs );
    Enumeration out;
    std::vector<int> block;
    while ( s.solve() == Status::Sat )
    {
        if ( out.models.size() == limit )
        {
            out.limit_reached = true;
            break;
        }
        std::vector<bool> m;
        block.clear();
        for ( int v : projection )
        {
            const bool val = s.model_value( v );
            m.push_back( val );
            block.push_back( val ? -v : v );
        }
        out.models.push_back( std::move( m ) );
        if ( !s.add_clause( block ) )
            break;
    }
    std::sort( out.models.begin(), out.models.end(), std::greater<>() );
    return out;
}

} // namespace migsat::sat

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace migsat::sat
{

// DIMACS-style clause set: positive integers are variables, negative their negation.
struct ClauseSet
{
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;

    bool operator==( const ClauseSet& ) const = default;
};

// Throws std::invalid_argument on a zero literal or a literal beyond num_vars.
void check_clause_set( const ClauseSet& cs );

enum class Status
{
    Sat,
    Unsat,
};

struct SolveResult
{
    Status status = Status::Unsat;
    std::vector<bool> model; // indexed by variable, entry 0 unused

    [[nodiscard]] bool sat() const { return status == Status::Sat; }
};

struct SolverStats
{
    std::uint64_t solves = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t restarts = 0;
};

// Conflict-driven clause learning solver: two watched literals, VSIDS branching with
// phase saving, first-UIP learning with clause minimization, Luby restarts and
// activity-based deletion of learnt clauses. Clauses may be added between calls to
// solve; assumptions are scoped to a single call. Fully deterministic.
class Solver
{
public:
    Solver() = default;
    explicit Solver( const ClauseSet& cs );

    int new_var();
    void ensure_vars( int n );
    [[nodiscard]] int num_vars() const { return static_cast<int>( _assigns.size() ); }

    // Returns false once the clause set is known to be unsatisfiable.
    bool add_clause( std::span<const int> lits );
    bool add_clause( std::initializer_list<int> lits ) { return add_clause( std::span<const int>( lits.begin(), lits.size() ) ); }

    Status solve( std::span<const int> assumptions = {} );

    // Valid after a Sat answer.
    [[nodiscard]] bool model_value( int var ) const { return _model.at( static_cast<std::size_t>( var ) ); }
    [[nodiscard]] const std::vector<bool>& model() const { return _model; }

    [[nodiscard]] const SolverStats& stats() const { return _stats; }

private:
    using Lit = std::uint32_t;
    using CRef = std::uint32_t;
    static constexpr CRef no_reason = 0xFFFFFFFFU;
    static constexpr Lit no_lit = 0xFFFFFFFFU;

    enum Value : std::uint8_t
    {
        True = 0,
        False = 1,
        Undef = 2,
    };

    struct Clause
    {
        std::vector<Lit> lits;
        double activity = 0;
        bool learnt = false;
        bool removed = false;
    };

    struct Watch
    {
        CRef cref;
        Lit blocker;
    };

    static Lit to_lit( int dimacs ) { return dimacs > 0 ? 2U * ( dimacs - 1 ) : 2U * ( -dimacs - 1 ) + 1U; }
    static Lit negate( Lit p ) { return p ^ 1U; }
    static std::uint32_t var_of( Lit p ) { return p >> 1; }
    static bool sign_of( Lit p ) { return p & 1U; }

    Value value( Lit p ) const
    {
        const Value v = _assigns[var_of( p )];
        return v == Undef ? Undef : static_cast<Value>( v ^ static_cast<std::uint8_t>( sign_of( p ) ) );
    }

    int decision_level() const { return static_cast<int>( _trail_lim.size() ); }
    void new_decision_level() { _trail_lim.push_back( static_cast<int>( _trail.size() ) ); }
    void enqueue( Lit p, CRef reason );
    CRef propagate();
    void analyze( CRef confl, std::vector<Lit>& learnt, int& backtrack_level );
    bool redundant( Lit p ) const;
    void cancel_until( int level );
    Lit pick_branch_lit();
    Status search( int conflict_budget, const std::vector<Lit>& assumptions, bool& assumption_conflict );
    CRef attach( std::vector<Lit> lits, bool learnt );
    void reduce_learnts();
    bool locked( CRef c ) const;

    void bump_var( std::uint32_t v );
    void bump_clause( Clause& c );
    void decay_activities();

    // Binary max-heap of unassigned variables keyed by activity (lower index wins ties).
    bool heap_less( std::uint32_t a, std::uint32_t b ) const;
    void heap_insert( std::uint32_t v );
    std::uint32_t heap_pop();
    void heap_up( std::size_t i );
    void heap_down( std::size_t i );

    bool _ok = true;
    std::vector<Clause> _db;
    std::vector<CRef> _learnts;
    std::vector<std::vector<Watch>> _watches;
    std::vector<Value> _assigns;
    std::vector<bool> _phase; // saved polarity, true = negative
    std::vector<int> _level;
    std::vector<CRef> _reason;
    std::vector<Lit> _trail;
    std::vector<int> _trail_lim;
    std::size_t _qhead = 0;

    std::vector<double> _activity;
    double _var_inc = 1.0;
    double _cla_inc = 1.0;
    std::vector<std::uint32_t> _heap;
    std::vector<int> _heap_pos; // -1 when not in heap

    mutable std::vector<std::uint8_t> _seen;
    double _max_learnts = 0;

    std::vector<bool> _model;
    SolverStats _stats;
};

[[nodiscard]] SolveResult solve( const ClauseSet& cs, std::span<const int> assumptions = {} );

struct Enumeration
{
    // Assignments of the projection variables, in projection order; sorted with
    // true before false, lexicographically.
    std::vector<std::vector<bool>> models;
    bool limit_reached = false;
};

// Every distinct assignment of `projection` that extends to a model, each once.
// Stops at `limit` models and reports whether more exist.
[[nodiscard]] Enumeration enumerate_models( const ClauseSet& cs, std::span<const int> projection, std::size_t limit );

} // namespace migsat::sat

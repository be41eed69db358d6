#pragma once

#include "migsat/formula.hpp"
#include "migsat/mig.hpp"
#include "migsat/sat/solver.hpp"
#include "migsat/semantics.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace migsat
{

// Graph-level formulas use atom indices as variables.
class Encoder
{
public:
    // Throws InvalidMig for a malformed graph.
    explicit Encoder( const Mig& g );

    [[nodiscard]] const Mig& graph() const { return _g; }

    [[nodiscard]] Formula activation( std::size_t link );
    [[nodiscard]] Formula inhibition( std::size_t link );
    [[nodiscard]] Formula production( std::size_t atom );
    [[nodiscard]] Formula consumption( std::size_t atom );
    // Pr(p) ∨ (p ∧ ¬Cn(p)), unsimplified.
    [[nodiscard]] Formula successor_body( std::size_t atom );

private:
    Mig _g;
    std::vector<std::optional<Formula>> _act;
    std::vector<std::optional<Formula>> _inh;
};

[[nodiscard]] Formula activation_formula( const Mig& g, const std::string& link );
[[nodiscard]] Formula inhibition_formula( const Mig& g, const std::string& link );
[[nodiscard]] Formula prod_formula( const Mig& g, const std::string& atom );
[[nodiscard]] Formula cons_formula( const Mig& g, const std::string& atom );

struct SuccessorAxiom
{
    std::size_t atom;
    Formula body;

    // □(◯p ↔ body)
    [[nodiscard]] Formula formula() const;
};

struct LtlEncoding
{
    std::vector<Formula> initial; // one literal per entry of the initial conditions
    std::vector<SuccessorAxiom> axioms; // one per atom, declaration order

    [[nodiscard]] std::vector<Formula> formulas() const;
};

[[nodiscard]] LtlEncoding encode( const Mig& g );

struct GroundAtom
{
    std::size_t atom;
    std::optional<std::size_t> time; // empty for exogenous atoms

    bool operator==( const GroundAtom& ) const = default;
};

// Solver variables of a grounding: ordered by (atom declaration order, time), from 1.
class VarTable
{
public:
    VarTable() = default;
    VarTable( const Mig& g, std::size_t horizon );

    [[nodiscard]] int var( std::size_t atom, std::size_t time ) const;
    [[nodiscard]] const GroundAtom& at( int var ) const { return _atoms.at( static_cast<std::size_t>( var - 1 ) ); }
    [[nodiscard]] int size() const { return static_cast<int>( _atoms.size() ); }
    // "Glucose@3", or the bare name for exogenous atoms.
    [[nodiscard]] std::string name( int var ) const;
    [[nodiscard]] const std::vector<std::string>& atom_names() const { return _names; }

private:
    std::vector<GroundAtom> _atoms;
    std::vector<int> _first; // first variable of each atom
    std::vector<bool> _exogenous;
    std::vector<std::string> _names;
};

struct GroundTheory
{
    std::vector<Formula> formulas; // over solver variables
    std::size_t horizon = 0;
    VarTable vars;
};

[[nodiscard]] GroundTheory ground( const Mig& g, std::size_t horizon );

// ⌊f⌋_t for a graph-level classical formula.
[[nodiscard]] Formula ground_at( const VarTable& vars, const Formula& f, std::size_t time );

// Definitional clause conversion. Each subformula gets a fresh variable constrained
// only in the polarity it occurs in; top-level p ↔ body axioms are expanded directly.
class Clausifier
{
public:
    explicit Clausifier( int reserved_vars );

    void add( const Formula& f );
    // Simplifies the batch together so shared subterms get one definition.
    void add_all( std::span<const Formula> fs );
    // Literal equivalent to f (constrained in both directions).
    [[nodiscard]] int define( const Formula& f );

    [[nodiscard]] const sat::ClauseSet& clauses() const { return _cs; }
    [[nodiscard]] sat::ClauseSet take() { return std::move( _cs ); }

private:
    struct Def
    {
        Formula node; // keeps the keyed address alive
        int var = 0;
        bool pos = false;
        bool neg = false;
    };

    void add_simplified( const Formula& f );
    int fresh();
    int constant_true();
    int literal( const Formula& f, bool pos, bool neg );
    void implies( const std::vector<int>& premise, const Formula& f );
    void implied_by( const Formula& f, const std::vector<int>& conclusion );
    void clause( std::vector<int> lits );

    sat::ClauseSet _cs;
    std::unordered_map<const void*, Def> _defs;
    int _true = 0;
};

[[nodiscard]] sat::ClauseSet to_clauses( const GroundTheory& t );

// Throws std::invalid_argument when the model does not cover every ground atom.
[[nodiscard]] Trace decode_model( const GroundTheory& t, const std::vector<bool>& model );

// Sidecar lines "var <index> <atom>[@<time>]".
[[nodiscard]] std::string var_map_text( const VarTable& vars );

} // namespace migsat

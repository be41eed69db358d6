#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace migsat
{

enum class Op : std::uint8_t
{
    False,
    True,
    Var,
    Not,
    And,
    Or,
    Iff,
    Next,   // ◯
    Always, // □
};

// Immutable formula tree with shared subterms. Variables are plain integers whose
// meaning is fixed by the producer: atom indices for graph-level formulas, solver
// variables for ground formulas.
class Formula
{
public:
    Formula();

    static Formula falsum();
    static Formula verum();
    static Formula var( int v );
    static Formula negation( Formula f );
    // Empty conjunction is ⊤ and a single conjunct is returned as is; same for disjunction with ⊥.
    static Formula conjunction( std::vector<Formula> fs );
    static Formula disjunction( std::vector<Formula> fs );
    static Formula iff( Formula lhs, Formula rhs );
    static Formula next( Formula f );
    static Formula always( Formula f );

    [[nodiscard]] Op op() const;
    [[nodiscard]] int variable() const;
    [[nodiscard]] std::span<const Formula> children() const;
    [[nodiscard]] const void* identity() const { return _node.get(); }

    [[nodiscard]] bool is_classical() const;

private:
    struct Node;
    explicit Formula( std::shared_ptr<const Node> node ) : _node( std::move( node ) ) {}
    static Formula make( Op op, int var, std::vector<Formula> kids );

    std::shared_ptr<const Node> _node;
};

// Classical evaluation; throws std::logic_error on temporal operators.
[[nodiscard]] bool eval( const Formula& f, const std::function<bool( int )>& value );
[[nodiscard]] bool eval( const Formula& f, const std::vector<bool>& value );

// Number of logical operators: ¬, ↔, ◯, □ count one; an n-ary ∧/∨ counts n-1.
[[nodiscard]] std::size_t formula_size( const Formula& f );
[[nodiscard]] std::size_t theory_size( std::span<const Formula> fs );

// Negation normal form of ¬f, with ↔ expanded where it sits under the negation.
[[nodiscard]] Formula negate_nnf( const Formula& f );
[[nodiscard]] bool is_nnf( const Formula& f );

// Constant folding and flattening of nested ∧/∨; semantics preserving.
[[nodiscard]] Formula simplify( const Formula& f );
[[nodiscard]] std::vector<Formula> simplify_all( std::span<const Formula> fs );

// Replaces every variable v by map(v).
[[nodiscard]] Formula rename( const Formula& f, const std::function<int( int )>& map );
// Same, preserving subterm sharing across the whole batch.
[[nodiscard]] std::vector<Formula> rename_all( std::span<const Formula> fs, const std::function<int( int )>& map );

[[nodiscard]] std::set<int> variables( const Formula& f );

// Truth-table equivalence over the union of both variable sets (intended for small sets).
[[nodiscard]] bool equivalent( const Formula& a, const Formula& b );

[[nodiscard]] std::string to_string( const Formula& f, const std::function<std::string( int )>& name );

} // namespace migsat

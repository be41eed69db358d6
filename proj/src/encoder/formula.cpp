#include "migsat/formula.hpp"

#include <stdexcept>
#include <unordered_map>

namespace migsat
{

struct Formula::Node
{
    Op op;
    int var;
    std::vector<Formula> kids;
};

Formula Formula::make( Op op, int var, std::vector<Formula> kids )
{
    return Formula( std::make_shared<const Node>( Node{ op, var, std::move( kids ) } ) );
}

Formula::Formula() : Formula( falsum() ) {}

Formula Formula::falsum()
{
    static const Formula f = make( Op::False, 0, {} );
    return f;
}

Formula Formula::verum()
{
    static const Formula f = make( Op::True, 0, {} );
    return f;
}

Formula Formula::var( int v ) { return make( Op::Var, v, {} ); }

Formula Formula::negation( Formula f ) { return make( Op::Not, 0, { std::move( f ) } ); }

Formula Formula::conjunction( std::vector<Formula> fs )
{
    if ( fs.empty() )
        return verum();
    if ( fs.size() == 1 )
        return fs.front();
    return make( Op::And, 0, std::move( fs ) );
}

Formula Formula::disjunction( std::vector<Formula> fs )
{
    if ( fs.empty() )
        return falsum();
    if ( fs.size() == 1 )
        return fs.front();
    return make( Op::Or, 0, std::move( fs ) );
}

Formula Formula::iff( Formula lhs, Formula rhs ) { return make( Op::Iff, 0, { std::move( lhs ), std::move( rhs ) } ); }

Formula Formula::next( Formula f ) { return make( Op::Next, 0, { std::move( f ) } ); }

Formula Formula::always( Formula f ) { return make( Op::Always, 0, { std::move( f ) } ); }

Op Formula::op() const { return _node->op; }

int Formula::variable() const { return _node->var; }

std::span<const Formula> Formula::children() const { return _node->kids; }

bool Formula::is_classical() const
{
    if ( op() == Op::Next || op() == Op::Always )
        return false;
    for ( const auto& c : children() )
        if ( !c.is_classical() )
            return false;
    return true;
}

bool eval( const Formula& f, const std::function<bool( int )>& value )
{
    switch ( f.op() )
    {
    case Op::False:
        return false;
    case Op::True:
        return true;
    case Op::Var:
        return value( f.variable() );
    case Op::Not:
        return !eval( f.children()[0], value );
    case Op::And:
        for ( const auto& c : f.children() )
            if ( !eval( c, value ) )
                return false;
        return true;
    case Op::Or:
        for ( const auto& c : f.children() )
            if ( eval( c, value ) )
                return true;
        return false;
    case Op::Iff:
        return eval( f.children()[0], value ) == eval( f.children()[1], value );
    case Op::Next:
    case Op::Always:
        break;
    }
    throw std::logic_error( "temporal operator in classical evaluation" );
}

bool eval( const Formula& f, const std::vector<bool>& value )
{
    return eval( f, [&value]( int v ) { return value.at( static_cast<std::size_t>( v ) ); } );
}

namespace
{

std::size_t size_memo( const Formula& f, std::unordered_map<const void*, std::size_t>& memo )
{
    if ( auto it = memo.find( f.identity() ); it != memo.end() )
        return it->second;
    std::size_t n = 0;
    switch ( f.op() )
    {
    case Op::False:
    case Op::True:
    case Op::Var:
        break;
    case Op::Not:
    case Op::Next:
    case Op::Always:
    case Op::Iff:
        n = 1;
        break;
    case Op::And:
    case Op::Or:
        n = f.children().size() - 1;
        break;
    }
    for ( const auto& c : f.children() )
        n += size_memo( c, memo );
    memo.emplace( f.identity(), n );
    return n;
}

} // namespace

std::size_t formula_size( const Formula& f )
{
    std::unordered_map<const void*, std::size_t> memo;
    return size_memo( f, memo );
}

std::size_t theory_size( std::span<const Formula> fs )
{
    std::unordered_map<const void*, std::size_t> memo;
    std::size_t n = 0;
    for ( const auto& f : fs )
        n += size_memo( f, memo );
    return n;
}

namespace
{

Formula nnf( const Formula& f, bool negate )
{
    switch ( f.op() )
    {
    case Op::False:
        return negate ? Formula::verum() : f;
    case Op::True:
        return negate ? Formula::falsum() : f;
    case Op::Var:
        return negate ? Formula::negation( f ) : f;
    case Op::Not:
        return nnf( f.children()[0], !negate );
    case Op::And:
    case Op::Or: {
        std::vector<Formula> kids;
        for ( const auto& c : f.children() )
            kids.push_back( nnf( c, negate ) );
        const bool conj = ( f.op() == Op::And ) != negate;
        return conj ? Formula::conjunction( std::move( kids ) ) : Formula::disjunction( std::move( kids ) );
    }
    case Op::Iff: {
        const auto& a = f.children()[0];
        const auto& b = f.children()[1];
        // a ↔ b ≡ (a ∧ b) ∨ (¬a ∧ ¬b);  ¬(a ↔ b) ≡ (a ∧ ¬b) ∨ (¬a ∧ b)
        return Formula::disjunction(
            { Formula::conjunction( { nnf( a, false ), nnf( b, negate ) } ),
              Formula::conjunction( { nnf( a, true ), nnf( b, !negate ) } ) } );
    }
    case Op::Next:
        return Formula::next( nnf( f.children()[0], negate ) );
    case Op::Always:
        if ( negate )
            throw std::logic_error( "negated always has no NNF without eventually" );
        return Formula::always( nnf( f.children()[0], false ) );
    }
    return f;
}

} // namespace

Formula negate_nnf( const Formula& f ) { return nnf( f, true ); }

bool is_nnf( const Formula& f )
{
    switch ( f.op() )
    {
    case Op::Not:
        return f.children()[0].op() == Op::Var;
    case Op::Iff:
        return false;
    default:
        for ( const auto& c : f.children() )
            if ( !is_nnf( c ) )
                return false;
        return true;
    }
}

namespace
{

Formula simplify_memo( const Formula& f, std::unordered_map<const void*, Formula>& memo )
{
    if ( auto it = memo.find( f.identity() ); it != memo.end() )
        return it->second;

    Formula out = f;
    switch ( f.op() )
    {
    case Op::False:
    case Op::True:
    case Op::Var:
        break;
    case Op::Not: {
        Formula c = simplify_memo( f.children()[0], memo );
        if ( c.op() == Op::True )
            out = Formula::falsum();
        else if ( c.op() == Op::False )
            out = Formula::verum();
        else if ( c.op() == Op::Not )
            out = c.children()[0];
        else
            out = Formula::negation( c );
        break;
    }
    case Op::And:
    case Op::Or: {
        const Op absorbing = f.op() == Op::And ? Op::False : Op::True;
        const Op neutral = f.op() == Op::And ? Op::True : Op::False;
        std::vector<Formula> kids;
        bool absorbed = false;
        for ( const auto& raw : f.children() )
        {
            Formula c = simplify_memo( raw, memo );
            if ( c.op() == absorbing )
            {
                absorbed = true;
                break;
            }
            if ( c.op() == neutral )
                continue;
            if ( c.op() == f.op() )
                kids.insert( kids.end(), c.children().begin(), c.children().end() );
            else
                kids.push_back( c );
        }
        if ( absorbed )
            out = absorbing == Op::False ? Formula::falsum() : Formula::verum();
        else
            out = f.op() == Op::And ? Formula::conjunction( std::move( kids ) ) : Formula::disjunction( std::move( kids ) );
        break;
    }
    case Op::Iff: {
        Formula a = simplify_memo( f.children()[0], memo );
        Formula b = simplify_memo( f.children()[1], memo );
        auto constant = []( const Formula& x ) { return x.op() == Op::True || x.op() == Op::False; };
        if ( constant( a ) )
            std::swap( a, b );
        if ( constant( b ) )
        {
            if ( constant( a ) )
                out = a.op() == b.op() ? Formula::verum() : Formula::falsum();
            else
                out = b.op() == Op::True ? a : a.op() == Op::Not ? a.children()[0] : Formula::negation( a );
        }
        else
            out = Formula::iff( a, b );
        break;
    }
    case Op::Next:
        out = Formula::next( simplify_memo( f.children()[0], memo ) );
        break;
    case Op::Always:
        out = Formula::always( simplify_memo( f.children()[0], memo ) );
        break;
    }
    memo.emplace( f.identity(), out );
    return out;
}

Formula rename_memo( const Formula& f, const std::function<int( int )>& map,
                     std::unordered_map<const void*, Formula>& memo )
{
    if ( auto it = memo.find( f.identity() ); it != memo.end() )
        return it->second;
    Formula out = f;
    switch ( f.op() )
    {
    case Op::False:
    case Op::True:
        break;
    case Op::Var:
        out = Formula::var( map( f.variable() ) );
        break;
    case Op::Not:
        out = Formula::negation( rename_memo( f.children()[0], map, memo ) );
        break;
    case Op::And:
    case Op::Or: {
        std::vector<Formula> kids;
        for ( const auto& c : f.children() )
            kids.push_back( rename_memo( c, map, memo ) );
        out = f.op() == Op::And ? Formula::conjunction( std::move( kids ) ) : Formula::disjunction( std::move( kids ) );
        break;
    }
    case Op::Iff:
        out = Formula::iff( rename_memo( f.children()[0], map, memo ), rename_memo( f.children()[1], map, memo ) );
        break;
    case Op::Next:
        out = Formula::next( rename_memo( f.children()[0], map, memo ) );
        break;
    case Op::Always:
        out = Formula::always( rename_memo( f.children()[0], map, memo ) );
        break;
    }
    memo.emplace( f.identity(), out );
    return out;
}

void collect( const Formula& f, std::set<int>& out )
{
    if ( f.op() == Op::Var )
        out.insert( f.variable() );
    for ( const auto& c : f.children() )
        collect( c, out );
}

} // namespace

Formula simplify( const Formula& f )
{
    std::unordered_map<const void*, Formula> memo;
    return simplify_memo( f, memo );
}

std::vector<Formula> simplify_all( std::span<const Formula> fs )
{
    std::unordered_map<const void*, Formula> memo;
    std::vector<Formula> out;
    out.reserve( fs.size() );
    for ( const auto& f : fs )
        out.push_back( simplify_memo( f, memo ) );
    return out;
}

Formula rename( const Formula& f, const std::function<int( int )>& map )
{
    std::unordered_map<const void*, Formula> memo;
    return rename_memo( f, map, memo );
}

std::vector<Formula> rename_all( std::span<const Formula> fs, const std::function<int( int )>& map )
{
    std::unordered_map<const void*, Formula> memo;
    std::vector<Formula> out;
    out.reserve( fs.size() );
    for ( const auto& f : fs )
        out.push_back( rename_memo( f, map, memo ) );
    return out;
}

std::set<int> variables( const Formula& f )
{
    std::set<int> out;
    collect( f, out );
    return out;
}

bool equivalent( const Formula& a, const Formula& b )
{
    auto vars = variables( a );
    auto vb = variables( b );
    vars.insert( vb.begin(), vb.end() );
    const std::vector<int> order( vars.begin(), vars.end() );
    if ( order.size() > 24 )
        throw std::invalid_argument( "too many variables for a truth-table check" );

    std::unordered_map<int, bool> value;
    for ( std::uint64_t row = 0; row < ( std::uint64_t{ 1 } << order.size() ); ++row )
    {
        for ( std::size_t i = 0; i < order.size(); ++i )
            value[order[i]] = ( row >> i ) & 1U;
        auto lookup = [&value]( int v ) { return value.at( v ); };
        if ( eval( a, lookup ) != eval( b, lookup ) )
            return false;
    }
    return true;
}

std::string to_string( const Formula& f, const std::function<std::string( int )>& name )
{
    auto wrap = [&]( const Formula& c ) {
        const bool atomic = c.op() == Op::Var || c.op() == Op::True || c.op() == Op::False || c.op() == Op::Not ||
                            c.op() == Op::Next || c.op() == Op::Always;
        return atomic ? to_string( c, name ) : "(" + to_string( c, name ) + ")";
    };
    switch ( f.op() )
    {
    case Op::False:
        return "⊥";
    case Op::True:
        return "⊤";
    case Op::Var:
        return name( f.variable() );
    case Op::Not:
        return "¬" + wrap( f.children()[0] );
    case Op::Next:
        return "◯" + wrap( f.children()[0] );
    case Op::Always:
        return "□" + wrap( f.children()[0] );
    case Op::And:
    case Op::Or: {
        std::string out;
        for ( const auto& c : f.children() )
        {
            if ( !out.empty() )
                out += f.op() == Op::And ? " ∧ " : " ∨ ";
            out += wrap( c );
        }
        return out;
    }
    case Op::Iff:
        return wrap( f.children()[0] ) + " ↔ " + wrap( f.children()[1] );
    }
    return "?";
}

} // namespace migsat

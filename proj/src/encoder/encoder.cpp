#include "migsat/encoder.hpp"

#include <stdexcept>

namespace migsat
{

Encoder::Encoder( const Mig& g ) : _g( g ), _act( g.link_count() ), _inh( g.link_count() ) { require_valid( g ); }

Formula Encoder::activation( std::size_t link )
{
    if ( _act.at( link ) )
        return *_act[link];
    const ResolvedLink& r = _g.resolved( link );
    std::vector<Formula> parts;
    for ( int s : r.sources )
        parts.push_back( Formula::var( s ) );
    for ( int a : r.activators )
        parts.push_back( activation( static_cast<std::size_t>( a ) ) );
    for ( int h : r.inhibitors )
        parts.push_back( inhibition( static_cast<std::size_t>( h ) ) );
    _act[link] = Formula::conjunction( std::move( parts ) );
    return *_act[link];
}

Formula Encoder::inhibition( std::size_t link )
{
    if ( _inh.at( link ) )
        return *_inh[link];
    // NNF of ¬A(X): a disjunction of negated sources, inhibitions of activators and activations of inhibitors.
    const ResolvedLink& r = _g.resolved( link );
    std::vector<Formula> parts;
    for ( int s : r.sources )
        parts.push_back( Formula::negation( Formula::var( s ) ) );
    for ( int a : r.activators )
        parts.push_back( inhibition( static_cast<std::size_t>( a ) ) );
    for ( int h : r.inhibitors )
        parts.push_back( activation( static_cast<std::size_t>( h ) ) );
    _inh[link] = Formula::disjunction( std::move( parts ) );
    return *_inh[link];
}

Formula Encoder::production( std::size_t atom )
{
    if ( _g.is_exogenous( atom ) )
        return Formula::falsum();
    std::vector<Formula> parts;
    for ( std::size_t i = 0; i < _g.link_count(); ++i )
    {
        if ( !is_production( _g.links()[i].kind ) )
            continue;
        for ( int t : _g.resolved( i ).target_atoms )
            if ( t == static_cast<int>( atom ) )
            {
                parts.push_back( activation( i ) );
                break;
            }
    }
    return Formula::disjunction( std::move( parts ) );
}

Formula Encoder::consumption( std::size_t atom )
{
    if ( _g.is_exogenous( atom ) )
        return Formula::falsum();
    std::vector<Formula> parts;
    for ( std::size_t i = 0; i < _g.link_count(); ++i )
    {
        if ( _g.links()[i].kind != LinkKind::ProduceConsume )
            continue;
        for ( int s : _g.resolved( i ).sources )
            if ( s == static_cast<int>( atom ) )
            {
                parts.push_back( activation( i ) );
                break;
            }
    }
    return Formula::disjunction( std::move( parts ) );
}

Formula Encoder::successor_body( std::size_t atom )
{
    const Formula p = Formula::var( static_cast<int>( atom ) );
    return Formula::disjunction( { production( atom ), Formula::conjunction( { p, Formula::negation( consumption( atom ) ) } ) } );
}

Formula activation_formula( const Mig& g, const std::string& link )
{
    Encoder e( g );
    return e.activation( g.link_index( link ) );
}

Formula inhibition_formula( const Mig& g, const std::string& link )
{
    Encoder e( g );
    return e.inhibition( g.link_index( link ) );
}

Formula prod_formula( const Mig& g, const std::string& atom )
{
    Encoder e( g );
    return e.production( g.atom_index( atom ) );
}

Formula cons_formula( const Mig& g, const std::string& atom )
{
    Encoder e( g );
    return e.consumption( g.atom_index( atom ) );
}

Formula SuccessorAxiom::formula() const
{
    return Formula::always( Formula::iff( Formula::next( Formula::var( static_cast<int>( atom ) ) ), body ) );
}

std::vector<Formula> LtlEncoding::formulas() const
{
    std::vector<Formula> out = initial;
    for ( const auto& a : axioms )
        out.push_back( a.formula() );
    return out;
}

namespace
{

Formula init_literal( InitValue v, Formula p ) { return v == InitValue::Present ? p : Formula::negation( std::move( p ) ); }

} // namespace

LtlEncoding encode( const Mig& g )
{
    Encoder e( g );
    LtlEncoding out;
    for ( std::size_t i = 0; i < g.atom_count(); ++i )
        if ( auto v = g.init().get( g.atoms()[i].name ) )
            out.initial.push_back( init_literal( *v, Formula::var( static_cast<int>( i ) ) ) );
    for ( std::size_t i = 0; i < g.atom_count(); ++i )
        out.axioms.push_back( { i, e.successor_body( i ) } );
    return out;
}

VarTable::VarTable( const Mig& g, std::size_t horizon )
{
    for ( std::size_t a = 0; a < g.atom_count(); ++a )
    {
        _first.push_back( static_cast<int>( _atoms.size() ) + 1 );
        _exogenous.push_back( g.is_exogenous( a ) );
        _names.push_back( g.atoms()[a].name );
        if ( g.is_exogenous( a ) )
            _atoms.push_back( { a, std::nullopt } );
        else
            for ( std::size_t t = 0; t <= horizon; ++t )
                _atoms.push_back( { a, t } );
    }
}

int VarTable::var( std::size_t atom, std::size_t time ) const
{
    const int first = _first.at( atom );
    if ( _exogenous[atom] )
        return first;
    const int v = first + static_cast<int>( time );
    if ( v > size() || _atoms[static_cast<std::size_t>( v - 1 )].atom != atom )
        throw std::out_of_range( "time " + std::to_string( time ) + " beyond horizon" );
    return v;
}

std::string VarTable::name( int var ) const
{
    const GroundAtom& g = at( var );
    std::string out = _names[g.atom];
    if ( g.time )
        out += "@" + std::to_string( *g.time );
    return out;
}

Formula ground_at( const VarTable& vars, const Formula& f, std::size_t time )
{
    return rename( f, [&]( int atom ) { return vars.var( static_cast<std::size_t>( atom ), time ); } );
}

GroundTheory ground( const Mig& g, std::size_t horizon )
{
    Encoder e( g );
    GroundTheory t;
    t.horizon = horizon;
    t.vars = VarTable( g, horizon );

    for ( std::size_t i = 0; i < g.atom_count(); ++i )
        if ( auto v = g.init().get( g.atoms()[i].name ) )
            t.formulas.push_back( init_literal( *v, Formula::var( t.vars.var( i, 0 ) ) ) );

    std::vector<std::size_t> endo;
    std::vector<Formula> bodies;
    for ( std::size_t a = 0; a < g.atom_count(); ++a )
        if ( !g.is_exogenous( a ) )
        {
            endo.push_back( a );
            bodies.push_back( e.successor_body( a ) );
        }

    for ( std::size_t i = 0; i < horizon; ++i )
    {
        // One renaming per instant keeps activation formulas shared between axioms.
        const auto grounded =
            rename_all( bodies, [&]( int atom ) { return t.vars.var( static_cast<std::size_t>( atom ), i ); } );
        for ( std::size_t j = 0; j < endo.size(); ++j )
            t.formulas.push_back( Formula::iff( Formula::var( t.vars.var( endo[j], i + 1 ) ), grounded[j] ) );
    }
    return t;
}

Clausifier::Clausifier( int reserved_vars ) { _cs.num_vars = reserved_vars; }

int Clausifier::fresh() { return ++_cs.num_vars; }

int Clausifier::constant_true()
{
    if ( _true == 0 )
    {
        _true = fresh();
        clause( { _true } );
    }
    return _true;
}

void Clausifier::clause( std::vector<int> lits ) { _cs.clauses.push_back( std::move( lits ) ); }

int Clausifier::literal( const Formula& f, bool pos, bool neg )
{
    switch ( f.op() )
    {
    case Op::Var:
        return f.variable();
    case Op::Not:
        return -literal( f.children()[0], neg, pos );
    case Op::True:
        return constant_true();
    case Op::False:
        return -constant_true();
    case Op::Next:
    case Op::Always:
        throw std::logic_error( "temporal operator in a ground formula" );
    default:
        break;
    }

    Def& d = _defs[f.identity()];
    if ( d.var == 0 )
    {
        d.node = f;
        d.var = fresh();
    }
    const int x = d.var;
    const bool need_pos = pos && !d.pos;
    const bool need_neg = neg && !d.neg;
    d.pos = d.pos || pos;
    d.neg = d.neg || neg;
    if ( need_pos )
        implies( { x }, f );
    if ( need_neg )
        implied_by( f, { x } );
    return x;
}

// Clauses for (∧premise) → f.
void Clausifier::implies( const std::vector<int>& premise, const Formula& f )
{
    std::vector<int> c;
    for ( int p : premise )
        c.push_back( -p );
    switch ( f.op() )
    {
    case Op::True:
        return;
    case Op::False:
        clause( c );
        return;
    case Op::And:
        for ( const auto& k : f.children() )
            implies( premise, k );
        return;
    case Op::Or:
        for ( const auto& k : f.children() )
            c.push_back( literal( k, true, false ) );
        clause( c );
        return;
    case Op::Iff: {
        const int a = literal( f.children()[0], true, true );
        const int b = literal( f.children()[1], true, true );
        auto c2 = c;
        c.push_back( -a );
        c.push_back( b );
        c2.push_back( a );
        c2.push_back( -b );
        clause( c );
        clause( c2 );
        return;
    }
    default:
        c.push_back( literal( f, true, false ) );
        clause( c );
        return;
    }
}

// Clauses for f → (∨conclusion).
void Clausifier::implied_by( const Formula& f, const std::vector<int>& conclusion )
{
    std::vector<int> c;
    switch ( f.op() )
    {
    case Op::False:
        return;
    case Op::True:
        clause( conclusion );
        return;
    case Op::Or:
        for ( const auto& k : f.children() )
            implied_by( k, conclusion );
        return;
    case Op::And:
        for ( const auto& k : f.children() )
            c.push_back( -literal( k, false, true ) );
        break;
    case Op::Iff: {
        const int a = literal( f.children()[0], true, true );
        const int b = literal( f.children()[1], true, true );
        std::vector<int> c2{ -a, -b };
        c = { a, b };
        c2.insert( c2.end(), conclusion.begin(), conclusion.end() );
        clause( std::move( c2 ) );
        break;
    }
    default:
        c.push_back( -literal( f, false, true ) );
        break;
    }
    c.insert( c.end(), conclusion.begin(), conclusion.end() );
    clause( std::move( c ) );
}

void Clausifier::add( const Formula& f ) { add_simplified( simplify( f ) ); }

void Clausifier::add_all( std::span<const Formula> fs )
{
    for ( const auto& f : simplify_all( fs ) )
        add_simplified( f );
}

void Clausifier::add_simplified( const Formula& f )
{
    if ( f.op() == Op::Iff )
    {
        auto is_literal = []( const Formula& x ) {
            return x.op() == Op::Var || ( x.op() == Op::Not && x.children()[0].op() == Op::Var );
        };
        Formula lhs = f.children()[0];
        Formula rhs = f.children()[1];
        if ( !is_literal( lhs ) && is_literal( rhs ) )
            std::swap( lhs, rhs );
        if ( is_literal( lhs ) )
        {
            const int l = literal( lhs, true, true );
            implies( { l }, rhs );
            implied_by( rhs, { l } );
            return;
        }
    }
    implies( {}, f );
}

int Clausifier::define( const Formula& f ) { return literal( simplify( f ), true, true ); }

sat::ClauseSet to_clauses( const GroundTheory& t )
{
    Clausifier c( t.vars.size() );
    c.add_all( t.formulas );
    return c.take();
}

Trace decode_model( const GroundTheory& t, const std::vector<bool>& model )
{
    if ( model.size() < static_cast<std::size_t>( t.vars.size() ) + 1 )
        throw std::invalid_argument( "model does not assign every ground atom" );
    const std::size_t atoms = t.vars.atom_names().size();
    Trace out;
    for ( std::size_t i = 0; i <= t.horizon; ++i )
    {
        State s( atoms );
        for ( std::size_t a = 0; a < atoms; ++a )
            s.set( a, model[static_cast<std::size_t>( t.vars.var( a, i ) )] );
        out.states.push_back( std::move( s ) );
    }
    out.stabilized_at = find_stabilization( out.states );
    return out;
}

std::string var_map_text( const VarTable& vars )
{
    std::string out;
    for ( int v = 1; v <= vars.size(); ++v )
        out += "var " + std::to_string( v ) + " " + vars.name( v ) + "\n";
    return out;
}

} // namespace migsat

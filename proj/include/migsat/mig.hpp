#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace migsat
{

enum class AtomKind
{
    Exogenous,
    Endogenous,
};

struct Atom
{
    std::string name;
    AtomKind kind = AtomKind::Endogenous;

    bool operator==( const Atom& ) const = default;
};

enum class InitValue
{
    Present,
    Absent,
};

// Partial assignment of initial values. Atoms without an entry are "free".
class InitialConditions
{
public:
    // Throws std::invalid_argument when the atom already carries the opposite value.
    void set( const std::string& atom, InitValue value );
    void clear( const std::string& atom ) { _entries.erase( atom ); }

    [[nodiscard]] std::optional<InitValue> get( const std::string& atom ) const;
    [[nodiscard]] bool is_free( const std::string& atom ) const { return !_entries.contains( atom ); }
    [[nodiscard]] const std::map<std::string, InitValue>& entries() const { return _entries; }
    [[nodiscard]] std::size_t size() const { return _entries.size(); }

    bool operator==( const InitialConditions& ) const = default;

private:
    std::map<std::string, InitValue> _entries;
};

enum class LinkKind
{
    ProduceKeep,    // P ⊸→ Q, reactants stay
    ProduceConsume, // P ⇒ Q, reactants are consumed
    Activate,
    Inhibit,
};

[[nodiscard]] constexpr bool is_production( LinkKind k )
{
    return k == LinkKind::ProduceKeep || k == LinkKind::ProduceConsume;
}

[[nodiscard]] constexpr bool is_regulation( LinkKind k ) { return !is_production( k ); }

struct Link
{
    std::string id;
    LinkKind kind = LinkKind::ProduceKeep;
    std::vector<std::string> sources;
    std::vector<std::string> target_atoms; // productions only
    std::string target_link;               // regulations only

    bool operator==( const Link& ) const = default;
};

struct StructuralError
{
    enum class Kind
    {
        EmptyName,
        DuplicateAtom,
        DuplicateLink,
        DanglingName,
        EmptySources,
        EmptyTargets,
        MalformedLink,
        RegulationCycle,
    };

    Kind kind;
    std::string message;
    std::string subject; // offending atom name or link id
};

// Resolved, index-based view of a link. Indices are -1 when a name does not resolve.
struct ResolvedLink
{
    std::vector<int> sources;
    std::vector<int> target_atoms;
    int target_link = -1;
    std::vector<int> activators; // γa
    std::vector<int> inhibitors; // γi
    int depth = -1;              // -1 for productions, >= 0 for regulations
};

class Mig
{
public:
    Mig() = default;
    Mig( std::vector<Atom> atoms, InitialConditions init, std::vector<Link> links );

    [[nodiscard]] const std::vector<Atom>& atoms() const { return _atoms; }
    [[nodiscard]] const InitialConditions& init() const { return _init; }
    [[nodiscard]] const std::vector<Link>& links() const { return _links; }

    [[nodiscard]] std::size_t atom_count() const { return _atoms.size(); }
    [[nodiscard]] std::size_t link_count() const { return _links.size(); }

    [[nodiscard]] std::optional<std::size_t> find_atom( const std::string& name ) const;
    [[nodiscard]] std::optional<std::size_t> find_link( const std::string& id ) const;
    // Throw std::out_of_range for unknown names.
    [[nodiscard]] std::size_t atom_index( const std::string& name ) const;
    [[nodiscard]] std::size_t link_index( const std::string& id ) const;

    [[nodiscard]] const ResolvedLink& resolved( std::size_t link ) const { return _resolved[link]; }
    [[nodiscard]] bool is_exogenous( std::size_t atom ) const { return _atoms[atom].kind == AtomKind::Exogenous; }

    // Links ordered so that every regulation comes before the link it targets
    // (deepest regulations first). Only meaningful for well-formed graphs.
    [[nodiscard]] const std::vector<int>& evaluation_order() const { return _eval_order; }
    [[nodiscard]] bool stratified() const { return _stratified; }
    [[nodiscard]] int max_regulation_depth() const;

    [[nodiscard]] std::vector<std::string> free_atoms() const;

    // Functional updates; each returns a new graph.
    [[nodiscard]] Mig with_init( InitialConditions init ) const;
    [[nodiscard]] Mig with_atom_kind( const std::string& atom, AtomKind kind ) const;
    [[nodiscard]] Mig with_links( std::vector<Link> links ) const;

private:
    void build_index();

    std::vector<Atom> _atoms;
    InitialConditions _init;
    std::vector<Link> _links;

    std::unordered_map<std::string, std::size_t> _atom_by_name;
    std::unordered_map<std::string, std::size_t> _link_by_id;
    std::vector<ResolvedLink> _resolved;
    std::vector<int> _eval_order;
    bool _stratified = false;
};

class InvalidMig : public std::runtime_error
{
public:
    explicit InvalidMig( std::vector<StructuralError> errors );
    [[nodiscard]] const std::vector<StructuralError>& errors() const { return _errors; }

private:
    std::vector<StructuralError> _errors;
};

// Every structural violation of g; empty when g is well formed.
[[nodiscard]] std::vector<StructuralError> validate_mig( const Mig& g );

// Throws InvalidMig when validate_mig reports anything.
void require_valid( const Mig& g );

// Splits productions with several targets into singleton-target productions,
// duplicating the regulation tree above each split production.
[[nodiscard]] Mig normalize( const Mig& g );

[[nodiscard]] bool is_normalized( const Mig& g );

enum class Polarity
{
    Activating,
    Inhibiting,
};

// γa(x) / γi(x) as link ids.
[[nodiscard]] std::vector<std::string> direct_regulations( const Mig& g, const std::string& link, Polarity polarity );

// Id-independent structural form: equal for graphs that differ only by link ids,
// declaration order of links, or duplicated identical links.
[[nodiscard]] std::string canonical_form( const Mig& g );

[[nodiscard]] const char* to_string( LinkKind kind );
[[nodiscard]] const char* to_string( AtomKind kind );

} // namespace migsat

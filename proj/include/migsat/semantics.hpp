#pragma once

#include "migsat/mig.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace migsat
{

// Set of present atoms, indexed by the owning graph's atom order.
class State
{
public:
    State() = default;
    explicit State( std::size_t atom_count ) : _present( atom_count, false ) {}
    State( const Mig& g, const std::vector<std::string>& present );

    [[nodiscard]] bool contains( std::size_t atom ) const { return _present[atom]; }
    void set( std::size_t atom, bool present ) { _present[atom] = present; }
    [[nodiscard]] std::size_t size() const { return _present.size(); }

    [[nodiscard]] std::vector<std::string> names( const Mig& g ) const;

    bool operator==( const State& ) const = default;

private:
    std::vector<bool> _present;
};

struct Trace
{
    std::vector<State> states;
    std::optional<std::size_t> stabilized_at;

    bool operator==( const Trace& ) const = default;
};

// Truth value of every link in d, indexed by link.
[[nodiscard]] std::vector<bool> active_links( const Mig& g, const State& d );

[[nodiscard]] bool is_active( const Mig& g, const std::string& link, const State& d );
[[nodiscard]] bool produced( const Mig& g, const std::string& atom, const State& d );
[[nodiscard]] bool consumed( const Mig& g, const std::string& atom, const State& d );

[[nodiscard]] State step( const Mig& g, const State& t );

// A total assignment of the atoms: one entry per atom, in the graph's atom order.
using TotalAssignment = std::vector<bool>;

// Completes the graph's initial conditions with values for the free atoms.
// Overrides win over the graph's own values. Throws std::invalid_argument when
// a free atom is left without a value or an override names an unknown atom.
[[nodiscard]] TotalAssignment complete_init( const Mig& g, const std::map<std::string, bool>& overrides );

// Throws std::invalid_argument for a partial (wrong size) assignment.
[[nodiscard]] Trace simulate( const Mig& g, const TotalAssignment& init, std::size_t horizon );

[[nodiscard]] std::optional<std::size_t> find_stabilization( const std::vector<State>& states );

} // namespace migsat

#pragma once

#include "migsat/encoder.hpp"
#include "migsat/mig.hpp"
#include "migsat/query.hpp"
#include "migsat/semantics.hpp"

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace migsat
{

// A task exceeded a configured limit (free atoms, edit budget).
class LimitError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct ReasonerOptions
{
    std::size_t max_free = 20;
    // 0 picks MIGSAT_THREADS when set, else the hardware concurrency.
    unsigned threads = 0;
};

[[nodiscard]] unsigned effective_threads( unsigned requested );

struct ValidationResult
{
    bool sat = false;
    std::optional<Trace> witness;
};

[[nodiscard]] ValidationResult validate( const Mig& g, std::size_t horizon );

enum class QueryMode
{
    ExistsAll,        // some completion of the free atoms satisfies the query
    ForallEndogenous, // for an exogenous assignment, every endogenous completion does
};

struct QueryStats
{
    std::size_t solver_calls = 0;
    double elapsed_ms = 0;
};

struct QueryResult
{
    QueryMode mode = QueryMode::ExistsAll;
    // Atoms the witnesses assign, in declaration order: every free atom for ExistsAll,
    // the free exogenous atoms for ForallEndogenous.
    std::vector<std::string> free_atoms;
    // Values for free_atoms (true = present), ordered by counting with the first atom most
    // significant and absent before present.
    std::vector<std::vector<bool>> witnesses;
    QueryStats stats;

    [[nodiscard]] std::map<std::string, bool> witness_map( std::size_t i ) const;
};

// Throws QueryError for a query that does not fit the graph or horizon, LimitError when
// there are more free atoms than allowed.
[[nodiscard]] QueryResult query( const Mig& g, std::size_t horizon, const Query& q, QueryMode mode,
                                 const ReasonerOptions& opts = {} );

// Cross-check by simulation. For ExistsAll the witness must assign every free atom; for
// ForallEndogenous it assigns the free exogenous atoms and every endogenous completion is tried.
[[nodiscard]] bool check_witness( const Mig& g, std::size_t horizon, const Query& q,
                                  const std::map<std::string, bool>& witness, QueryMode mode = QueryMode::ExistsAll );

enum class EditKind
{
    FlipKind,
    RemoveLink,
    AddRegulation,
    AddProduction,
};

struct Edit
{
    EditKind kind = EditKind::FlipKind;
    std::string link;       // FlipKind, RemoveLink: the link; AddRegulation: the target link
    std::string source;     // Add*: the single source atom
    std::string target;     // AddProduction: the target atom
    LinkKind new_kind = LinkKind::ProduceKeep; // Add*: the new link's kind; FlipKind: the kind after the flip
    std::string new_id;     // Add*: the id given to the new link
    std::vector<std::string> removed; // RemoveLink: every link removed, cascade included

    [[nodiscard]] std::string describe() const;
};

struct EditProposal
{
    Edit edit;
    Mig resulting_mig;
    QueryResult witnesses;
};

struct UpdateOptions
{
    ReasonerOptions reasoner;
    std::size_t budget = 1;
    QueryMode mode = QueryMode::ExistsAll;
    std::optional<std::chrono::milliseconds> time_budget;
};

struct UpdateResult
{
    // The query already has witnesses on the unchanged graph; no edit is proposed.
    bool already_satisfied = false;
    QueryResult current;
    std::vector<EditProposal> proposals;
    // The time budget ran out before every candidate was checked.
    bool truncated = false;
    std::size_t candidates = 0;
    std::size_t checked = 0;
};

// Single-edit neighbours of g, in proposal order, after dropping duplicates and edits that
// leave the graph unchanged.
[[nodiscard]] std::vector<std::pair<Edit, Mig>> neighbours( const Mig& g );

// Throws LimitError for a budget other than 1.
[[nodiscard]] UpdateResult update( const Mig& g, std::size_t horizon, const Query& q, const UpdateOptions& opts = {} );

[[nodiscard]] const char* to_string( QueryMode mode );
[[nodiscard]] const char* to_string( EditKind kind );

} // namespace migsat

#pragma once

#include "migsat/io/document.hpp"
#include "migsat/reasoner.hpp"

#include <json.hpp>

namespace migsat::io
{

using nlohmann::json;

// {"atoms": [{"name", "kind": exo|endo, "init": present|absent|free}],
//  "links": [{"id", "kind": produce|consume|activate|inhibit, "sources", "targets" | "target"}]}
[[nodiscard]] json graph_to_json( const Mig& g );
// Throws ParseError on a schema violation or an invalid graph.
[[nodiscard]] Mig graph_from_json( const json& j );

[[nodiscard]] json trace_to_json( const Mig& g, const Trace& t );
[[nodiscard]] json query_result_to_json( const QueryResult& r, bool with_stats = true );
[[nodiscard]] json validation_to_json( const Mig& g, const ValidationResult& r );

// Links added and removed relative to `before`, as native link lines.
[[nodiscard]] json graph_diff( const Mig& before, const Mig& after );
[[nodiscard]] json proposal_to_json( const Mig& before, const EditProposal& p, bool with_stats = true );
[[nodiscard]] json update_result_to_json( const Mig& before, const UpdateResult& r, bool with_stats = true );

[[nodiscard]] InitValue parse_init_value( const std::string& s ); // present|absent
[[nodiscard]] AtomKind parse_atom_kind( const std::string& s );  // exo|endo

} // namespace migsat::io

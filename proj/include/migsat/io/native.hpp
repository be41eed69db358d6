#pragma once

#include "migsat/io/document.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace migsat::io
{

// Line-oriented format; `#` starts a comment.
//   atoms exo|endo <name>, ...
//   init +<name>, -<name>, ?<name>, ...        present, absent, free
//   link <id>: <src>, ... -> | => <atom>, ...  production, keeping or consuming its sources
//   link <id>: <src>, ... -> | -| <link>       activating or inhibiting regulation
// A `->` whose single target names a link is a regulation; a name that is both an atom and a
// link id is rejected.
[[nodiscard]] MigDocument parse_native( std::string_view text );

// Atoms in declaration order (one line per run of equal kind), set initial values, links by id.
// Each comment becomes a leading `# ` line. Throws std::invalid_argument for names that are
// not identifiers.
[[nodiscard]] std::string serialize_native( const Mig& g, const std::vector<std::string>& comments = {} );

// One `link` line without the trailing newline.
[[nodiscard]] std::string format_link( const Link& l );

// Orders "2" before "10": digit runs compare numerically.
[[nodiscard]] bool natural_less( std::string_view a, std::string_view b );

} // namespace migsat::io

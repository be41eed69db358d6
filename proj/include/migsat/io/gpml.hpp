#pragma once

#include "migsat/io/document.hpp"

#include <string_view>

namespace migsat::io
{

// Best-effort import of a GPML pathway. Data nodes become atoms; interactions become links
// according to their arrowhead and whether they end on a node or on another interaction's
// anchor. Anything that cannot be mapped is skipped with a warning. Atoms produced by some
// production are endogenous, all others exogenous; no initial value is set.
// Throws ParseError for malformed XML or regulations that cannot be stratified.
[[nodiscard]] MigDocument import_gpml( std::string_view xml );

} // namespace migsat::io

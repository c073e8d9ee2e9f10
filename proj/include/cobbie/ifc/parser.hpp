#pragma once
// ISO 10303-21 (SPF) reader. Single pass over the token stream, then a deferred
// reference-resolution pass so forward references are legal.

#include <iosfwd>
#include <optional>
#include <string>

#include "cobbie/ifc/graph.hpp"

namespace cobbie::ifc {

struct ParseError {
    int line = 0;
    int column = 0;
    std::string message;
};

struct ParseOutcome {
    std::optional<EntityGraph> graph;
    std::optional<ParseError> error;

    bool ok() const { return graph.has_value(); }
};

ParseOutcome parse_step(std::string_view text);
ParseOutcome parse_step_stream(std::istream& in);
ParseOutcome parse_step_file(const std::string& path);

// STEP string payload decoding: '' -> ', \\ -> \, \X2\..\X0\ (UTF-16BE hex),
// \X\hh (Latin-1), \S\c (codepage offset), \N\ newline. Exposed for tests.
std::string decode_step_string(std::string_view raw);

// Tab-separated `id<TAB>type<TAB>attr-count`, one line per entity, ascending id.
std::string diagnostic_dump(const EntityGraph& g);

}  // namespace cobbie::ifc

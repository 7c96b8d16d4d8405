#pragma once

#include <iosfwd>
#include <string>

#include "osn/graph.hpp"

namespace osn {

/// Loads a plain-text edge list: one edge per line, two whitespace-separated
/// node tokens, '#' comments and blank lines ignored. Tokens are mapped to
/// dense NodeIds in first-appearance order; reversed duplicates collapse to
/// one undirected edge. Self-loops and malformed lines raise ParseError with
/// the line number.
SocialGraph load_edge_list(const std::string& path);
SocialGraph load_edge_list(std::istream& in, const std::string& name);

/// Writes the canonical edge-list form: for each node in ascending order,
/// its higher-indexed neighbors, one "u v" line each, LF endings. A graph
/// serializes byte-identically across runs.
void save_edge_list(const SocialGraph& g, const std::string& path);
void save_edge_list(const SocialGraph& g, std::ostream& out);

/// Attaches attributes from a text file: one record per line,
/// "token user_id region_id privacy" with privacy as a 4-bit binary string
/// (e.g. 1101). Nodes absent from the file keep defaults (fresh unique
/// user_id, region 0, privacy 1111). Duplicate user ids, unknown tokens and
/// malformed fields raise errors with the line number.
void load_attributes(const std::string& path, SocialGraph& g);
void load_attributes(std::istream& in, const std::string& name, SocialGraph& g);

void save_attributes(const SocialGraph& g, const std::string& path);
void save_attributes(const SocialGraph& g, std::ostream& out);

}  // namespace osn

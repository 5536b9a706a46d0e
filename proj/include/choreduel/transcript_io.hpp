#pragma once

#include <filesystem>
#include <string>

#include "choreduel/model.hpp"

namespace choreduel {

// Line-delimited JSON, one record per line, keys sorted, rationals canonical:
//   {"algo":"all-to-one","epsilon":"1/4","kappa":"1","n":2}
//   {"assigned":1,"costs":["16/289","4"],"index":1}
//   ...
//   {"agent":1,"assigned_cost":"32",...,"type":"violation","witness":[[...],[...]]}
// The verdict line is absent for an aborted session. Serialization is
// deterministic and loading rejects anything save would not have produced, so
// load∘save is the identity on accepted files.
std::string transcript_to_jsonl(const Transcript& t);

// Throws ParseError on malformed input (bad JSON, wrong field types,
// non-canonical rationals, index gaps, out-of-range assignees, records after
// the verdict).
Transcript transcript_from_jsonl(const std::string& text);

void save_transcript(const std::filesystem::path& path, const Transcript& t);
Transcript load_transcript(const std::filesystem::path& path);

}  // namespace choreduel

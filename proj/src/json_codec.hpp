#pragma once

// Internal JSON helpers shared by the transcript file format and the wire
// protocol. nlohmann::json's default object (std::map) keeps keys sorted, so
// dump() output is deterministic — the round-trip byte-identity of transcript
// files rests on that plus the canonical-rational check in rat_from_json.

#include <cstdint>
#include <string>

#include "json.hpp"

#include "choreduel/errors.hpp"
#include "choreduel/model.hpp"

namespace choreduel::codec {

using nlohmann::json;

json parse_line(const std::string& line);

// Field accessors that throw ParseError with the offending key on any
// missing or mistyped field.
std::int64_t get_int(const json& j, const char* key);
std::string get_string(const json& j, const char* key);
const json& get_array(const json& j, const char* key);

// Rejects any spelling that is not exactly format_rat of the parsed value
// ("2/4", "0/5", "+1", …), so accepted files re-serialize byte-identically.
Rat canonical_rat(const std::string& text, const char* context);
Rat get_rat(const json& j, const char* key);

// Throws ParseError if j holds keys beyond expected_fields.
void expect_size(const json& j, std::size_t expected_fields, const char* context);

json outcome_to_json(const Outcome& outcome);
Outcome outcome_from_json(const json& j, int n);

}  // namespace choreduel::codec

#pragma once

#include <memory>
#include <string>

#include "choreduel/policies.hpp"

namespace choreduel {

inline constexpr int kDefaultReplyTimeoutMs = 10'000;

// Plays `command` (run through /bin/sh) as a black-box policy over
// line-delimited JSON on its standard streams:
//   to the process:   {"type":"hello","n":2,"epsilon":"1/4"}
//   per chore:        {"type":"chore","costs":["16/289","4"],"index":1}
//   reply expected:   {"type":"assign","agent":2}
//   after the duel:   {"type":"end","verdict":{...}}
// Exactly one reply per chore, in order. A dead subprocess, a malformed or
// out-of-range reply, or silence past timeout_ms throws ProtocolError, which
// the duel loop converts into a protocol-failure verdict.
std::unique_ptr<Policy> external_policy(std::string command,
                                        int timeout_ms = kDefaultReplyTimeoutMs);

}  // namespace choreduel

#pragma once

#include <stdexcept>
#include <string>

namespace choreduel {

// Malformed text input (rational literals, transcript files).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A configured size/length cap was exceeded (exact search caps, schedule ceiling).
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// The counterpart algorithm broke the duel contract (bad assignee, bad reply,
// timeout, dead subprocess). Aborts the duel; recorded in the transcript.
class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// A certificate the engine is required to be able to produce failed its own
// check. Signals an implementation bug, never a user error.
class InternalAnomalyError : public std::logic_error {
public:
    explicit InternalAnomalyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace choreduel

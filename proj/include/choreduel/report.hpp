#pragma once

#include <iosfwd>
#include <vector>

#include "choreduel/model.hpp"

namespace choreduel {

// One row per transcript: algo, n, epsilon, chore count, verdict, certified
// ratio, and the (1-eps)*n threshold. Rationals are printed exactly; the ~
// columns carry display-only decimal approximations. An empty list yields
// just the header.
void write_report(std::ostream& out, const std::vector<Transcript>& transcripts);

}  // namespace choreduel

#pragma once

#include <iosfwd>

namespace kmr {

// Runs the verification battery: closed-form identities, homology and end
// relations, closing shape, conjugation, classifying-map regularity, the
// boundary arc, and mesh integrity. Most checks sweep a grid_n^3 parameter
// grid. Prints one PASS/FAIL line per criterion to `out` and returns the
// number of failed criteria.
int run_acceptance(int grid_n, std::ostream& out);

}  // namespace kmr

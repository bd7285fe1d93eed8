#pragma once

#include <span>

namespace pvm {

/// Solves lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i] in place
/// (rhs becomes x). Elimination runs from the last row up to row 0, so for
/// the Robin closure in row 0 a near-singular system shows up in the final
/// pivot. Returns the estimate ||A||_inf / min |pivot| (infinity on a zero
/// pivot). lower[0] and upper[n-1] are ignored.
double solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                         std::span<const double> upper, std::span<double> rhs);

}  // namespace pvm

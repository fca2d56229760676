#pragma once

#include <vector>

namespace gbs {

// Solves the tridiagonal system
//   diag[0] x[0] + super[0] x[1]                            = rhs[0]
//   sub[i-1] x[i-1] + diag[i] x[i] + super[i] x[i+1]        = rhs[i]
//   sub[n-2] x[n-2] + diag[n-1] x[n-1]                      = rhs[n-1]
// by the Thomas algorithm (forward elimination, back substitution), no
// pivoting. The implicit scheme's matrices are strictly diagonally dominant
// M-matrices under the space-step upper bound, which makes the elimination
// unconditionally stable. Throws SingularSystemError on a vanishing pivot.
//
// In-place variant: `diag` and `rhs` are overwritten; the solution lands in
// `rhs`. All spans must have consistent sizes (sub/super of length n-1).
void tridiagonal_solve_in_place(const std::vector<double>& sub,
                                std::vector<double>& diag,
                                const std::vector<double>& super,
                                std::vector<double>& rhs);

// Convenience copy variant returning the solution.
std::vector<double> tridiagonal_solve(const std::vector<double>& sub,
                                      std::vector<double> diag,
                                      const std::vector<double>& super,
                                      std::vector<double> rhs);

}  // namespace gbs

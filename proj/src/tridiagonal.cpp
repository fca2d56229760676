#include "gbs/tridiagonal.hpp"

#include <cmath>
#include <cstddef>

#include "gbs/errors.hpp"

namespace gbs {

void tridiagonal_solve_in_place(const std::vector<double>& sub,
                                std::vector<double>& diag,
                                const std::vector<double>& super,
                                std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    if (rhs.size() != n || sub.size() + 1 != n || super.size() + 1 != n)
        throw InvalidArgument("tridiagonal_solve: inconsistent band sizes");

    // Forward elimination. A pivot is declared singular relative to the
    // largest coefficient seen in its row.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double scale = std::abs(diag[i]) + std::abs(super[i]);
        if (!(std::abs(diag[i]) > 1e-14 * scale) || diag[i] == 0.0)
            throw SingularSystemError("tridiagonal_solve: zero pivot at row " + std::to_string(i));
        const double m = sub[i] / diag[i];
        diag[i + 1] -= m * super[i];
        rhs[i + 1] -= m * rhs[i];
    }
    if (diag[n - 1] == 0.0)
        throw SingularSystemError("tridiagonal_solve: zero pivot at row " + std::to_string(n - 1));

    // Back substitution into rhs.
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - super[i] * rhs[i + 1]) / diag[i];
}

std::vector<double> tridiagonal_solve(const std::vector<double>& sub,
                                      std::vector<double> diag,
                                      const std::vector<double>& super,
                                      std::vector<double> rhs) {
    tridiagonal_solve_in_place(sub, diag, super, rhs);
    return rhs;
}

}  // namespace gbs

#include "gbs/black_scholes.hpp"

#include <cmath>

#include "gbs/errors.hpp"

namespace gbs {

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double bs_closed_form(OptionType type, double s0, double K, double r, double vol, double T) {
    if (!std::isfinite(s0) || !std::isfinite(K) || !std::isfinite(r) || !std::isfinite(vol) ||
        !std::isfinite(T))
        throw InvalidArgument("bs_closed_form: non-finite input");
    if (!(s0 > 0.0) || !(K > 0.0) || !(vol > 0.0) || !(T > 0.0))
        throw InvalidArgument("bs_closed_form: s0, K, vol, T must be positive");

    const double sq = vol * std::sqrt(T);
    const double d1 = (std::log(s0 / K) + (r + 0.5 * vol * vol) * T) / sq;
    const double d2 = d1 - sq;
    const double disc = K * std::exp(-r * T);
    if (type == OptionType::Call) return s0 * norm_cdf(d1) - disc * norm_cdf(d2);
    return disc * norm_cdf(-d2) - s0 * norm_cdf(-d1);
}

}  // namespace gbs

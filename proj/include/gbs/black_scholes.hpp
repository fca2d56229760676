#pragma once

namespace gbs {

enum class OptionType { Call, Put };

// Standard normal CDF via the complementary error function; relative
// accuracy ~1e-15, far below the discretization errors it is used to check.
double norm_cdf(double x);

// Classical constant-volatility Black-Scholes price. Used as the oracle for
// the degenerate band: a call under the uncertain-volatility model prices at
// the band top, a put at the band bottom. Throws InvalidArgument for
// nonpositive s0/K/vol/T or non-finite inputs.
double bs_closed_form(OptionType type, double s0, double K, double r, double vol, double T);

}  // namespace gbs

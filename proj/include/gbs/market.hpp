#pragma once

#include <functional>
#include <string>
#include <vector>

namespace gbs {

// Market data: short rate, reference volatility, volatility-uncertainty band
// and maturity. The band is the interval the adversarial volatility multiple
// lives in; the model's diffusion coefficient is sup over sigma * [low, high].
struct MarketParams {
    double r = 0.0;           // continuously compounded rate, per year
    double sigma = 1.0;       // reference volatility (the experiments use 1)
    double sigma_low = 0.0;   // band lower end
    double sigma_high = 0.0;  // band upper end
    double T = 0.0;           // maturity, years

    // Throws InvalidArgument when 0 < sigma_low <= sigma_high, T > 0, r >= 0
    // or sigma > 0 fail.
    void validate() const;

    bool operator==(const MarketParams&) const = default;
};

// The band actually seen by the schemes: sigma folded into the uncertainty
// multiples, so the solvers can assume a unit reference volatility.
struct EffectiveBand {
    double low = 0.0;
    double high = 0.0;

    static EffectiveBand from(const MarketParams& params);
};

// Adversarial volatility choice for a sign proxy w of the transformed second
// derivative: the sup over the band of (1/2) w Sigma^2 is attained at the
// band ends, high when w >= 0 and low otherwise. Throws InvalidArgument for
// non-finite w.
double sigma_star(double w, const EffectiveBand& band);

enum class PayoffKind { Butterfly, Digital, Call, Put, Tabulated };

enum class Domain { S, X };

// Contract descriptor. The factory functions validate strike layout; the
// right-boundary rule maps reversed time t in [0, T] to the Dirichlet value
// at the right truncation edge:
//   butterfly -> 0                      (payoff vanishes for large S)
//   digital   -> e^{-rt}                (discounted unit)
//   call      -> s_max - K e^{-rt}      (discounted forward intrinsic)
//   put       -> 0
//   tabulated -> last value * e^{-rt}
// A custom rule can be installed via `boundary_override` (used by tests that
// need boundary data consistent with a non-asymptotic payoff).
struct PayoffSpec {
    PayoffKind kind = PayoffKind::Butterfly;
    double k1 = 0.0;                 // butterfly lower strike
    double km = 0.0;                 // butterfly middle strike, (k1 + k2) / 2
    double k2 = 0.0;                 // butterfly upper strike
    double k = 0.0;                  // digital / call / put strike
    std::vector<double> tabulated_values;  // nodal values for Tabulated
    std::function<double(double t, double r, double s_max)> boundary_override;

    static PayoffSpec butterfly(double k1, double k2);
    static PayoffSpec digital(double k);
    static PayoffSpec call(double k);
    static PayoffSpec put(double k);
    static PayoffSpec tabulated(std::vector<double> values);

    // Payoff value at spot s (Tabulated is only defined nodewise and rejects
    // this accessor).
    double operator()(double s) const;

    // Dirichlet value at the right truncation edge at reversed time t.
    double right_boundary(double t, double r, double s_max) const;

    std::string name() const;
};

// Samples the payoff at the given strictly increasing nodes; X-domain nodes
// are exponentiated first. For Tabulated the stored values are returned and
// must match the node count.
std::vector<double> payoff_on_grid(const PayoffSpec& payoff,
                                   const std::vector<double>& nodes,
                                   Domain domain);

}  // namespace gbs

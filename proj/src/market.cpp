#include "gbs/market.hpp"

#include <algorithm>
#include <cmath>

#include "gbs/errors.hpp"

namespace gbs {

void MarketParams::validate() const {
    if (!(sigma_low > 0.0) || !(sigma_high >= sigma_low))
        throw InvalidArgument("sigma_band: need 0 < sigma_low <= sigma_high, got (" +
                              std::to_string(sigma_low) + ", " + std::to_string(sigma_high) + ")");
    if (!(T > 0.0)) throw InvalidArgument("T: must be positive");
    if (!(r >= 0.0)) throw InvalidArgument("r: must be nonnegative");
    if (!(sigma > 0.0)) throw InvalidArgument("sigma: must be positive");
}

EffectiveBand EffectiveBand::from(const MarketParams& params) {
    params.validate();
    return {params.sigma * params.sigma_low, params.sigma * params.sigma_high};
}

double sigma_star(double w, const EffectiveBand& band) {
    if (!std::isfinite(w)) throw InvalidArgument("sigma_star: non-finite selector argument");
    return w >= 0.0 ? band.high : band.low;
}

PayoffSpec PayoffSpec::butterfly(double k1, double k2) {
    if (!(k1 > 0.0) || !(k1 < k2))
        throw InvalidArgument("butterfly strikes: need 0 < k1 < k2");
    PayoffSpec p;
    p.kind = PayoffKind::Butterfly;
    p.k1 = k1;
    p.km = 0.5 * (k1 + k2);
    p.k2 = k2;
    return p;
}

PayoffSpec PayoffSpec::digital(double k) {
    if (!(k > 0.0)) throw InvalidArgument("digital strike: must be positive");
    PayoffSpec p;
    p.kind = PayoffKind::Digital;
    p.k = k;
    return p;
}

PayoffSpec PayoffSpec::call(double k) {
    if (!(k > 0.0)) throw InvalidArgument("call strike: must be positive");
    PayoffSpec p;
    p.kind = PayoffKind::Call;
    p.k = k;
    return p;
}

PayoffSpec PayoffSpec::put(double k) {
    if (!(k > 0.0)) throw InvalidArgument("put strike: must be positive");
    PayoffSpec p;
    p.kind = PayoffKind::Put;
    p.k = k;
    return p;
}

PayoffSpec PayoffSpec::tabulated(std::vector<double> values) {
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidArgument("tabulated payoff: non-finite value");
    PayoffSpec p;
    p.kind = PayoffKind::Tabulated;
    p.tabulated_values = std::move(values);
    return p;
}

double PayoffSpec::operator()(double s) const {
    switch (kind) {
        case PayoffKind::Butterfly:
            return std::max(s - k1, 0.0) - 2.0 * std::max(s - km, 0.0) + std::max(s - k2, 0.0);
        case PayoffKind::Digital:
            return s >= k ? 1.0 : 0.0;
        case PayoffKind::Call:
            return std::max(s - k, 0.0);
        case PayoffKind::Put:
            return std::max(k - s, 0.0);
        case PayoffKind::Tabulated:
            throw InvalidArgument("tabulated payoff has no pointwise form; use payoff_on_grid");
    }
    throw InvalidArgument("unknown payoff kind");
}

double PayoffSpec::right_boundary(double t, double r, double s_max) const {
    if (boundary_override) return boundary_override(t, r, s_max);
    switch (kind) {
        case PayoffKind::Butterfly:
            return 0.0;
        case PayoffKind::Digital:
            return std::exp(-r * t);
        case PayoffKind::Call:
            return s_max - k * std::exp(-r * t);
        case PayoffKind::Put:
            return 0.0;
        case PayoffKind::Tabulated:
            if (tabulated_values.empty()) throw InvalidArgument("tabulated payoff is empty");
            return tabulated_values.back() * std::exp(-r * t);
    }
    throw InvalidArgument("unknown payoff kind");
}

std::string PayoffSpec::name() const {
    switch (kind) {
        case PayoffKind::Butterfly: return "butterfly";
        case PayoffKind::Digital: return "digital";
        case PayoffKind::Call: return "call";
        case PayoffKind::Put: return "put";
        case PayoffKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

std::vector<double> payoff_on_grid(const PayoffSpec& payoff,
                                   const std::vector<double>& nodes,
                                   Domain domain) {
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i - 1] < nodes[i]))
            throw InvalidArgument("payoff_on_grid: nodes must be strictly increasing");

    if (payoff.kind == PayoffKind::Tabulated) {
        if (payoff.tabulated_values.size() != nodes.size())
            throw InvalidArgument("tabulated payoff: have " + std::to_string(payoff.tabulated_values.size()) +
                                  " values for " + std::to_string(nodes.size()) + " nodes");
        return payoff.tabulated_values;
    }

    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double s = domain == Domain::X ? std::exp(nodes[i]) : nodes[i];
        out[i] = payoff(s);
    }
    return out;
}

}  // namespace gbs

#include "mimosec/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mimosec/analytics.hpp"

namespace mimosec {

namespace {

long long safe_ceil(double v) {
    const double c = std::ceil(v - 1e-12);
    if (c >= 9.2233720368547748e18) return std::numeric_limits<long long>::max();
    if (c <= 0.0) return 0;
    return static_cast<long long>(c);
}

int argmax_user(const std::vector<double>& values) {
    return static_cast<int>(std::max_element(values.begin(), values.end()) -
                            values.begin());
}

}  // namespace

ThresholdReport s_epsilon(const SystemConfig& cfg, double epsilon, double delta) {
    if (epsilon <= 0.0 || delta <= 0.0)
        throw ParameterError("s_epsilon needs epsilon > 0 and delta > 0");
    ThresholdReport rep;
    rep.quantity = "S";
    rep.epsilon = epsilon;
    rep.delta = delta;
    const double den = std::pow(2.0, epsilon / cfg.data_fraction()) - 1.0;
    rep.value = std::pow(cfg.m_e() * cfg.rho_max() / den, 1.0 / delta);
    rep.ceil_value = safe_ceil(rep.value);

    const int k = argmax_user(cfg.rho_users());
    const double eps_back = leakage_delta_conjugate(cfg, rep.value, delta, k);
    rep.round_trip_residual = std::abs(eps_back - epsilon) / epsilon;
    return rep;
}

ThresholdReport v_of_r(const SystemConfig& cfg, const std::vector<double>& rates,
                       double delta) {
    if (delta <= 0.0 || delta >= 1.0)
        throw ParameterError("v_of_r needs 0 < delta < 1");
    if (rates.size() != static_cast<std::size_t>(cfg.k_users()))
        throw DimensionError("rate tuple must list one rate per user");
    const auto rec = mmse_coefficients(cfg, EstimatorRegime::NoJam);

    ThresholdReport rep;
    rep.quantity = "V";
    rep.delta = delta;
    rep.rates = rates;
    int arg = 0;
    for (int k = 0; k < cfg.k_users(); ++k) {
        if (rates[k] < 0.0) throw ParameterError("rates must be >= 0");
        const double base = (std::pow(2.0, rates[k] / cfg.data_fraction()) - 1.0) *
                            (cfg.rho_f() + cfg.rho_jam() + 1.0) /
                            (rec.a * cfg.rho_user(k));
        const double v = std::pow(base, 1.0 / (1.0 - delta));
        if (v > rep.value) {
            rep.value = v;
            arg = k;
        }
    }
    rep.ceil_value = safe_ceil(rep.value);
    if (rep.value > 0.0) {
        const double r_back = decodable_rate_delta(cfg, rep.value, delta, arg);
        rep.round_trip_residual = std::abs(r_back - rates[arg]) / rates[arg];
    }
    return rep;
}

ThresholdReport g_epsilon(const SystemConfig& cfg, double epsilon) {
    if (epsilon <= 0.0) throw ParameterError("g_epsilon needs epsilon > 0");
    ThresholdReport rep;
    rep.quantity = "G";
    rep.epsilon = epsilon;
    const double base =
        (1.0 + cfg.m_e() * cfg.rho_max() +
         cfg.m_e() * cfg.rho_max() * cfg.rho_jam() / cfg.rho_r()) *
        (cfg.rho_f() + cfg.rho_jam() + 1.0) *
        (cfg.rho_r() + cfg.rho_jam() + 1.0) / (cfg.rho_min() * cfg.rho_r());
    rep.value = std::pow(base, cfg.data_fraction() / epsilon);
    rep.ceil_value = safe_ceil(rep.value);
    return rep;
}

ThresholdReport s1_epsilon(const SystemConfig& cfg, double epsilon, double delta,
                           double gamma) {
    if (epsilon <= 0.0 || delta <= 0.0 || gamma <= 0.0)
        throw ParameterError("s1_epsilon needs positive epsilon, delta, gamma");
    if (delta + gamma <= 1.0)
        throw ParameterError("s1_epsilon requires delta + gamma > 1");
    ThresholdReport rep;
    rep.quantity = "S1";
    rep.epsilon = epsilon;
    rep.delta = delta;
    rep.gamma = gamma;
    const double num = cfg.rho_max() * cfg.m_e() *
                       std::max(1.0, cfg.rho_jam() / cfg.rho_r());
    const double den = std::pow(2.0, epsilon / cfg.data_fraction()) - 1.0;
    const double expo = 1.0 / std::min(delta, delta + gamma - 1.0);
    rep.value = std::pow(num / den, expo);
    rep.ceil_value = safe_ceil(rep.value);

    const int k = argmax_user(cfg.rho_users());
    const double eps_back = defense_leakage_delta(cfg, rep.value, delta, gamma, k);
    rep.round_trip_residual = std::abs(eps_back - epsilon) / epsilon;
    return rep;
}

ThresholdReport v1_of_r(const SystemConfig& cfg, const std::vector<double>& rates,
                        double delta) {
    if (delta <= 0.0 || delta >= 1.0)
        throw ParameterError("v1_of_r needs 0 < delta < 1");
    if (rates.size() != static_cast<std::size_t>(cfg.k_users()))
        throw DimensionError("rate tuple must list one rate per user");

    ThresholdReport rep;
    rep.quantity = "V1";
    rep.delta = delta;
    rep.rates = rates;
    int arg = 0;
    for (int k = 0; k < cfg.k_users(); ++k) {
        if (rates[k] < 0.0) throw ParameterError("rates must be >= 0");
        const double base = (std::pow(2.0, rates[k] / cfg.data_fraction()) - 1.0) *
                            (cfg.rho_f() + cfg.rho_jam() + 1.0) *
                            (cfg.rho_r() + cfg.rho_jam() + 1.0) /
                            (cfg.rho_r() * cfg.rho_user(k));
        const double v = std::pow(base, 1.0 / (1.0 - delta));
        if (v > rep.value) {
            rep.value = v;
            arg = k;
        }
    }
    rep.ceil_value = safe_ceil(rep.value);
    if (rep.value > 0.0) {
        // Inverse map of the defining base.
        const double sinr = std::pow(rep.value, 1.0 - delta) * cfg.rho_r() *
                            cfg.rho_user(arg) /
                            ((cfg.rho_f() + cfg.rho_jam() + 1.0) *
                             (cfg.rho_r() + cfg.rho_jam() + 1.0));
        const double r_back = cfg.data_fraction() * std::log2(1.0 + sinr);
        rep.round_trip_residual = std::abs(r_back - rates[arg]) / rates[arg];
    }
    return rep;
}

DeltaOptimum optimize_delta(const SystemConfig& cfg, const std::vector<double>& rates,
                            double epsilon, const std::vector<double>& grid) {
    if (grid.empty()) throw EmptyGrid("optimize_delta needs a non-empty delta grid");
    DeltaOptimum best{0.0, std::numeric_limits<double>::infinity()};
    for (double d : grid) {
        if (d <= 0.0 || d >= 1.0)
            throw ParameterError("delta grid points must lie in (0, 1)");
        const double value =
            std::max(v_of_r(cfg, rates, d).value, s_epsilon(cfg, epsilon, d).value);
        if (value < best.value || (value == best.value && d < best.delta)) {
            best = {d, value};
        }
    }
    return best;
}

}  // namespace mimosec

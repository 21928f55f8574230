#include "mimosec/montecarlo.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "mimosec/airsim.hpp"

namespace mimosec {

namespace {

SystemConfig with_m(const SystemConfig& cfg, int m) {
    SystemParams p = cfg.params();
    p.m = m;
    return SystemConfig::validate(p);
}

AttackSpec attack_for(EstimatorRegime regime, int target_user) {
    switch (regime) {
        case EstimatorRegime::NoJam: return AttackSpec::none();
        case EstimatorRegime::PilotMatching: return AttackSpec::pilot_matching(target_user);
        case EstimatorRegime::RandomSubset: return AttackSpec::random_subset_jam(target_user);
    }
    throw ParameterError("unknown estimator regime");
}

EstimatorRegime regime_for(const AttackSpec& attack) {
    switch (attack.kind) {
        case AttackKind::None:
        case AttackKind::DataOnlyJam: return EstimatorRegime::NoJam;
        case AttackKind::PilotMatching: return EstimatorRegime::PilotMatching;
        case AttackKind::RandomSubsetJam: return EstimatorRegime::RandomSubset;
    }
    throw ParameterError("unknown attack kind");
}

/// Per-element E[H_km Hhat_km^*] of the user's own estimate.
double signal_mu(const SystemConfig& cfg, const CoefficientRecord& rec, int user) {
    switch (rec.regime) {
        case EstimatorRegime::NoJam: return rec.a;
        case EstimatorRegime::PilotMatching: return user == rec.target_user ? rec.a : rec.d;
        case EstimatorRegime::RandomSubset:
            return rec.x1 * std::sqrt(static_cast<double>(cfg.t_train()) * cfg.rho_r());
    }
    return 0.0;
}

/// M^2-order coefficient of sum_e E|H_e_e Hhat_k^*|^2 (adversary-row cross
/// energy); the residual part is always M_e * M * alpha_k.
double leak_coef(const SystemConfig& cfg, const CoefficientRecord& rec, int user) {
    switch (rec.regime) {
        case EstimatorRegime::NoJam: return 0.0;
        case EstimatorRegime::PilotMatching:
            return user == rec.target_user ? rec.b * rec.b : 0.0;
        case EstimatorRegime::RandomSubset:
            return rec.x1 * rec.x1 * static_cast<double>(cfg.t_train()) * cfg.rho_jam() /
                   static_cast<double>(cfg.l_pilots());
    }
    return 0.0;
}

double gamma_pdf(double q, int m, double lgamma_m) {
    return std::exp((m - 1) * std::log(q) - q - lgamma_m);
}

}  // namespace

std::vector<McEstimate> mc_estimator_moments(const SystemConfig& cfg,
                                             EstimatorRegime regime, long long trials,
                                             const SeedPath& seed, int target_user) {
    const AttackSpec attack = attack_for(regime, target_user);
    attack.check(cfg);
    const int pm_target = regime == EstimatorRegime::PilotMatching ? target_user : -1;
    const CoefficientRecord rec = mmse_coefficients(cfg, regime, pm_target);
    const PilotSet pilots = build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
    const PilotPolicy policy =
        regime == EstimatorRegime::RandomSubset ? PilotPolicy::RandomPerBlock : PilotPolicy::Static;

    RunningStats alpha_stats, cross_stats, user_cross_stats;
    const int m = cfg.m();
    const int other = cfg.k_users() > 1 ? (target_user + 1) % cfg.k_users() : -1;

    for (long long t = 0; t < trials; ++t) {
        const auto block = static_cast<std::uint64_t>(t);
        const BlockChannels ch = sample_block_channels(cfg, seed, block);
        const PilotAssignment assign = assign_pilots(policy, cfg, seed, block);
        const TrainingObservation obs = synth_training(cfg, ch, pilots, assign, attack, seed);
        const ChannelEstimate est = estimate_channels(cfg, obs, pilots, assign, rec);

        const CRowVector hhat = est.hhat.row(target_user);
        alpha_stats.add(hhat.squaredNorm() / m);
        if (cfg.m_e() > 0) {
            // mean_m Re(Hhat_km^* H_e_m) against the first adversary row
            cross_stats.add((hhat.conjugate().cwiseProduct(ch.h_e.row(0))).sum().real() / m);
        }
        if (other >= 0) {
            user_cross_stats.add((est.hhat.row(target_user) * est.hhat.row(other).adjoint())
                                     .value()
                                     .real() /
                                 m);
        }
    }

    double cross_target = 0.0;
    if (regime == EstimatorRegime::PilotMatching) {
        cross_target = rec.b;
    } else if (regime == EstimatorRegime::RandomSubset && cfg.m_e() > 0) {
        // Pi-mixture mean: only the coinciding adversary row correlates.
        const double j = static_cast<double>(cfg.j_subset());
        const double l = static_cast<double>(cfg.l_pilots());
        cross_target = rec.x1 * (j / l) *
                       std::sqrt(static_cast<double>(cfg.t_train()) * cfg.rho_jam() /
                                 (cfg.m_e() * j));
    }

    double user_cross_target = 0.0;
    if (regime == EstimatorRegime::RandomSubset) {
        // both estimates carry the same summed adversary channel whenever
        // both pilots fall in the jammed subset
        const double j = static_cast<double>(cfg.j_subset());
        const double l = static_cast<double>(cfg.l_pilots());
        const double p_both = l > 1 ? j * (j - 1.0) / (l * (l - 1.0)) : 0.0;
        user_cross_target = rec.x1 * rec.x1 * static_cast<double>(cfg.t_train()) *
                            cfg.rho_jam() * p_both / j;
    }

    std::vector<McEstimate> out;
    out.push_back(alpha_stats.estimate("alpha", rec.alpha(target_user)));
    if (cfg.m_e() > 0) out.push_back(cross_stats.estimate("adv_cross", cross_target));
    if (other >= 0) out.push_back(user_cross_stats.estimate("user_cross", user_cross_target));
    return out;
}

McSinrResult mc_sinr(const SystemConfig& cfg, long long blocks, const SeedPath& seed,
                     int user) {
    const AttackSpec attack = AttackSpec::data_only_jam();
    const CoefficientRecord rec = mmse_coefficients(cfg, EstimatorRegime::NoJam);
    const PilotSet pilots = build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
    const PilotAssignment assign = assign_pilots(PilotPolicy::Static, cfg, seed);

    const int m = cfg.m();
    const double a = rec.a;
    RunningStats t0, t1, t2, t3;

    for (long long bl = 0; bl < blocks; ++bl) {
        const auto block = static_cast<std::uint64_t>(bl);
        const BlockChannels ch = sample_block_channels(cfg, seed, block);
        const TrainingObservation tr = synth_training(cfg, ch, pilots, assign, attack, seed);
        const ChannelEstimate est = estimate_channels(cfg, tr, pilots, assign, rec);
        const SymbolBlock sym = sample_symbols(cfg, 1, seed, block);
        const ChannelInput x = conjugate_precode(est, sym);
        const DataObservation data = synth_data(cfg, ch, x.x, attack, seed);

        const CRowVector hk = ch.h.row(user);
        const std::complex<double> sk = sym.s(user, 0);
        const double denom = std::sqrt(m * rec.alpha(user));

        const std::complex<double> gkk = (hk * est.hhat.row(user).adjoint()).value();
        const std::complex<double> sig = sk * (m * a) / denom;
        const std::complex<double> self = sk * (gkk - m * a) / denom;
        std::complex<double> inter = 0.0;
        for (int j = 0; j < cfg.k_users(); ++j) {
            if (j == user) continue;
            inter += (hk * est.hhat.row(j).adjoint()).value() * sym.s(j, 0) /
                     std::sqrt(m * rec.alpha(j));
        }
        const std::complex<double> jam_noise = data.y(user, 0) - (hk * x.x.col(0)).value();

        t0.add(std::norm(sig));
        t1.add(std::norm(self));
        t2.add(std::norm(inter));
        t3.add(std::norm(jam_noise));
    }

    const SinrDecomposition an = sinr_conjugate(cfg, static_cast<double>(m), user);
    // physical jam power at the user is M_e * rho_jam with CN(0, rho_jam I) jamming
    const double jam_var = (attack.jams_data_phase() ? cfg.m_e() * cfg.rho_jam() : 0.0) + 1.0;

    McSinrResult res;
    res.var_t0 = t0.estimate("var_t0", an.var_t0);
    res.var_t1 = t1.estimate("var_t1", an.var_t1);
    res.var_t2 = t2.estimate("var_t2", an.var_t2);
    res.var_t3 = t3.estimate("var_t3", jam_var);
    res.empirical_sinr =
        t0.mean() / std::max(t1.mean() + t2.mean() + t3.mean(), 1e-300);
    res.analytic_sinr = an.sinr;
    return res;
}

McLeakageResult mc_leakage(const SystemConfig& cfg, double delta, long long trials,
                           const SeedPath& seed, int user) {
    const AttackSpec attack = AttackSpec::none();
    const CoefficientRecord rec = mmse_coefficients(cfg, EstimatorRegime::NoJam);
    const PilotSet pilots = build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
    const PilotAssignment assign = assign_pilots(PilotPolicy::Static, cfg, seed);

    const int m = cfg.m();
    const int me = cfg.m_e();
    const double alpha = rec.alpha(user);
    const double rho_k = cfg.rho_user(user);
    RunningStats cross, power, indep;

    for (long long t = 0; t < trials; ++t) {
        const auto block = static_cast<std::uint64_t>(t);
        const BlockChannels ch = sample_block_channels(cfg, seed, block);
        const TrainingObservation tr = synth_training(cfg, ch, pilots, assign, attack, seed);
        const ChannelEstimate est = estimate_channels(cfg, tr, pilots, assign, rec);

        const CRowVector hhat = est.hhat.row(user);
        if (me > 0) {
            double cross_sum = 0.0;
            for (int e = 0; e < me; ++e)
                cross_sum += std::norm((ch.h_e.row(e) * hhat.adjoint()).value());
            cross.add(cross_sum / (me * m));
            power.add(rho_k * cross_sum / (std::pow(m, 1.0 + delta) * alpha));
            indep.add((std::conj(hhat(0)) * ch.h_e(0, 0)).real());
        }
    }

    McLeakageResult res;
    res.cross_moment = cross.estimate("cross_moment", alpha);
    res.adv_power =
        power.estimate("adv_power", me * rho_k / std::pow(m, delta));
    res.independence = indep.estimate("independence", 0.0);
    return res;
}

std::vector<McLlnPoint> mc_lln(const SystemConfig& cfg, const std::vector<int>& m_grid,
                               long long trials, const SeedPath& seed, int target_user) {
    std::vector<McLlnPoint> out;
    out.reserve(m_grid.size());
    const double rho_k = cfg.rho_user(target_user);
    const AttackSpec attack = AttackSpec::pilot_matching(target_user);

    for (std::size_t gi = 0; gi < m_grid.size(); ++gi) {
        const int m = m_grid[gi];
        const SystemConfig cm = with_m(cfg, m);
        attack.check(cm);
        const CoefficientRecord rec =
            mmse_coefficients(cm, EstimatorRegime::PilotMatching, target_user);
        const PilotSet pilots =
            build_orthogonal_pilots(cm.l_pilots(), cm.t_train(), cm.rho_r());
        const PilotAssignment assign = assign_pilots(PilotPolicy::Static, cm, seed);
        const SeedPath ms = seed / "lln" / static_cast<std::uint64_t>(gi);
        const double alpha = rec.alpha_target;

        RunningStats v_stats, w_stats, bound_stats, km_stats;
        for (long long t = 0; t < trials; ++t) {
            const auto block = static_cast<std::uint64_t>(t);
            const BlockChannels ch = sample_block_channels(cm, ms, block);
            const TrainingObservation tr = synth_training(cm, ch, pilots, assign, attack, ms);
            const ChannelEstimate est = estimate_channels(cm, tr, pilots, assign, rec);
            const CRowVector tilde = construct_tilde_channel(cm, ch, rec, ms);

            const CRowVector hk = ch.h.row(target_user);
            const CRowVector hhat = est.hhat.row(target_user);
            const double mm = static_cast<double>(m) * static_cast<double>(m);
            const double v = std::norm((hk * hhat.adjoint()).value()) / (alpha * mm);
            const double w = std::norm((hk * tilde.adjoint()).value()) / (alpha * mm);
            v_stats.add(v);
            w_stats.add(w);
            bound_stats.add(lln_rate_bound_sample(v, w, rho_k, static_cast<double>(m)));
            km_stats.add((ch.h_e * hhat.adjoint()).squaredNorm() / mm);
        }

        McLlnPoint pt;
        pt.m = static_cast<double>(m);
        pt.stats.v_mean = v_stats.mean();
        pt.stats.w_mean = w_stats.mean();
        pt.stats.gamma_k = rec.a * rec.a;
        pt.stats.pi_k = 2.0 * rec.a * rec.a + rec.b * rec.b + rec.c * rec.c;
        pt.stats.v_limit = pt.stats.gamma_k / alpha;
        pt.stats.w_limit = rec.b * rec.b / alpha;
        pt.stats.bound_estimate = cfg.data_fraction() * bound_stats.mean();
        pt.k_m_diag = km_stats.mean();
        out.push_back(std::move(pt));
    }
    return out;
}

McDistributionIdentity mc_distribution_identity(const SystemConfig& cfg, long long trials,
                                                const SeedPath& seed, int target_user) {
    const AttackSpec attack = AttackSpec::pilot_matching(target_user);
    attack.check(cfg);
    const CoefficientRecord rec =
        mmse_coefficients(cfg, EstimatorRegime::PilotMatching, target_user);
    const PilotSet pilots = build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
    const PilotAssignment assign = assign_pilots(PilotPolicy::Static, cfg, seed);
    const int m = cfg.m();

    RunningStats a_cross, b_cross, a_second, b_second;
    for (long long t = 0; t < trials; ++t) {
        const auto block = static_cast<std::uint64_t>(t);
        const BlockChannels ch = sample_block_channels(cfg, seed, block);
        const TrainingObservation tr = synth_training(cfg, ch, pilots, assign, attack, seed);
        const ChannelEstimate est = estimate_channels(cfg, tr, pilots, assign, rec);
        const CRowVector tilde = construct_tilde_channel(cfg, ch, rec, seed);

        const CRowVector hhat = est.hhat.row(target_user);
        const CRowVector hk = ch.h.row(target_user);
        a_cross.add((hhat.conjugate().cwiseProduct(ch.h_e.row(0))).sum().real() / m);
        b_cross.add((tilde.conjugate().cwiseProduct(hk)).sum().real() / m);
        a_second.add(hhat.squaredNorm() / m);
        b_second.add(tilde.squaredNorm() / m);
    }

    const double second_target = rec.a * rec.a + rec.b * rec.b + rec.c * rec.c;
    McDistributionIdentity res;
    res.pair_a_cross = a_cross.estimate("hhat_he_cross", rec.b);
    res.pair_b_cross = b_cross.estimate("tilde_hk_cross", rec.b);
    res.pair_a_second = a_second.estimate("hhat_second", second_target);
    res.pair_b_second = b_second.estimate("tilde_second", second_target);
    const auto paired_z = [](const McEstimate& x, const McEstimate& y) {
        const double se = std::sqrt(x.std_error * x.std_error + y.std_error * y.std_error);
        return se > 0.0 ? (x.estimate - y.estimate) / se : 0.0;
    };
    res.cross_z = paired_z(res.pair_a_cross, res.pair_b_cross);
    res.second_z = paired_z(res.pair_a_second, res.pair_b_second);
    return res;
}

WaterfillingSolution solve_waterfilling(int m, double rho_f, double data_fraction,
                                        double tolerance) {
    if (m < 1) throw ParameterError("water-filling needs at least one antenna");
    if (rho_f <= 0.0) throw ParameterError("water-filling needs a positive power budget");
    if (tolerance <= 0.0) throw ParameterError("water-filling tolerance must be positive");

    const double lg = std::lgamma(static_cast<double>(m));
    using quad = boost::math::quadrature::gauss_kronrod<double, 61>;

    // Essentially all Gamma(m, 1) mass lives in m +- O(sqrt(m)); a finite
    // window keeps the quadrature's adaptive refinement centered on the
    // peak even for very large m, where the semi-infinite map loses it.
    const double spread = 60.0 * std::sqrt(static_cast<double>(m)) + 60.0;
    const double q_hi = static_cast<double>(m) + spread;

    // E[(lambda - 1/Q)^+] over Q ~ Gamma(m, 1); increasing in lambda.
    const auto spent = [&](double lambda) {
        if (lambda <= 0.0) return 0.0;
        const double c = 1.0 / lambda;
        if (c >= q_hi) return 0.0;
        return quad::integrate(
            [&](double q) { return (lambda - 1.0 / q) * gamma_pdf(q, m, lg); }, c,
            q_hi, 15, 1e-12);
    };

    double lo = 0.0;
    double hi = rho_f + (m > 1 ? 1.0 / (m - 1) : 1.0) + 1.0;
    int guard = 0;
    while (spent(hi) < rho_f) {
        hi *= 2.0;
        if (++guard > 60) throw ConvergenceError("water-filling bracket expansion failed");
    }

    double mid = 0.5 * (lo + hi);
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double g = spent(mid);
        residual = std::abs(g - rho_f);
        // accept only from below: the exact solution saturates the
        // lambda <= rho_f + 1/(M-1) bound, so never overshoot it
        if (g <= rho_f && residual <= tolerance) {
            converged = true;
            break;
        }
        (g < rho_f ? lo : hi) = mid;
    }
    if (!converged)
        throw ConvergenceError("water-filling bisection did not reach tolerance");

    WaterfillingSolution sol;
    sol.lambda = mid;
    sol.residual = residual;
    sol.m = m;
    sol.rho_f = rho_f;
    const double c = 1.0 / mid;
    sol.capacity = data_fraction *
                   quad::integrate(
                       [&](double q) { return std::log2(mid * q) * gamma_pdf(q, m, lg); },
                       c, q_hi, 15, 1e-12);
    return sol;
}

McEndToEnd mc_end_to_end(const SystemConfig& cfg, const AttackSpec& attack,
                         bool defense, double delta, long long blocks,
                         const SeedPath& seed, int user, const BlockSink& sink) {
    attack.check(cfg);
    const EstimatorRegime regime = regime_for(attack);
    const int pm_target =
        regime == EstimatorRegime::PilotMatching ? attack.target_user : -1;
    const CoefficientRecord rec = mmse_coefficients(cfg, regime, pm_target);
    const PilotSet pilots = build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
    const PilotPolicy policy = defense ? PilotPolicy::RandomPerBlock : PilotPolicy::Static;

    const int m = cfg.m();
    const int me = cfg.m_e();
    const double alpha = rec.alpha(user);
    const double rho_k = cfg.rho_user(user);
    const double mu = signal_mu(cfg, rec, user);
    const double m_delta = std::pow(static_cast<double>(m), delta);
    const double denom = std::sqrt(std::pow(static_cast<double>(m), 1.0 + delta) * alpha);

    RunningStats sig_stats, rest_stats, leak_stats;
    for (long long bl = 0; bl < blocks; ++bl) {
        const auto block = static_cast<std::uint64_t>(bl);
        const BlockChannels ch = sample_block_channels(cfg, seed, block);
        const PilotAssignment assign = assign_pilots(policy, cfg, seed, block);
        const TrainingObservation tr = synth_training(cfg, ch, pilots, assign, attack, seed);
        const ChannelEstimate est = estimate_channels(cfg, tr, pilots, assign, rec);
        const SymbolBlock sym = sample_symbols(cfg, 1, seed, block);
        const ChannelInput x = delta_conjugate_precode(est, sym, delta);
        const DataObservation data = synth_data(cfg, ch, x.x, attack, seed);

        const std::complex<double> sig = sym.s(user, 0) * (m * mu) / denom;
        sig_stats.add(std::norm(sig));
        rest_stats.add(std::norm(data.y(user, 0) - sig));

        double leak = 0.0;
        if (me > 0) {
            double cross_sum = 0.0;
            for (int e = 0; e < me; ++e)
                cross_sum += std::norm((ch.h_e.row(e) * est.hhat.row(user).adjoint()).value());
            leak = rho_k * cross_sum / (m_delta * m * alpha);
            leak_stats.add(leak);
        }
        if (sink) sink(bl, std::norm(sig), std::norm(data.y(user, 0) - sig), leak);
    }

    // Exact second-moment SINR of the simulated chain: numerator
    // M^{1-delta} rho_k mu^2 / alpha, interference rho_f / M^delta plus the
    // received jam power and unit noise.
    const double jam_var = (attack.jams_data_phase() && me > 0) ? me * cfg.rho_jam() : 0.0;
    const double num = std::pow(static_cast<double>(m), 1.0 - delta) * rho_k * mu * mu / alpha;
    const double den = cfg.rho_f() / m_delta + jam_var + 1.0;
    const double analytic_sinr = num / den;
    const double fr = cfg.data_fraction();
    const double analytic_rate = fr * std::log2(1.0 + analytic_sinr);

    const double s_num = sig_stats.mean();
    const double s_den = rest_stats.mean();
    const double sinr_hat = s_num / std::max(s_den, 1e-300);
    const double rate_hat = fr * std::log2(1.0 + sinr_hat);
    // delta-method standard error of (T_d/T) log2(1 + num/den)
    double rate_se = 0.0;
    if (s_num > 0.0 && s_den > 0.0) {
        const double rel = std::sqrt(std::pow(sig_stats.std_error() / s_num, 2) +
                                     std::pow(rest_stats.std_error() / s_den, 2));
        rate_se = fr / std::log(2.0) * sinr_hat / (1.0 + sinr_hat) * rel;
    }

    McEndToEnd res;
    res.decodable_rate = {"decodable_rate", rate_hat, rate_se, blocks, analytic_rate};
    const double leak_target =
        me > 0 ? rho_k * (std::pow(static_cast<double>(m), 1.0 - delta) *
                              leak_coef(cfg, rec, user) / alpha +
                          me / m_delta)
               : 0.0;
    res.leakage_power = leak_stats.estimate("leakage_power", leak_target);
    res.empirical_sinr = sinr_hat;
    res.analytic_rate = analytic_rate;
    return res;
}

}  // namespace mimosec

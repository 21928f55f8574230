#include "mimosec/runner.hpp"

#include <atomic>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include "mimosec/airsim.hpp"
#include "mimosec/analytics.hpp"
#include "mimosec/thresholds.hpp"

namespace mimosec {

using namespace nlohmann::literals;

namespace {

using nlohmann::json;

/// Runs f(0..n-1) on `workers` threads. Work is claimed through an atomic
/// index and every result lands in a caller-owned slot keyed by index, so
/// the outcome is identical for any worker count.
template <typename F>
void for_indexed(long long n, int workers, F&& f) {
    if (workers <= 1 || n <= 1) {
        for (long long i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<long long> next{0};
    auto worker = [&] {
        for (;;) {
            const long long i = next.fetch_add(1);
            if (i >= n) return;
            f(i);
        }
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(std::min<long long>(workers, n));
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

SystemConfig make_cfg(int m, int me, int k, long long t, long long t_r, double rho_r,
                      double rho_k, double rho_jam, double delta, double gamma,
                      long long l, long long j) {
    SystemParams p;
    p.m = m;
    p.m_e = me;
    p.k_users = k;
    p.t_block = t;
    p.t_train = t_r;
    p.rho_r = rho_r;
    p.rho_users.assign(static_cast<std::size_t>(k), rho_k);
    p.rho_jam = rho_jam;
    p.delta = delta;
    p.gamma = gamma;
    p.l_pilots = l;
    p.j_subset = j;
    return SystemConfig::validate(p);
}

json base_provenance(const std::string& subcommand, std::uint64_t seed, const json& config) {
    json p;
    p["tool"] = kToolName;
    p["version"] = kToolVersion;
    p["subcommand"] = subcommand;
    p["seed"] = seed;
    p["config"] = config;
    p["config_hash"] = config_hash(config);
    return p;
}

double max_abs_z(const std::vector<McEstimate>& ests) {
    double z = 0.0;
    for (const auto& e : ests) z = std::max(z, std::abs(e.z_score()));
    return z;
}

double paired_z(const McEstimate& a, const McEstimate& b) {
    const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    return se > 0.0 ? (a.estimate - b.estimate) / se : 0.0;
}

}  // namespace

json default_config() {
    json j;
    j["system"] = {{"m", 128}, {"m_e", 1}, {"k_users", 4}, {"t_block", 200}, {"t_train", 20}};
    j["power"] = {{"rho_r", 1.0}, {"rho_jam", 0.0}, {"rho_users", 1.0}};
    j["beamforming"] = {{"kind", "conjugate"}, {"delta", 0.0}};
    j["attack"] = {{"kind", "none"}, {"target_user", 0}, {"j_subset", 1}};
    j["defense"] = {{"l_pilots", 20}, {"randomize_assignment", false}, {"gamma", 1.0}};
    j["mc"] = {{"trials", 1000}, {"seed", 1}};
    return j;
}

json load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParameterError("cannot open config file: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw ParameterError("config parse error in " + path + ": " + e.what());
    }
    return j;
}

void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ParameterError("override must look like section.key=value: " + assignment);
    std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    std::string pointer = "/";
    for (char c : key) pointer += (c == '.') ? '/' : c;
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // bare strings (e.g. attack kinds) need no quoting
    }
    config[json::json_pointer(pointer)] = value;
}

RunSetup parse_config(const json& user) {
    json j = default_config();
    j.merge_patch(user);

    SystemParams p;
    try {
        const auto& sys = j.at("system");
        p.m = sys.at("m").get<int>();
        p.m_e = sys.at("m_e").get<int>();
        p.k_users = sys.at("k_users").get<int>();
        p.t_block = sys.at("t_block").get<long long>();
        p.t_train = sys.at("t_train").get<long long>();

        const auto& pow = j.at("power");
        p.rho_r = pow.at("rho_r").get<double>();
        p.rho_jam = pow.at("rho_jam").get<double>();
        const auto& ru = pow.at("rho_users");
        if (ru.is_array())
            p.rho_users = ru.get<std::vector<double>>();
        else
            p.rho_users.assign(static_cast<std::size_t>(p.k_users), ru.get<double>());

        p.delta = j.at("beamforming").at("delta").get<double>();
        const auto& def = j.at("defense");
        p.gamma = def.at("gamma").get<double>();
        p.l_pilots = def.at("l_pilots").get<long long>();
        p.j_subset = j.at("attack").at("j_subset").get<long long>();
    } catch (const json::exception& e) {
        throw ParameterError(std::string("bad config structure: ") + e.what());
    }

    RunSetup setup{SystemConfig::validate(p), AttackSpec::none(),
                   BeamformerKind::Conjugate, p.delta,
                   false, 0, 0};

    const std::string kind = j.at("beamforming").at("kind").get<std::string>();
    if (kind == "conjugate")
        setup.beamformer = BeamformerKind::Conjugate;
    else if (kind == "delta_conjugate")
        setup.beamformer = BeamformerKind::DeltaConjugate;
    else
        throw ParameterError("unknown beamforming kind: " + kind);
    if (setup.beamformer == BeamformerKind::Conjugate) setup.delta = 0.0;

    const std::string atk = j.at("attack").at("kind").get<std::string>();
    const int target = j.at("attack").at("target_user").get<int>();
    if (atk == "none")
        setup.attack = AttackSpec::none();
    else if (atk == "data_only_jam")
        setup.attack = AttackSpec::data_only_jam();
    else if (atk == "pilot_matching")
        setup.attack = AttackSpec::pilot_matching(target);
    else if (atk == "random_subset_jam")
        setup.attack = AttackSpec::random_subset_jam(target);
    else
        throw ParameterError("unknown attack kind: " + atk);
    setup.attack.check(setup.cfg);

    setup.randomize_assignment = j.at("defense").at("randomize_assignment").get<bool>();
    setup.trials = j.at("mc").at("trials").get<long long>();
    setup.seed = j.at("mc").at("seed").get<std::uint64_t>();
    return setup;
}

namespace {

json figure_config(int id) {
    json j = default_config();
    switch (id) {
        case 2:  // secure rate vs antenna count, one curve per adversary size
            j["system"] = {{"m", 1000}, {"m_e", 1}, {"k_users", 10},
                           {"t_block", 1000}, {"t_train", 10}};
            j["power"] = {{"rho_r", 0.9}, {"rho_jam", 1.0}, {"rho_users", 1.0}};
            j["defense"]["l_pilots"] = 10;
            break;
        case 3:  // secrecy antenna threshold S(eps) vs eps
            j["system"] = {{"m", 100}, {"m_e", 1}, {"k_users", 1},
                           {"t_block", 5}, {"t_train", 1}};
            j["power"] = {{"rho_r", 1.0}, {"rho_jam", 0.0}, {"rho_users", 1.0}};
            j["beamforming"] = {{"kind", "delta_conjugate"}, {"delta", 0.7}};
            j["defense"]["l_pilots"] = 1;
            break;
        case 4:  // max(V(R), S(eps)) vs delta
            j["system"] = {{"m", 100}, {"m_e", 1}, {"k_users", 10},
                           {"t_block", 50}, {"t_train", 10}};
            j["power"] = {{"rho_r", 0.9}, {"rho_jam", 1.0}, {"rho_users", 1.0}};
            j["defense"]["l_pilots"] = 10;
            j["thresholds"] = {{"epsilon", 0.05}, {"rate", 0.2}};
            break;
        case 5:  // defense antenna threshold G(eps) vs eps
            j["system"] = {{"m", 200}, {"m_e", 1}, {"k_users", 5},
                           {"t_block", 30}, {"t_train", 10}};
            j["power"] = {{"rho_r", 10.0}, {"rho_jam", 1.0}, {"rho_users", 1.0}};
            j["defense"]["l_pilots"] = 10;
            break;
        case 6:  // achievable eps at fixed M vs training fraction
            j["system"] = {{"m", 200}, {"m_e", 1}, {"k_users", 5},
                           {"t_block", 300000}, {"t_train", 200}};
            j["power"] = {{"rho_r", 1.0}, {"rho_jam", 1.0}, {"rho_users", 1.0}};
            j["defense"]["l_pilots"] = 200;
            break;
        default:
            throw UnknownFigure("figure id must be in 2..6");
    }
    return j;
}

SystemConfig cfg_with(const SystemConfig& cfg, int m, int me) {
    SystemParams p = cfg.params();
    p.m = m;
    p.m_e = me;
    return SystemConfig::validate(p);
}

ResultTable figure2(const RunSetup& setup, int workers) {
    ResultTable t;
    const std::vector<int> me_grid{1, 2, 4, 8};
    t.columns = {"m"};
    for (int me : me_grid) t.columns.push_back("rate_me_" + std::to_string(me));
    std::vector<int> m_grid;
    for (int e = 4; e <= 14; ++e) m_grid.push_back(1 << e);
    t.rows.resize(m_grid.size());
    for_indexed(static_cast<long long>(m_grid.size()), workers, [&](long long i) {
        const int m = m_grid[static_cast<std::size_t>(i)];
        std::vector<double> row{static_cast<double>(m)};
        for (int me : me_grid) {
            const SystemConfig c = cfg_with(setup.cfg, m, me);
            row.push_back(rate_no_training_jamming(c, static_cast<double>(m)).rate);
        }
        t.rows[static_cast<std::size_t>(i)] = std::move(row);
    });
    return t;
}

ResultTable figure3(const RunSetup& setup, int workers) {
    ResultTable t;
    t.columns = {"epsilon", "s_value", "s_ceil"};
    std::vector<double> eps;
    for (int i = 2; i <= 60; ++i) eps.push_back(0.005 * i);
    t.rows.resize(eps.size());
    const double delta = setup.delta > 0.0 ? setup.delta : 0.7;
    for_indexed(static_cast<long long>(eps.size()), workers, [&](long long i) {
        const auto rep = s_epsilon(setup.cfg, eps[static_cast<std::size_t>(i)], delta);
        t.rows[static_cast<std::size_t>(i)] = {rep.epsilon, rep.value,
                                               static_cast<double>(rep.ceil_value)};
    });
    return t;
}

ResultTable figure4(const RunSetup& setup, const json& config, int workers) {
    ResultTable t;
    t.columns = {"delta", "v_value", "s_value", "max_vs"};
    const double eps = config.value("/thresholds/epsilon"_json_pointer, 0.05);
    const double rate = config.value("/thresholds/rate"_json_pointer, 0.2);
    const std::vector<double> rates(static_cast<std::size_t>(setup.cfg.k_users()), rate);
    std::vector<double> deltas;
    for (int i = 1; i <= 49; ++i) deltas.push_back(0.02 * i);
    t.rows.resize(deltas.size());
    for_indexed(static_cast<long long>(deltas.size()), workers, [&](long long i) {
        const double d = deltas[static_cast<std::size_t>(i)];
        const double v = v_of_r(setup.cfg, rates, d).value;
        const double s = s_epsilon(setup.cfg, eps, d).value;
        t.rows[static_cast<std::size_t>(i)] = {d, v, s, std::max(v, s)};
    });
    return t;
}

ResultTable figure5(const RunSetup& setup, int workers) {
    ResultTable t;
    t.columns = {"epsilon", "g_value", "g_ceil"};
    std::vector<double> eps;
    for (int i = 3; i <= 30; ++i) eps.push_back(static_cast<double>(i) / 30.0);
    t.rows.resize(eps.size());
    for_indexed(static_cast<long long>(eps.size()), workers, [&](long long i) {
        const auto rep = g_epsilon(setup.cfg, eps[static_cast<std::size_t>(i)]);
        t.rows[static_cast<std::size_t>(i)] = {rep.epsilon, rep.value,
                                               static_cast<double>(rep.ceil_value)};
    });
    return t;
}

ResultTable figure6(const RunSetup& setup, int workers) {
    ResultTable t;
    t.columns = {"t_r_over_t", "epsilon", "t_d_over_t"};
    const SystemParams base = setup.cfg.params();
    const double total = static_cast<double>(base.t_block);
    const double m = static_cast<double>(base.m);
    const double f_lo = static_cast<double>(base.t_train) / total;
    const double f_hi = 0.999;
    const int points = 40;
    t.rows.resize(points);
    for_indexed(points, workers, [&](long long i) {
        const double u = static_cast<double>(i) / (points - 1);
        const double f = f_lo * std::pow(f_hi / f_lo, u);
        SystemParams p = base;
        p.t_train = std::max<long long>(p.k_users,
                                        static_cast<long long>(std::llround(f * total)));
        p.t_train = std::min(p.t_train, p.t_block - 1);
        p.l_pilots = p.t_train;
        SystemConfig probe = SystemConfig::validate(p);
        // training power rule rho_r = (T_d / T_r) rho_f
        p.rho_r = (static_cast<double>(probe.t_data()) / static_cast<double>(p.t_train)) *
                  probe.rho_f();
        const SystemConfig cfg = SystemConfig::validate(p);
        // invert the antenna threshold at the configured M:
        // G(eps) = base^{(T_d/T)/eps}, so eps = (T_d/T) ln(base) / ln(M)
        const double g_base = std::pow(g_epsilon(cfg, 1.0).value, 1.0 / cfg.data_fraction());
        const double eps = cfg.data_fraction() * std::log(g_base) / std::log(m);
        t.rows[static_cast<std::size_t>(i)] = {
            static_cast<double>(p.t_train) / total, eps, cfg.data_fraction()};
    });
    return t;
}

}  // namespace

ResultTable run_figure(int id, const std::vector<std::string>& overrides,
                       std::uint64_t seed, int workers) {
    json config = figure_config(id);
    for (const auto& o : overrides) apply_override(config, o);
    const RunSetup setup = parse_config(config);

    ResultTable t;
    switch (id) {
        case 2: t = figure2(setup, workers); break;
        case 3: t = figure3(setup, workers); break;
        case 4: t = figure4(setup, config, workers); break;
        case 5: t = figure5(setup, workers); break;
        case 6: t = figure6(setup, workers); break;
        default: throw UnknownFigure("figure id must be in 2..6");
    }
    t.provenance = base_provenance("figure", seed, config);
    t.provenance["figure"] = id;
    return t;
}

namespace {

using CheckFn = CheckRow (*)(std::uint64_t);

CheckRow check_s_round_trip(std::uint64_t seed) {
    Rng rng(SeedPath(seed) / "verify" / "s_round_trip");
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int me = 1 + static_cast<int>(rng.uniform_below(4));
        const double rho = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
        const long long t_r = 1 + static_cast<long long>(rng.uniform_below(8));
        const auto cfg = make_cfg(100, me, 1, 4 * t_r + t_r, t_r, 1.0, rho, 0.0, 0.0,
                                  1.0, 1, 1);
        const double delta = 0.1 + 0.8 * rng.uniform();
        const double eps = 0.01 + 0.49 * rng.uniform();
        worst = std::max(worst, s_epsilon(cfg, eps, delta).round_trip_residual);
    }
    return {"s_round_trip_max_residual", worst, 1e-9, worst <= 1e-9};
}

CheckRow check_v_round_trip(std::uint64_t seed) {
    Rng rng(SeedPath(seed) / "verify" / "v_round_trip");
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int k = 1 + static_cast<int>(rng.uniform_below(4));
        const double rho = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
        const double rho_jam = 2.0 * rng.uniform();
        const long long t_r = k + static_cast<long long>(rng.uniform_below(8));
        const auto cfg = make_cfg(100, 1, k, 5 * t_r, t_r, 1.0, rho, rho_jam, 0.0, 1.0,
                                  t_r, 1);
        const double delta = 0.05 + 0.85 * rng.uniform();
        const std::vector<double> rates(static_cast<std::size_t>(k),
                                        0.05 + 0.95 * rng.uniform());
        worst = std::max(worst, v_of_r(cfg, rates, delta).round_trip_residual);
    }
    return {"v_round_trip_max_residual", worst, 1e-9, worst <= 1e-9};
}

CheckRow check_g_example(std::uint64_t) {
    const auto cfg = make_cfg(200, 1, 5, 30, 10, 10.0, 1.0, 1.0, 0.0, 1.0, 10, 1);
    const double g = g_epsilon(cfg, 2.0 / 3.0).value;
    const double res = std::abs(g / 17.64 - 1.0);
    return {"g_example_residual", res, 1e-9, res <= 1e-9};
}

CheckRow check_s1_degeneracy(std::uint64_t seed) {
    Rng rng(SeedPath(seed) / "verify" / "s1_degeneracy");
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double rho_r = 0.5 + 9.5 * rng.uniform();
        const double rho_jam = rho_r * rng.uniform();  // rho_jam <= rho_r
        const auto cfg = make_cfg(100, 1, 1, 10, 2, rho_r, 1.0, rho_jam, 0.0, 1.0, 1, 1);
        const double delta = 0.1 + 0.8 * rng.uniform();
        const double eps = 0.01 + 0.49 * rng.uniform();
        const double s = s_epsilon(cfg, eps, delta).value;
        const double s1 = s1_epsilon(cfg, eps, delta, 1.0).value;
        worst = std::max(worst, std::abs(s1 / s - 1.0));
    }
    return {"s1_degeneracy_max_residual", worst, 1e-12, worst <= 1e-12};
}

CheckRow check_defense_j_invariance(std::uint64_t) {
    double worst = 0.0;
    double ref = 0.0;
    for (long long j = 1; j <= 10; ++j) {
        const auto cfg = make_cfg(200, 1, 5, 600, 200, 10.0, 1.0, 1.0, 0.0, 1.0, 200, j);
        const double r = defense_rate(cfg, 200.0).rate;
        if (j == 1) ref = r;
        worst = std::max(worst, std::abs(r - ref));
    }
    return {"defense_rate_j_invariance", worst, 1e-12, worst <= 1e-12};
}

CheckRow check_delta_zero_reduction(std::uint64_t) {
    double worst = 0.0;
    for (int m : {16, 128, 1024}) {
        const auto cfg = make_cfg(m, 1, 4, 100, 9, 1.0, 1.0, 1.0, 0.0, 1.0, 9, 1);
        const double via_delta = decodable_rate_delta(cfg, m, 0.0);
        const double direct = rate_no_training_jamming(cfg, m).signal_term;
        worst = std::max(worst, std::abs(via_delta - direct));
    }
    return {"delta_zero_reduction_residual", worst, 1e-12, worst <= 1e-12};
}

CheckRow check_s_antenna_claim(std::uint64_t) {
    const auto cfg = make_cfg(100, 1, 1, 5, 1, 1.0, 1.0, 0.0, 0.0, 1.0, 1, 1);
    const double s = s_epsilon(cfg, 0.05, 0.7).value;
    return {"s_epsilon_antenna_budget", s, 100.0, s <= 100.0};
}

CheckRow check_pilot_gram(std::uint64_t) {
    double worst = 0.0;
    for (auto [l, tr] : {std::pair<long long, long long>{4, 4}, {8, 16}, {64, 256}}) {
        const double rho_r = 2.5;
        const auto set = build_orthogonal_pilots(l, tr, rho_r);
        const CMatrix gram = set.phi * set.phi.adjoint();
        const CMatrix target = static_cast<double>(tr) * rho_r *
                               CMatrix::Identity(l, l);
        worst = std::max(worst, (gram - target).cwiseAbs().maxCoeff() /
                                    (static_cast<double>(tr) * rho_r));
    }
    return {"pilot_gram_max_residual", worst, 1e-10, worst <= 1e-10};
}

CheckRow check_waterfilling_residual(std::uint64_t) {
    double worst = 0.0;
    for (int m : {2, 8, 64, 1024})
        worst = std::max(worst, solve_waterfilling(m, 10.0, 0.5).residual);
    return {"waterfilling_max_residual", worst, 1e-8, worst <= 1e-8};
}

CheckRow check_waterfilling_lambda_bound(std::uint64_t) {
    double worst = -1.0;
    for (int m : {2, 8, 64}) {
        const auto sol = solve_waterfilling(m, 10.0, 0.5);
        worst = std::max(worst, sol.lambda - (10.0 + 1.0 / (m - 1)));
    }
    return {"waterfilling_lambda_bound_excess", worst, 0.0, worst <= 0.0};
}

CheckRow check_waterfilling_oracle(std::uint64_t) {
    // independent closed form: E[(l - 1/Q)^+] = l Q(M,c) - Q(M-1,c)/(M-1)
    double worst = 0.0;
    for (int m : {2, 8, 64, 1024}) {
        const auto sol = solve_waterfilling(m, 10.0, 0.5);
        const double c = 1.0 / sol.lambda;
        const double spent = sol.lambda * boost::math::gamma_q(m, c) -
                             boost::math::gamma_q(m - 1, c) / (m - 1.0);
        worst = std::max(worst, std::abs(spent - 10.0));
    }
    return {"waterfilling_oracle_residual", worst, 1e-7, worst <= 1e-7};
}

CheckRow check_defense_dof_zero_eps(std::uint64_t) {
    const auto cfg = make_cfg(200, 1, 5, 30, 10, 10.0, 1.0, 1.0, 0.0, 1.0, 10, 1);
    const double res = std::abs(defense_dof_lower_bound(cfg, 1.0, 0.0) -
                                cfg.data_fraction());
    return {"defense_dof_zero_eps_residual", res, 1e-15, res <= 1e-15};
}

CheckRow check_moments_nojam(std::uint64_t seed) {
    const auto cfg = make_cfg(64, 1, 2, 100, 9, 1.0, 1.0, 0.0, 0.0, 1.0, 9, 1);
    const auto ests = mc_estimator_moments(cfg, EstimatorRegime::NoJam, 20000,
                                           SeedPath(seed) / "verify" / "moments_nojam");
    const double z = max_abs_z(ests);
    return {"moments_nojam_max_z", z, 4.0, z <= 4.0};
}

CheckRow check_moments_pilot_matching(std::uint64_t seed) {
    const auto cfg = make_cfg(64, 1, 2, 100, 9, 1.0, 1.0, 1.0, 0.0, 1.0, 9, 1);
    const auto ests =
        mc_estimator_moments(cfg, EstimatorRegime::PilotMatching, 20000,
                             SeedPath(seed) / "verify" / "moments_pm");
    const double z = max_abs_z(ests);
    return {"moments_pilot_matching_max_z", z, 4.0, z <= 4.0};
}

CheckRow check_moments_random_subset(std::uint64_t seed) {
    const auto cfg = make_cfg(64, 1, 2, 100, 9, 1.0, 1.0, 1.0, 0.0, 1.0, 9, 3);
    const auto ests =
        mc_estimator_moments(cfg, EstimatorRegime::RandomSubset, 20000,
                             SeedPath(seed) / "verify" / "moments_rs");
    const double z = max_abs_z(ests);
    return {"moments_random_subset_max_z", z, 4.0, z <= 4.0};
}

CheckRow check_sinr_z(std::uint64_t seed) {
    const auto cfg = make_cfg(128, 1, 4, 100, 9, 1.0, 1.0, 1.0, 0.0, 1.0, 9, 1);
    const auto res = mc_sinr(cfg, 4000, SeedPath(seed) / "verify" / "sinr");
    const double z = std::max(
        std::max(std::abs(res.var_t0.z_score()), std::abs(res.var_t1.z_score())),
        std::max(std::abs(res.var_t2.z_score()), std::abs(res.var_t3.z_score())));
    return {"sinr_decomposition_max_z", z, 4.0, z <= 4.0};
}

CheckRow check_sinr_relative(std::uint64_t seed) {
    const auto cfg = make_cfg(128, 1, 4, 100, 9, 1.0, 1.0, 1.0, 0.0, 1.0, 9, 1);
    const auto res = mc_sinr(cfg, 4000, SeedPath(seed) / "verify" / "sinr");
    const double rel = std::abs(res.empirical_sinr / res.analytic_sinr - 1.0);
    return {"sinr_relative_error", rel, 0.05, rel <= 0.05};
}

CheckRow check_leakage(std::uint64_t seed) {
    const auto cfg = make_cfg(100, 1, 1, 100, 9, 1.0, 1.0, 0.0, 0.0, 1.0, 1, 1);
    const auto res = mc_leakage(cfg, 0.7, 20000, SeedPath(seed) / "verify" / "leakage");
    const double z = std::max(std::abs(res.cross_moment.z_score()),
                              std::max(std::abs(res.adv_power.z_score()),
                                       std::abs(res.independence.z_score())));
    return {"leakage_max_z", z, 4.0, z <= 4.0};
}

CheckRow check_tilde_identity(std::uint64_t seed) {
    const auto cfg = make_cfg(32, 1, 2, 50, 4, 2.0, 1.0, 1.0, 0.0, 1.0, 2, 1);
    const auto res =
        mc_distribution_identity(cfg, 20000, SeedPath(seed) / "verify" / "identity");
    double z = std::max(std::abs(res.pair_a_cross.z_score()),
                        std::abs(res.pair_b_cross.z_score()));
    z = std::max(z, std::max(std::abs(res.pair_a_second.z_score()),
                             std::abs(res.pair_b_second.z_score())));
    z = std::max(z, std::max(std::abs(res.cross_z), std::abs(res.second_z)));
    return {"tilde_identity_max_z", z, 4.0, z <= 4.0};
}

CheckRow check_lln_bound(std::uint64_t seed) {
    const auto cfg = make_cfg(4096, 1, 1, 10, 1, 10.0, 1.0, 1.0, 0.0, 1.0, 1, 1);
    const auto pts = mc_lln(cfg, {4096}, 500, SeedPath(seed) / "verify" / "lln");
    const double target = cfg.data_fraction() * std::log2(10.0);
    const double rel = std::abs(pts[0].stats.bound_estimate / target - 1.0);
    return {"lln_bound_relative_error", rel, 0.1, rel <= 0.1};
}

CheckRow check_end_to_end_nojam(std::uint64_t seed) {
    const auto cfg = make_cfg(64, 1, 2, 100, 9, 1.0, 1.0, 0.0, 0.0, 1.0, 9, 1);
    const auto res = mc_end_to_end(cfg, AttackSpec::none(), false, 0.0, 3000,
                                   SeedPath(seed) / "verify" / "e2e_nojam");
    const double z = std::max(std::abs(res.decodable_rate.z_score()),
                              std::abs(res.leakage_power.z_score()));
    return {"end_to_end_nojam_max_z", z, 4.0, z <= 4.0};
}

CheckRow check_end_to_end_defense_pair(std::uint64_t seed) {
    const SeedPath sp = SeedPath(seed) / "verify" / "e2e_defense";
    const auto run = [&](long long j) {
        const auto cfg = make_cfg(32, 1, 2, 40, 8, 1.0, 1.0, 1.0, 0.0, 1.0, 8, j);
        return mc_end_to_end(cfg, AttackSpec::random_subset_jam(0), true, 0.0, 3000, sp);
    };
    const auto a = run(1);
    const auto b = run(8);
    const double z = std::abs(paired_z(a.decodable_rate, b.decodable_rate));
    return {"end_to_end_defense_j_pair_z", z, 4.0, z <= 4.0};
}

CheckRow check_bernoulli_hit(std::uint64_t seed) {
    const auto cfg = make_cfg(8, 1, 2, 40, 8, 1.0, 1.0, 1.0, 0.0, 1.0, 8, 2);
    const auto pilots = build_orthogonal_pilots(8, 8, 1.0);
    const AttackSpec attack = AttackSpec::random_subset_jam(0);
    const SeedPath sp = SeedPath(seed) / "verify" / "bernoulli";
    RunningStats hits;
    for (long long t = 0; t < 20000; ++t) {
        const auto block = static_cast<std::uint64_t>(t);
        const auto ch = sample_block_channels(cfg, sp, block);
        const auto assign = assign_pilots(PilotPolicy::RandomPerBlock, cfg, sp, block);
        const auto obs = synth_training(cfg, ch, pilots, assign, attack, sp);
        hits.add(obs.target_hit ? 1.0 : 0.0);
    }
    const auto est = hits.estimate("hit_rate", 2.0 / 8.0);
    const double z = std::abs(est.z_score());
    return {"bernoulli_hit_rate_z", z, 4.0, z <= 4.0};
}

CheckRow check_data_jam_variance(std::uint64_t seed) {
    const auto cfg = make_cfg(8, 2, 2, 40, 8, 1.0, 1.0, 1.5, 0.0, 1.0, 8, 1);
    const AttackSpec attack = AttackSpec::data_only_jam();
    const SeedPath sp = SeedPath(seed) / "verify" / "data_jam";
    RunningStats power;
    const CMatrix x = CMatrix::Zero(cfg.m(), 50);
    for (long long t = 0; t < 2000; ++t) {
        auto ch = sample_block_channels(cfg, sp, static_cast<std::uint64_t>(t));
        const auto obs = synth_data(cfg, ch, x, attack, sp);
        // jam power averaged over uses within a block; one sample per block
        power.add(obs.y.row(0).squaredNorm() / 50.0);
    }
    const auto est = power.estimate("rx_power", 1.0 + cfg.m_e() * cfg.rho_jam());
    const double z = std::abs(est.z_score());
    return {"data_jam_variance_z", z, 4.0, z <= 4.0};
}

const std::vector<std::pair<const char*, CheckFn>>& formula_checks() {
    static const std::vector<std::pair<const char*, CheckFn>> checks = {
        {"s_round_trip", &check_s_round_trip},
        {"v_round_trip", &check_v_round_trip},
        {"g_example", &check_g_example},
        {"s1_degeneracy", &check_s1_degeneracy},
        {"defense_j_invariance", &check_defense_j_invariance},
        {"delta_zero_reduction", &check_delta_zero_reduction},
        {"s_antenna_claim", &check_s_antenna_claim},
        {"pilot_gram", &check_pilot_gram},
        {"waterfilling_residual", &check_waterfilling_residual},
        {"waterfilling_lambda_bound", &check_waterfilling_lambda_bound},
        {"waterfilling_oracle", &check_waterfilling_oracle},
        {"defense_dof_zero_eps", &check_defense_dof_zero_eps},
    };
    return checks;
}

const std::vector<std::pair<const char*, CheckFn>>& statistics_checks() {
    static const std::vector<std::pair<const char*, CheckFn>> checks = {
        {"moments_nojam", &check_moments_nojam},
        {"moments_pilot_matching", &check_moments_pilot_matching},
        {"moments_random_subset", &check_moments_random_subset},
        {"sinr_z", &check_sinr_z},
        {"sinr_relative", &check_sinr_relative},
        {"leakage", &check_leakage},
        {"tilde_identity", &check_tilde_identity},
        {"lln_bound", &check_lln_bound},
        {"end_to_end_nojam", &check_end_to_end_nojam},
        {"end_to_end_defense_pair", &check_end_to_end_defense_pair},
        {"bernoulli_hit", &check_bernoulli_hit},
        {"data_jam_variance", &check_data_jam_variance},
    };
    return checks;
}

}  // namespace

VerifyReport run_verify(const std::string& suite, std::uint64_t seed, int workers) {
    std::vector<std::pair<const char*, CheckFn>> checks;
    if (suite == "formulas" || suite == "all")
        for (const auto& c : formula_checks()) checks.push_back(c);
    if (suite == "statistics" || suite == "all")
        for (const auto& c : statistics_checks()) checks.push_back(c);
    if (checks.empty())
        throw ParameterError("unknown verify suite: " + suite +
                             " (expected formulas, statistics, or all)");

    VerifyReport report;
    report.suite = suite;
    report.seed = seed;
    report.rows.resize(checks.size());
    for_indexed(static_cast<long long>(checks.size()), workers, [&](long long i) {
        report.rows[static_cast<std::size_t>(i)] =
            checks[static_cast<std::size_t>(i)].second(seed);
    });
    for (const auto& row : report.rows) report.all_pass = report.all_pass && row.pass;
    return report;
}

std::string render_report(const VerifyReport& report) {
    std::string out = "suite=" + report.suite + " seed=" + std::to_string(report.seed) +
                      " tool=" + std::string(kToolName) + "-" + kToolVersion + "\n";
    std::size_t passed = 0;
    for (const auto& row : report.rows) {
        out += row.pass ? "PASS " : "FAIL ";
        out += row.name + " statistic=" + format_double(row.statistic) +
               " threshold=" + format_double(row.threshold) + "\n";
        if (row.pass) ++passed;
    }
    out += std::string("RESULT ") + (report.all_pass ? "PASS" : "FAIL") + " (" +
           std::to_string(passed) + "/" + std::to_string(report.rows.size()) +
           " checks)\n";
    return out;
}

ResultTable run_simulate(const RunSetup& setup, long long blocks, const json& config) {
    ResultTable t;
    t.columns = {"row_kind",        "block",          "signal_power",
                 "residual_power",  "leakage_sample", "empirical_sinr",
                 "decodable_rate",  "analytic_rate",  "leakage_power",
                 "leakage_target"};
    t.provenance = base_provenance("simulate", setup.seed, config);
    t.provenance["blocks"] = blocks;
    if (blocks <= 0) return t;

    t.rows.reserve(static_cast<std::size_t>(blocks) + 1);
    const auto sink = [&](long long block, double sig2, double rest2, double leak) {
        t.add_row({0.0, static_cast<double>(block), sig2, rest2, leak, 0.0, 0.0, 0.0,
                   0.0, 0.0});
    };
    const McEndToEnd res =
        mc_end_to_end(setup.cfg, setup.attack, setup.randomize_assignment, setup.delta,
                      blocks, SeedPath(setup.seed), setup.attack.target_user, sink);

    double mean_sig = 0.0, mean_rest = 0.0;
    for (const auto& row : t.rows) {
        mean_sig += row[2];
        mean_rest += row[3];
    }
    mean_sig /= static_cast<double>(blocks);
    mean_rest /= static_cast<double>(blocks);
    t.add_row({1.0, static_cast<double>(blocks), mean_sig, mean_rest,
               res.leakage_power.estimate, res.empirical_sinr,
               res.decodable_rate.estimate, res.analytic_rate,
               res.leakage_power.estimate, res.leakage_power.target.value_or(0.0)});
    return t;
}

ResultTable run_thresholds(const RunSetup& setup, const json& config) {
    const double eps = config.value("/thresholds/epsilon"_json_pointer, 0.05);
    const double rate = config.value("/thresholds/rate"_json_pointer, 0.2);
    const double delta =
        config.value("/thresholds/delta"_json_pointer, setup.delta > 0.0 ? setup.delta : 0.7);
    const double gamma = setup.cfg.gamma();
    const std::vector<double> rates(static_cast<std::size_t>(setup.cfg.k_users()), rate);

    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
    const auto nan = std::numeric_limits<double>::quiet_NaN();

    ResultTable t;
    t.columns = {"epsilon",  "delta",   "gamma",   "rate",     "s_value", "s_ceil",
                 "v_value",  "v_ceil",  "g_value", "g_ceil",   "s1_value", "s1_ceil",
                 "v1_value", "v1_ceil", "opt_delta", "opt_value"};
    const auto s = s_epsilon(setup.cfg, eps, delta);
    const auto v = v_of_r(setup.cfg, rates, delta);
    const auto g = g_epsilon(setup.cfg, eps);
    double s1v = nan, s1c = nan;
    if (delta + gamma > 1.0) {
        const auto s1 = s1_epsilon(setup.cfg, eps, delta, gamma);
        s1v = s1.value;
        s1c = static_cast<double>(s1.ceil_value);
    }
    const auto v1 = v1_of_r(setup.cfg, rates, delta);
    const auto opt = optimize_delta(setup.cfg, rates, eps, grid);
    t.add_row({eps, delta, gamma, rate, s.value, static_cast<double>(s.ceil_value),
               v.value, static_cast<double>(v.ceil_value), g.value,
               static_cast<double>(g.ceil_value), s1v, s1c, v1.value,
               static_cast<double>(v1.ceil_value), opt.delta, opt.value});
    t.provenance = base_provenance("thresholds", setup.seed, config);
    return t;
}

ResultTable run_mc(const RunSetup& setup, const std::string& experiment,
                   long long trials, const json& config) {
    ResultTable t;
    t.provenance = base_provenance("mc", setup.seed, config);
    t.provenance["experiment"] = experiment;
    t.provenance["trials"] = trials;
    const SeedPath sp = SeedPath(setup.seed) / "mc" / experiment;

    const auto estimate_rows = [&](const std::vector<McEstimate>& ests) {
        t.columns = {"index", "estimate", "std_error", "trials", "target", "z"};
        json names = json::array();
        for (std::size_t i = 0; i < ests.size(); ++i) {
            const auto& e = ests[i];
            names.push_back(e.name);
            t.add_row({static_cast<double>(i), e.estimate, e.std_error,
                       static_cast<double>(e.trials),
                       e.target.value_or(std::numeric_limits<double>::quiet_NaN()),
                       e.z_score()});
        }
        t.provenance["rows"] = names;
    };

    if (experiment == "moments") {
        EstimatorRegime regime = EstimatorRegime::NoJam;
        if (setup.attack.kind == AttackKind::PilotMatching)
            regime = EstimatorRegime::PilotMatching;
        else if (setup.attack.kind == AttackKind::RandomSubsetJam)
            regime = EstimatorRegime::RandomSubset;
        estimate_rows(mc_estimator_moments(setup.cfg, regime, trials, sp,
                                           setup.attack.target_user));
    } else if (experiment == "sinr") {
        const auto res = mc_sinr(setup.cfg, trials, sp, setup.attack.target_user);
        std::vector<McEstimate> rows{res.var_t0, res.var_t1, res.var_t2, res.var_t3};
        rows.push_back({"empirical_sinr", res.empirical_sinr, 0.0, trials,
                        res.analytic_sinr});
        estimate_rows(rows);
    } else if (experiment == "leakage") {
        const auto res =
            mc_leakage(setup.cfg, setup.delta, trials, sp, setup.attack.target_user);
        estimate_rows({res.cross_moment, res.adv_power, res.independence});
    } else if (experiment == "identity") {
        const auto res =
            mc_distribution_identity(setup.cfg, trials, sp, setup.attack.target_user);
        std::vector<McEstimate> rows{res.pair_a_cross, res.pair_b_cross,
                                     res.pair_a_second, res.pair_b_second};
        rows.push_back({"cross_z", res.cross_z, 0.0, trials, 0.0});
        rows.push_back({"second_z", res.second_z, 0.0, trials, 0.0});
        estimate_rows(rows);
    } else if (experiment == "lln") {
        std::vector<int> m_grid{100, 1000, 10000};
        if (config.contains("/mc/m_grid"_json_pointer))
            m_grid = config.at("/mc/m_grid"_json_pointer).get<std::vector<int>>();
        t.columns = {"m",       "v_mean",        "v_limit", "w_mean",
                     "w_limit", "bound_estimate", "k_m_diag"};
        for (const auto& pt :
             mc_lln(setup.cfg, m_grid, trials, sp, setup.attack.target_user)) {
            t.add_row({pt.m, pt.stats.v_mean, pt.stats.v_limit, pt.stats.w_mean,
                       pt.stats.w_limit, pt.stats.bound_estimate, pt.k_m_diag});
        }
    } else if (experiment == "waterfilling") {
        std::vector<int> m_grid{2, 8, 64, 1024};
        if (config.contains("/mc/m_grid"_json_pointer))
            m_grid = config.at("/mc/m_grid"_json_pointer).get<std::vector<int>>();
        t.columns = {"m", "lambda", "residual", "capacity", "capacity_per_log2m"};
        for (int m : m_grid) {
            const auto sol =
                solve_waterfilling(m, setup.cfg.rho_f(), setup.cfg.data_fraction());
            t.add_row({static_cast<double>(m), sol.lambda, sol.residual, sol.capacity,
                       sol.capacity / std::log2(static_cast<double>(m))});
        }
    } else if (experiment == "end_to_end") {
        const auto res =
            mc_end_to_end(setup.cfg, setup.attack, setup.randomize_assignment,
                          setup.delta, trials, sp, setup.attack.target_user);
        std::vector<McEstimate> rows{res.decodable_rate, res.leakage_power};
        rows.push_back({"empirical_sinr", res.empirical_sinr, 0.0, trials,
                        std::numeric_limits<double>::quiet_NaN()});
        estimate_rows(rows);
    } else {
        throw ParameterError("unknown mc experiment: " + experiment);
    }
    return t;
}

}  // namespace mimosec

#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "mimosec/montecarlo.hpp"

using namespace mimosec;

namespace {

SystemConfig mc_cfg(int m, int k = 2, double rho_jam = 0.0, long long j = 1,
                    long long l = -1, long long t_r = 9, double rho_r = 1.0) {
    SystemParams p;
    p.m = m;
    p.m_e = 1;
    p.k_users = k;
    p.t_block = 10 * t_r;
    p.t_train = t_r;
    p.rho_r = rho_r;
    p.rho_users.assign(static_cast<std::size_t>(k), 1.0);
    p.rho_jam = rho_jam;
    p.l_pilots = l < 0 ? std::max<long long>(k, 1) : l;
    p.j_subset = j;
    return SystemConfig::validate(p);
}

}  // namespace

TEST_CASE("running stats algebra") {
    RunningStats s;
    CHECK(s.mean() == 0.0);
    CHECK(s.std_error() == 0.0);
    for (double x : {1.0, 2.0, 3.0, 4.0}) s.add(x);
    CHECK(s.count() == 4);
    CHECK(s.mean() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(s.variance() == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(s.std_error() == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-14));

    const auto est = s.estimate("x", 2.5);
    CHECK(est.z_score() == doctest::Approx(0.0).epsilon(1e-14));
    const auto off = s.estimate("x", 2.5 + 2.0 * s.std_error());
    CHECK(off.z_score() == doctest::Approx(-2.0).epsilon(1e-12));
    // no target, or degenerate stderr, reports z = 0
    CHECK(s.estimate("x").z_score() == 0.0);
}

TEST_CASE("estimator moments agree with the coefficient records") {
    const SeedPath seed(101);
    const long long trials = 4000;
    for (auto regime : {EstimatorRegime::NoJam, EstimatorRegime::PilotMatching,
                        EstimatorRegime::RandomSubset}) {
        const auto cfg = mc_cfg(64, 2, regime == EstimatorRegime::NoJam ? 0.0 : 2.0,
                                3, 9);
        const auto rows = mc_estimator_moments(cfg, regime, trials, seed);
        REQUIRE(!rows.empty());
        for (const auto& r : rows) {
            REQUIRE(r.target.has_value());
            CHECK(std::abs(r.z_score()) <= 4.5);
        }
    }
}

TEST_CASE("monte-carlo runs are seed-deterministic") {
    const auto cfg = mc_cfg(32);
    const auto a = mc_sinr(cfg, 200, SeedPath(5));
    const auto b = mc_sinr(cfg, 200, SeedPath(5));
    CHECK(a.var_t0.estimate == b.var_t0.estimate);
    CHECK(a.var_t3.estimate == b.var_t3.estimate);
    CHECK(a.empirical_sinr == b.empirical_sinr);
    const auto c = mc_sinr(cfg, 200, SeedPath(6));
    CHECK(c.empirical_sinr != a.empirical_sinr);
}

TEST_CASE("sinr variance split matches the closed form at small scale") {
    const auto cfg = mc_cfg(64, 3, 1.0);
    const auto res = mc_sinr(cfg, 2000, SeedPath(77));
    for (const auto* e : {&res.var_t0, &res.var_t1, &res.var_t2, &res.var_t3}) {
        REQUIRE(e->target.has_value());
        CHECK(std::abs(e->z_score()) <= 4.5);
    }
    CHECK(res.empirical_sinr ==
          doctest::Approx(res.analytic_sinr).epsilon(0.15));
}

TEST_CASE("leakage moments in the no-jam regime") {
    const auto cfg = mc_cfg(64);
    const auto res = mc_leakage(cfg, 0.7, 4000, SeedPath(31));
    CHECK(std::abs(res.cross_moment.z_score()) <= 4.5);
    CHECK(std::abs(res.adv_power.z_score()) <= 4.5);
    CHECK(std::abs(res.independence.z_score()) <= 4.5);
    REQUIRE(res.adv_power.target.has_value());
    CHECK(*res.adv_power.target ==
          doctest::Approx(1.0 / std::pow(64.0, 0.7)).epsilon(1e-12));
}

TEST_CASE("tilde-channel distribution identity at small scale") {
    SystemParams p;
    p.m = 32;
    p.m_e = 1;
    p.k_users = 2;
    p.t_block = 50;
    p.t_train = 4;
    p.rho_r = 2.0;
    p.rho_users = {1.0, 1.0};
    p.rho_jam = 1.0;
    p.l_pilots = 2;
    p.j_subset = 1;
    const auto cfg = SystemConfig::validate(p);
    const auto res = mc_distribution_identity(cfg, 5000, SeedPath(13));
    CHECK(std::abs(res.pair_a_cross.z_score()) <= 4.5);
    CHECK(std::abs(res.pair_b_cross.z_score()) <= 4.5);
    CHECK(std::abs(res.pair_a_second.z_score()) <= 4.5);
    CHECK(std::abs(res.pair_b_second.z_score()) <= 4.5);
    CHECK(std::abs(res.cross_z) <= 4.5);
    CHECK(std::abs(res.second_z) <= 4.5);
}

TEST_CASE("water-filling against the closed-form Gamma integrals") {
    // E[(lambda - 1/Q)^+] = lambda Q(M, c) - Q(M-1, c)/(M-1), c = 1/lambda,
    // with Q the regularized upper incomplete gamma function.
    for (int m : {2, 4, 16, 128}) {
        const double rho_f = 10.0;
        const auto sol = solve_waterfilling(m, rho_f, 0.8);
        CHECK(sol.residual <= 1e-8);
        CHECK(sol.lambda <= rho_f + 1.0 / (m - 1.0) + 1e-12);
        const double c = 1.0 / sol.lambda;
        const double mean_power =
            sol.lambda * boost::math::gamma_q(static_cast<double>(m), c) -
            boost::math::gamma_q(static_cast<double>(m - 1), c) / (m - 1.0);
        CHECK(mean_power == doctest::Approx(rho_f).epsilon(1e-7));
        CHECK(sol.capacity > 0.0);
    }

    // capacity per log2(M) decreases toward the data fraction
    const auto lo = solve_waterfilling(1 << 10, 10.0, 0.8);
    const auto hi = solve_waterfilling(1 << 14, 10.0, 0.8);
    CHECK(lo.capacity / std::log2(1024.0) > hi.capacity / std::log2(16384.0));
    CHECK(hi.capacity / std::log2(16384.0) > 0.8);

    CHECK_THROWS_AS(solve_waterfilling(0, 10.0, 0.8), ParameterError);
    CHECK_THROWS_AS(solve_waterfilling(4, -1.0, 0.8), ParameterError);
    CHECK_THROWS_AS(solve_waterfilling(4, 10.0, 0.8, 0.0), ParameterError);
}

TEST_CASE("end-to-end chain with block sink") {
    const auto cfg = mc_cfg(32, 2, 1.0);
    long long rows = 0;
    double last_block = -1.0;
    const auto res = mc_end_to_end(
        cfg, AttackSpec::data_only_jam(), false, 0.0, 400, SeedPath(91), 0,
        [&](long long block, double sig, double rest, double leak) {
            ++rows;
            last_block = static_cast<double>(block);
            CHECK(sig >= 0.0);
            CHECK(rest >= 0.0);
            CHECK(leak >= 0.0);
        });
    CHECK(rows == 400);
    CHECK(last_block == 399.0);
    REQUIRE(res.decodable_rate.target.has_value());
    CHECK(std::abs(res.decodable_rate.z_score()) <= 4.5);
    CHECK(std::abs(res.leakage_power.z_score()) <= 4.5);
    CHECK(res.analytic_rate == doctest::Approx(*res.decodable_rate.target).epsilon(1e-12));

    // the defense path with random-subset jamming also self-verifies
    const auto cfg2 = mc_cfg(32, 2, 1.0, 2, 8, 8);
    const auto def = mc_end_to_end(cfg2, AttackSpec::random_subset_jam(0), true, 0.0,
                                   400, SeedPath(92));
    CHECK(std::abs(def.decodable_rate.z_score()) <= 4.5);
}

TEST_CASE("lln trajectories tighten with antenna count") {
    SystemParams p;
    p.m = 64;
    p.m_e = 1;
    p.k_users = 1;
    p.t_block = 10;
    p.t_train = 1;
    p.rho_r = 10.0;
    p.rho_users = {1.0};
    p.rho_jam = 1.0;
    p.l_pilots = 1;
    p.j_subset = 1;
    const auto cfg = SystemConfig::validate(p);
    const auto pts = mc_lln(cfg, {64, 1024}, 300, SeedPath(55));
    REQUIRE(pts.size() == 2);
    for (const auto& pt : pts) {
        CHECK(pt.stats.v_mean == doctest::Approx(pt.stats.v_limit).epsilon(0.2));
        CHECK(pt.stats.w_mean == doctest::Approx(pt.stats.w_limit).epsilon(0.2));
        CHECK(pt.stats.bound_estimate > 0.0);
    }
    // sample means approach the limits as M grows
    const double err64 = std::abs(pts[0].stats.v_mean - pts[0].stats.v_limit) /
                         pts[0].stats.v_limit;
    const double err1024 = std::abs(pts[1].stats.v_mean - pts[1].stats.v_limit) /
                           pts[1].stats.v_limit;
    CHECK(err1024 < err64 + 0.05);
}

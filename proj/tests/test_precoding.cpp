#include <doctest.h>

#include "mimosec/precoding.hpp"

using namespace mimosec;

namespace {

SystemConfig small_cfg(int m = 32, int k = 3, double delta = 0.0) {
    SystemParams p;
    p.m = m;
    p.m_e = 1;
    p.k_users = k;
    p.t_block = 40;
    p.t_train = 8;
    p.rho_r = 1.0;
    p.rho_users = {1.0, 2.0, 0.5};
    p.rho_users.resize(static_cast<std::size_t>(k), 1.0);
    p.rho_jam = 0.0;
    p.delta = delta;
    p.l_pilots = 8;
    p.j_subset = 1;
    return SystemConfig::validate(p);
}

ChannelEstimate make_estimate(const SystemConfig& cfg, const SeedPath& seed,
                              std::uint64_t block = 0) {
    const auto ch = sample_block_channels(cfg, seed, block);
    const auto pilots = build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
    const auto assign = assign_pilots(PilotPolicy::Static, cfg, seed, block);
    const auto obs = synth_training(cfg, ch, pilots, assign, AttackSpec::none(), seed);
    return estimate_channels(cfg, obs, pilots, assign,
                             mmse_coefficients(cfg, EstimatorRegime::NoJam));
}

}  // namespace

TEST_CASE("symbol budgets track per-user powers") {
    const auto cfg = small_cfg();
    const SeedPath seed(7);
    const auto sym = sample_symbols(cfg, 5000, seed, 3);
    REQUIRE(sym.s.rows() == cfg.k_users());
    REQUIRE(sym.s.cols() == 5000);
    REQUIRE(sym.budgets.size() == static_cast<std::size_t>(cfg.k_users()));
    for (int k = 0; k < cfg.k_users(); ++k) {
        CHECK(sym.budgets[static_cast<std::size_t>(k)] == cfg.rho_user(k));
        const double mean_power = sym.s.row(k).squaredNorm() / 5000.0;
        // 3-sigma band: var of |s|^2 is rho^2, 5000 samples
        CHECK(std::abs(mean_power - cfg.rho_user(k)) <=
              3.0 * cfg.rho_user(k) / std::sqrt(5000.0));
    }
    // same seed/block reproduces the draw exactly
    const auto again = sample_symbols(cfg, 5000, seed, 3);
    CHECK((sym.s - again.s).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("precoder is linear in the symbols and matches the explicit sum") {
    const auto cfg = small_cfg();
    const SeedPath seed(11);
    const auto est = make_estimate(cfg, seed);
    const auto sym = sample_symbols(cfg, 16, seed, 0);

    const auto input = conjugate_precode(est, sym);
    REQUIRE(input.x.rows() == cfg.m());
    REQUIRE(input.x.cols() == 16);

    CMatrix expect = CMatrix::Zero(cfg.m(), 16);
    for (int k = 0; k < cfg.k_users(); ++k) {
        const double denom = std::sqrt(cfg.m() * est.record.alpha(k));
        expect.noalias() += est.hhat.row(k).conjugate().transpose() * sym.s.row(k) / denom;
    }
    CHECK((input.x - expect).cwiseAbs().maxCoeff() <= 1e-12);

    // doubling one user's symbols doubles its contribution
    SymbolBlock scaled = sym;
    scaled.s.row(1) *= 2.0;
    const auto input2 = conjugate_precode(est, scaled);
    const CMatrix diff = input2.x - input.x;
    const double denom1 = std::sqrt(cfg.m() * est.record.alpha(1));
    const CMatrix expect_diff =
        est.hhat.row(1).conjugate().transpose() * sym.s.row(1) / denom1;
    CHECK((diff - expect_diff).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("delta scaling is an exact global factor") {
    const auto cfg = small_cfg();
    const SeedPath seed(13);
    const auto est = make_estimate(cfg, seed);
    const auto sym = sample_symbols(cfg, 8, seed, 1);

    const double delta = 0.6;
    const auto plain = conjugate_precode(est, sym);
    const auto scaled = delta_conjugate_precode(est, sym, delta);
    const double factor = std::pow(static_cast<double>(cfg.m()), -delta / 2.0);
    CHECK((scaled.x - factor * plain.x).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(scaled.kind == BeamformerKind::DeltaConjugate);
    CHECK(scaled.delta == delta);

    // delta = 0 recovers conjugate beamforming exactly
    const auto zero = delta_conjugate_precode(est, sym, 0.0);
    CHECK((zero.x - plain.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("power audit passes on honest input and flags inflation") {
    const auto cfg = small_cfg();
    const SeedPath seed(17);
    const auto est = make_estimate(cfg, seed);
    const auto sym = sample_symbols(cfg, 4000, seed, 2);
    const auto input = conjugate_precode(est, sym);

    const auto rep = audit_power(input, sym, cfg);
    for (bool flag : rep.per_user_flag) CHECK_FALSE(flag);
    CHECK_FALSE(rep.total_flag);
    CHECK(rep.total_power == doctest::Approx(cfg.rho_f()).epsilon(0.2));

    ChannelInput hot = input;
    hot.x *= 3.0;
    const auto bad = audit_power(hot, sym, cfg);
    CHECK(bad.total_flag);
}

TEST_CASE("degenerate estimate record is rejected") {
    const auto cfg = small_cfg();
    const SeedPath seed(19);
    auto est = make_estimate(cfg, seed);
    const auto sym = sample_symbols(cfg, 4, seed, 0);
    est.record.alpha_target = 0.0;
    est.record.alpha_nontarget = 0.0;
    CHECK_THROWS_AS(conjugate_precode(est, sym), DegenerateEstimate);
    CHECK_THROWS_AS(delta_conjugate_precode(est, sym, 0.5), DegenerateEstimate);
}

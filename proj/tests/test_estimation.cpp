#include <doctest.h>

#include "mimosec/estimation.hpp"

using namespace mimosec;

namespace {

SystemConfig cfg_with(double rho_r, long long t_r, double rho_jam, int k = 2,
                      long long l = -1, long long j = 1, int m = 16, int me = 1) {
    SystemParams p;
    p.m = m;
    p.m_e = me;
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

/// Noise-free training observation: only pilots (and optional jam terms).
TrainingObservation clean_training(const SystemConfig& cfg, const BlockChannels& ch,
                                   const PilotSet& pilots, const PilotAssignment& assign) {
    TrainingObservation obs;
    obs.y_tr = CMatrix::Zero(cfg.m(), cfg.t_train());
    for (int k = 0; k < cfg.k_users(); ++k)
        obs.y_tr.noalias() +=
            ch.h.row(k).transpose() * pilots.phi.row(assign.pilot_of_user[k]);
    obs.z_tr = CMatrix::Zero(cfg.m_e(), cfg.t_train());
    return obs;
}

}  // namespace

TEST_CASE("no-jam coefficients at rho_r T_r = 9") {
    const auto cfg = cfg_with(1.0, 9, 0.0, 2, 9);
    const auto rec = mmse_coefficients(cfg, EstimatorRegime::NoJam);
    CHECK(rec.a == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(rec.b == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(rec.alpha(0) == doctest::Approx(0.9).epsilon(1e-15));
    // a^2 + b^2 = a for the MMSE split
    CHECK(rec.a * rec.a + rec.b * rec.b == doctest::Approx(rec.a).epsilon(1e-15));
}

TEST_CASE("pilot-matching coefficients and the 10/21 anchor") {
    // T_r = 2, rho_r = rho_jam = 5: D = 10 + 1 + 10 = 21
    const auto cfg = cfg_with(5.0, 2, 5.0);
    const auto rec = mmse_coefficients(cfg, EstimatorRegime::PilotMatching, 0);
    CHECK(rec.a == doctest::Approx(10.0 / 21.0).epsilon(1e-15));
    CHECK(rec.b == doctest::Approx(10.0 / 21.0).epsilon(1e-15));
    CHECK(rec.c == doctest::Approx(std::sqrt(10.0) / 21.0).epsilon(1e-15));
    // alpha_target = a^2 + b^2 + c^2 = T_r rho_r / D
    CHECK(rec.a * rec.a + rec.b * rec.b + rec.c * rec.c ==
          doctest::Approx(rec.alpha_target).epsilon(1e-14));
    // untargeted users fall back to the no-jam split
    CHECK(rec.d == doctest::Approx(10.0 / 11.0).epsilon(1e-15));
    CHECK(rec.alpha(1) == doctest::Approx(10.0 / 11.0).epsilon(1e-15));
    CHECK(rec.alpha(0) == rec.alpha_target);

    CHECK_THROWS_AS(mmse_coefficients(cfg, EstimatorRegime::PilotMatching, -1),
                    RegimeMismatch);
}

TEST_CASE("random-subset alpha is the exact Bernoulli-mixture moment") {
    const auto cfg = cfg_with(1.0, 8, 2.0, 2, 8, 4);
    const auto rec = mmse_coefficients(cfg, EstimatorRegime::RandomSubset);
    const double tr = 8.0, rr = 1.0, rj = 2.0;
    const double x1 = 1.0 / std::sqrt(16.0 * (tr * rr + 1.0 + tr * rj / 4.0));
    CHECK(rec.x1 == doctest::Approx(x1).epsilon(1e-15));
    CHECK(rec.alpha_target ==
          doctest::Approx(x1 * x1 * (tr * rr + 1.0 + tr * rj / 8.0)).epsilon(1e-15));

    // J = L collapses to exactly 1/M
    const auto full = cfg_with(1.0, 8, 2.0, 2, 8, 8);
    const auto rec_full = mmse_coefficients(full, EstimatorRegime::RandomSubset);
    CHECK(rec_full.alpha_target == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("noise-free projection reproduces the closed-form signal path") {
    const SeedPath seed(2024);

    SUBCASE("no-jam: estimate is exactly a H_k") {
        const auto cfg = cfg_with(1.0, 9, 0.0, 2, 9);
        const auto ch = sample_block_channels(cfg, seed, 0);
        const auto pilots =
            build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
        const auto assign = assign_pilots(PilotPolicy::Static, cfg, seed, 0);
        const auto obs = clean_training(cfg, ch, pilots, assign);
        const auto rec = mmse_coefficients(cfg, EstimatorRegime::NoJam);
        const auto est = estimate_channels(cfg, obs, pilots, assign, rec);
        for (int k = 0; k < cfg.k_users(); ++k) {
            const CRowVector expect = rec.a * ch.h.row(k);
            CHECK((est.hhat.row(k) - expect).cwiseAbs().maxCoeff() <=
                  1e-9 * expect.cwiseAbs().maxCoeff());
        }
    }

    SUBCASE("pilot matching: target estimate is exactly a H_k + b H_e") {
        const auto cfg = cfg_with(5.0, 2, 5.0);
        const auto ch = sample_block_channels(cfg, seed, 1);
        const auto pilots =
            build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
        const auto assign = assign_pilots(PilotPolicy::Static, cfg, seed, 1);
        auto obs = clean_training(cfg, ch, pilots, assign);
        const double scale = std::sqrt(cfg.rho_jam() / cfg.rho_r());
        obs.y_tr.noalias() +=
            scale * ch.h_e.row(0).transpose() * pilots.phi.row(assign.pilot_of_user[0]);

        const auto rec = mmse_coefficients(cfg, EstimatorRegime::PilotMatching, 0);
        const auto est = estimate_channels(cfg, obs, pilots, assign, rec);
        const CRowVector expect_t = rec.a * ch.h.row(0) + rec.b * ch.h_e.row(0);
        CHECK((est.hhat.row(0) - expect_t).cwiseAbs().maxCoeff() <=
              1e-9 * expect_t.cwiseAbs().maxCoeff());
        const CRowVector expect_n = rec.d * ch.h.row(1);
        CHECK((est.hhat.row(1) - expect_n).cwiseAbs().maxCoeff() <=
              1e-9 * expect_n.cwiseAbs().maxCoeff());
    }

    SUBCASE("random subset: jammed pilot picks up the summed adversary channel") {
        const auto cfg = cfg_with(1.0, 8, 2.0, 2, 8, 4, 16, 2);
        const auto ch = sample_block_channels(cfg, seed, 2);
        const auto pilots =
            build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
        const auto assign = assign_pilots(PilotPolicy::Static, cfg, seed, 2);
        auto obs = clean_training(cfg, ch, pilots, assign);
        // jam user 0's pilot (and an unused one) by hand
        const double j = 4.0;
        const double scale =
            std::sqrt(cfg.rho_jam() / (cfg.m_e() * j * cfg.rho_r()));
        const CRowVector summed = ch.h_e.row(0) + ch.h_e.row(1);
        obs.y_tr.noalias() += scale * summed.transpose() * pilots.phi.row(0);
        obs.y_tr.noalias() += scale * summed.transpose() * pilots.phi.row(5);

        const auto rec = mmse_coefficients(cfg, EstimatorRegime::RandomSubset);
        const auto est = estimate_channels(cfg, obs, pilots, assign, rec);
        const double tr = 8.0;
        const CRowVector expect0 =
            rec.x1 * (std::sqrt(tr * cfg.rho_r()) * ch.h.row(0) +
                      std::sqrt(tr * cfg.rho_jam() / (cfg.m_e() * j)) * summed);
        CHECK((est.hhat.row(0) - expect0).cwiseAbs().maxCoeff() <=
              1e-9 * expect0.cwiseAbs().maxCoeff());
        // user 1's pilot was clean
        const CRowVector expect1 = rec.x1 * std::sqrt(tr * cfg.rho_r()) * ch.h.row(1);
        CHECK((est.hhat.row(1) - expect1).cwiseAbs().maxCoeff() <=
              1e-9 * expect1.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("tilde channel is pilot-matching-only and deterministic") {
    const auto cfg = cfg_with(5.0, 2, 5.0);
    const SeedPath seed(4);
    const auto ch = sample_block_channels(cfg, seed, 0);
    const auto pm = mmse_coefficients(cfg, EstimatorRegime::PilotMatching, 0);
    const auto t1 = construct_tilde_channel(cfg, ch, pm, seed);
    const auto t2 = construct_tilde_channel(cfg, ch, pm, seed);
    CHECK((t1 - t2).cwiseAbs().maxCoeff() == 0.0);

    const auto nj = mmse_coefficients(cfg, EstimatorRegime::NoJam);
    CHECK_THROWS_AS(construct_tilde_channel(cfg, ch, nj, seed), RegimeMismatch);
}

TEST_CASE("dimension mismatches are rejected") {
    const auto cfg = cfg_with(1.0, 9, 0.0, 2, 9);
    const SeedPath seed(1);
    const auto pilots = build_orthogonal_pilots(cfg.l_pilots(), cfg.t_train(), cfg.rho_r());
    const auto assign = assign_pilots(PilotPolicy::Static, cfg, seed, 0);
    const auto rec = mmse_coefficients(cfg, EstimatorRegime::NoJam);
    TrainingObservation bad;
    bad.y_tr = CMatrix::Zero(cfg.m(), cfg.t_train() + 1);
    CHECK_THROWS_AS(estimate_channels(cfg, bad, pilots, assign, rec), DimensionError);
}

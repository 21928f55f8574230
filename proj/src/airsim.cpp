#include "mimosec/airsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mimosec {

namespace {

CMatrix sample_cn_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.cgaussian(1.0);
    return m;
}

}  // namespace

BlockChannels sample_block_channels(const SystemConfig& cfg, const SeedPath& seed,
                                    std::uint64_t block) {
    // Disjoint substreams per matrix: toggling one draw kind never shifts
    // the others, which keeps attack comparisons variance-paired.
    const SeedPath base = seed / "channels" / block;
    Rng rng_h(base / "h");
    Rng rng_he(base / "h_e");
    Rng rng_hjam(base / "h_jam");

    BlockChannels ch;
    ch.h = sample_cn_matrix(cfg.k_users(), cfg.m(), rng_h);
    ch.h_e = sample_cn_matrix(cfg.m_e(), cfg.m(), rng_he);
    ch.h_jam = sample_cn_matrix(cfg.k_users(), cfg.m_e(), rng_hjam);
    ch.block = block;
    return ch;
}

PilotSet build_orthogonal_pilots(long long l, long long t_r, double rho_r) {
    if (l < 1 || t_r < 1) throw ViolatedInvariant("pilot set needs L >= 1 and T_r >= 1");
    if (l > t_r) throw DimensionError("cannot build more orthogonal pilots than T_r");
    PilotSet set;
    set.rho_r = rho_r;
    set.phi.resize(l, t_r);
    const double amp = std::sqrt(rho_r);
    const double w = 2.0 * std::numbers::pi / static_cast<double>(t_r);
    for (long long row = 0; row < l; ++row) {
        for (long long t = 0; t < t_r; ++t) {
            const double ang = -w * static_cast<double>(row) * static_cast<double>(t);
            set.phi(row, t) = amp * std::complex<double>(std::cos(ang), std::sin(ang));
        }
    }
    return set;
}

PilotAssignment assign_pilots(PilotPolicy policy, const SystemConfig& cfg,
                              const SeedPath& seed, std::uint64_t block) {
    const int k = cfg.k_users();
    const long long l = cfg.l_pilots();
    PilotAssignment a;
    a.policy = policy;
    a.pilot_of_user.resize(k);
    if (policy == PilotPolicy::Static) {
        for (int u = 0; u < k; ++u) a.pilot_of_user[u] = u;
        return a;
    }
    // Uniform injection [K] -> [L]: partial Fisher-Yates over the pilot ids.
    Rng rng(seed / "assign" / block);
    std::vector<int> ids(l);
    for (long long i = 0; i < l; ++i) ids[i] = static_cast<int>(i);
    for (int u = 0; u < k; ++u) {
        const auto j = u + static_cast<long long>(rng.uniform_below(l - u));
        std::swap(ids[u], ids[j]);
        a.pilot_of_user[u] = ids[u];
    }
    a.hidden_from_adversary = true;
    return a;
}

TrainingObservation synth_training(const SystemConfig& cfg, const BlockChannels& ch,
                                   const PilotSet& pilots, const PilotAssignment& assign,
                                   const AttackSpec& attack, const SeedPath& seed) {
    attack.check(cfg);
    const long long t_r = cfg.t_train();
    if (pilots.phi.cols() != t_r || pilots.phi.rows() != cfg.l_pilots())
        throw DimensionError("pilot set dimensions disagree with config");
    if (static_cast<int>(assign.pilot_of_user.size()) != cfg.k_users())
        throw DimensionError("assignment does not cover all users");

    const SeedPath base = seed / "training" / ch.block;
    TrainingObservation obs;

    // Users' pilots plus BS-side thermal noise.
    Rng rng_noise(base / "noise_bs");
    obs.y_tr = sample_cn_matrix(cfg.m(), t_r, rng_noise);
    for (int k = 0; k < cfg.k_users(); ++k) {
        obs.y_tr.noalias() +=
            ch.h.row(k).transpose() * pilots.phi.row(assign.pilot_of_user[k]);
    }

    if (attack.kind == AttackKind::PilotMatching && cfg.rho_jam() > 0.0) {
        // Single effective adversary antenna matching the target's pilot.
        const int target_pilot = assign.pilot_of_user.at(attack.target_user);
        const double scale = std::sqrt(cfg.rho_jam() / cfg.rho_r());
        obs.y_tr.noalias() +=
            scale * ch.h_e.row(0).transpose() * pilots.phi.row(target_pilot);
    } else if (attack.kind == AttackKind::RandomSubsetJam && cfg.rho_jam() > 0.0) {
        // Adversary picks a uniform J-subset of the pilot set and splits
        // rho_jam equally over pilots and antennas.
        Rng rng_jam(base / "jam_set");
        const long long l = cfg.l_pilots();
        const long long j = cfg.j_subset();
        std::vector<int> ids(l);
        for (long long i = 0; i < l; ++i) ids[i] = static_cast<int>(i);
        for (long long i = 0; i < j; ++i) {
            const auto r = i + static_cast<long long>(rng_jam.uniform_below(l - i));
            std::swap(ids[i], ids[r]);
        }
        obs.jammed_set.assign(ids.begin(), ids.begin() + j);
        std::sort(obs.jammed_set.begin(), obs.jammed_set.end());

        const double scale =
            std::sqrt(cfg.rho_jam() / (cfg.m_e() * static_cast<double>(j) * cfg.rho_r()));
        CRowVector combined = CRowVector::Zero(cfg.m());
        for (int n = 0; n < cfg.m_e(); ++n) combined += ch.h_e.row(n);
        for (int pilot : obs.jammed_set) {
            obs.y_tr.noalias() += scale * combined.transpose() * pilots.phi.row(pilot);
        }
        const int target_pilot = assign.pilot_of_user.at(attack.target_user);
        obs.target_hit = std::binary_search(obs.jammed_set.begin(), obs.jammed_set.end(),
                                            target_pilot);
    }

    // Adversary's own training-phase receive (eavesdrops the pilots).
    Rng rng_noise_e(base / "noise_adv");
    obs.z_tr = sample_cn_matrix(cfg.m_e(), t_r, rng_noise_e);
    for (int k = 0; k < cfg.k_users(); ++k) {
        obs.z_tr.noalias() +=
            ch.h_jam.row(k).transpose() * pilots.phi.row(assign.pilot_of_user[k]);
    }
    return obs;
}

DataObservation synth_data(const SystemConfig& cfg, const BlockChannels& ch,
                           const CMatrix& x, const AttackSpec& attack,
                           const SeedPath& seed) {
    attack.check(cfg);
    if (x.rows() != cfg.m()) throw DimensionError("channel input must have M rows");
    const Eigen::Index t_uses = x.cols();

    const SeedPath base = seed / "data" / ch.block;
    Rng rng_vk(base / "noise_users");
    Rng rng_ve(base / "noise_adv");

    DataObservation obs;
    obs.y = sample_cn_matrix(cfg.k_users(), t_uses, rng_vk);
    obs.y.noalias() += ch.h * x;

    obs.v_jam = CMatrix::Zero(cfg.m_e(), t_uses);
    if (attack.jams_data_phase() && cfg.rho_jam() > 0.0 && cfg.m_e() > 0) {
        Rng rng_jam(base / "jam");
        for (Eigen::Index r = 0; r < obs.v_jam.rows(); ++r)
            for (Eigen::Index c = 0; c < t_uses; ++c)
                obs.v_jam(r, c) = rng_jam.cgaussian(cfg.rho_jam());
        obs.y.noalias() += ch.h_jam * obs.v_jam;
    }

    obs.z = sample_cn_matrix(cfg.m_e(), t_uses, rng_ve);
    obs.z.noalias() += ch.h_e * x;
    return obs;
}

}  // namespace mimosec

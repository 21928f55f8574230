#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mimosec/config.hpp"
#include "mimosec/rng.hpp"

namespace mimosec {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;

/// One coherence block's channel realizations. Rows of h are the H_k
/// (1 x M BS-to-user gains), h_e is M_e x M BS-to-adversary, rows of
/// h_jam are the H_{jam,k} (1 x M_e adversary-to-user gains).
struct BlockChannels {
    CMatrix h;      // K x M
    CMatrix h_e;    // M_e x M
    CMatrix h_jam;  // K x M_e
    std::uint64_t block = 0;
};

/// L mutually orthogonal pilot rows, Phi * Phi^H = T_r * rho_r * I_L.
struct PilotSet {
    CMatrix phi;  // L x T_r
    double rho_r = 0.0;
};

enum class PilotPolicy { Static, RandomPerBlock };

/// Injective user -> pilot-row mapping.
struct PilotAssignment {
    std::vector<int> pilot_of_user;  // size K, values in [0, L)
    PilotPolicy policy = PilotPolicy::Static;
    bool hidden_from_adversary = false;
};

/// BS and adversary training-phase observations.
struct TrainingObservation {
    CMatrix y_tr;             // M x T_r, BS receive
    CMatrix z_tr;             // M_e x T_r, adversary receive
    std::vector<int> jammed_set;   // pilot indices in J (RandomSubsetJam only)
    bool target_hit = false;       // Pi: target's pilot in the jammed set
};

/// Data-phase observations over t_uses channel uses.
struct DataObservation {
    CMatrix y;      // K x t_uses, per-user scalar sequences
    CMatrix z;      // M_e x t_uses, adversary vectors
    CMatrix v_jam;  // M_e x t_uses, the jamming actually injected
};

/// Samples the block's channel matrices, i.i.d. CN(0,1) entries,
/// independent across blocks and across the three matrices.
BlockChannels sample_block_channels(const SystemConfig& cfg, const SeedPath& seed,
                                    std::uint64_t block = 0);

/// Scaled DFT rows: reproducible, exactly orthogonal pilot family.
/// Throws DimensionError if l > t_r.
PilotSet build_orthogonal_pilots(long long l, long long t_r, double rho_r);

/// Static maps user k -> pilot k; RandomPerBlock draws a fresh uniform
/// injection [K] -> [L] per block.
PilotAssignment assign_pilots(PilotPolicy policy, const SystemConfig& cfg,
                              const SeedPath& seed, std::uint64_t block = 0);

/// Synthesizes the BS / adversary training-phase receive under the attack.
TrainingObservation synth_training(const SystemConfig& cfg, const BlockChannels& ch,
                                   const PilotSet& pilots, const PilotAssignment& assign,
                                   const AttackSpec& attack, const SeedPath& seed);

/// Data-phase receive for a given channel-input sequence x (M x t_uses).
DataObservation synth_data(const SystemConfig& cfg, const BlockChannels& ch,
                           const CMatrix& x, const AttackSpec& attack,
                           const SeedPath& seed);

}  // namespace mimosec

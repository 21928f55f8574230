#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimosec {

struct ViolatedInvariant : std::invalid_argument {
    explicit ViolatedInvariant(const std::string& what) : std::invalid_argument(what) {}
};
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};
struct RegimeMismatch : std::logic_error {
    explicit RegimeMismatch(const std::string& what) : std::logic_error(what) {}
};
struct AttackMismatch : std::logic_error {
    explicit AttackMismatch(const std::string& what) : std::logic_error(what) {}
};

/// Raw system parameters before validation. All rates downstream are in
/// bits per channel use (log base 2).
struct SystemParams {
    int m = 1;                        ///< BS antenna count M
    int m_e = 1;                      ///< adversary antenna count M_e
    int k_users = 1;                  ///< user count K
    long long t_block = 2;            ///< block length T (channel uses)
    long long t_train = 1;            ///< training phase length T_r
    double rho_r = 1.0;               ///< pilot power
    std::vector<double> rho_users{1.0};  ///< per-user data powers rho_1..rho_K
    double rho_jam = 0.0;             ///< jamming power
    double delta = 0.0;               ///< delta-conjugate exponent, >= 0
    double gamma = 1.0;               ///< pilot-set scaling exponent, > 0
    long long l_pilots = 1;           ///< pilot-set cardinality L
    long long j_subset = 1;           ///< jammed-pilot subset size J
};

/// Validated, immutable system configuration.
class SystemConfig {
public:
    /// Checks every model invariant and computes derived quantities.
    /// Throws ViolatedInvariant / DimensionError on failure.
    static SystemConfig validate(const SystemParams& raw);

    int m() const { return p_.m; }
    int m_e() const { return p_.m_e; }
    int k_users() const { return p_.k_users; }
    long long t_block() const { return p_.t_block; }
    long long t_train() const { return p_.t_train; }
    long long t_data() const { return t_data_; }
    double rho_r() const { return p_.rho_r; }
    const std::vector<double>& rho_users() const { return p_.rho_users; }
    double rho_user(int k) const { return p_.rho_users.at(static_cast<std::size_t>(k)); }
    double rho_f() const { return rho_f_; }
    double rho_jam() const { return p_.rho_jam; }
    double delta() const { return p_.delta; }
    double gamma() const { return p_.gamma; }
    long long l_pilots() const { return p_.l_pilots; }
    long long j_subset() const { return p_.j_subset; }

    double rho_max() const { return rho_max_; }
    double rho_min() const { return rho_min_; }
    double data_fraction() const { return static_cast<double>(t_data_) / static_cast<double>(p_.t_block); }

    const SystemParams& params() const { return p_; }

private:
    explicit SystemConfig(SystemParams p);

    SystemParams p_;
    long long t_data_ = 0;
    double rho_f_ = 0.0;
    double rho_max_ = 0.0;
    double rho_min_ = 0.0;
};

enum class AttackKind {
    None,            ///< no adversary activity at all
    DataOnlyJam,     ///< Gaussian jamming of the data phase, silent training
    PilotMatching,   ///< jams the target user's pilot, plus data-phase jamming
    RandomSubsetJam  ///< jams a uniform J-subset of the pilot set, plus data-phase jamming
};

/// Adversary regime. rho_jam is inherited from SystemConfig.
struct AttackSpec {
    AttackKind kind = AttackKind::None;
    int target_user = 0;  ///< PilotMatching target (also the eavesdropping target)

    static AttackSpec none() { return {}; }
    static AttackSpec data_only_jam() { return {AttackKind::DataOnlyJam, 0}; }
    static AttackSpec pilot_matching(int target) { return {AttackKind::PilotMatching, target}; }
    static AttackSpec random_subset_jam(int target = 0) { return {AttackKind::RandomSubsetJam, target}; }

    bool jams_data_phase() const { return kind != AttackKind::None; }
    bool jams_training_phase() const {
        return kind == AttackKind::PilotMatching || kind == AttackKind::RandomSubsetJam;
    }

    /// Checks the spec against a config (target range, J bounds).
    void check(const SystemConfig& cfg) const;
};

}  // namespace mimosec

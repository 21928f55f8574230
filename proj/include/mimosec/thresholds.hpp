#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mimosec/config.hpp"

namespace mimosec {

struct EmptyGrid : std::invalid_argument {
    explicit EmptyGrid(const std::string& what) : std::invalid_argument(what) {}
};

/// Antenna-count threshold: the real-valued solution plus its ceiling,
/// since every source inequality reads "M >= threshold".
struct ThresholdReport {
    std::string quantity;
    double value = 0.0;
    long long ceil_value = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    std::vector<double> rates;
    double round_trip_residual = 0.0;  ///< relative residual of the defining identity
};

/// S(eps) = (M_e rho_max / (2^{(T/T_d) eps} - 1))^{1/delta}: antennas for
/// deterministic-code secrecy under no training-phase jamming.
ThresholdReport s_epsilon(const SystemConfig& cfg, double epsilon, double delta);

/// V(R) = max_k ((2^{R_k T/T_d} - 1)(rho_f + rho_jam + 1)/(a rho_k))^{1/(1-delta)}:
/// antennas for decodability of the rate tuple.
ThresholdReport v_of_r(const SystemConfig& cfg, const std::vector<double>& rates,
                       double delta);

/// G(eps): antennas for the randomized-pilot defense DoF bound.
ThresholdReport g_epsilon(const SystemConfig& cfg, double epsilon);

/// S1(eps) with exponent 1/min(delta, delta+gamma-1); requires delta+gamma > 1.
ThresholdReport s1_epsilon(const SystemConfig& cfg, double epsilon, double delta,
                           double gamma);

/// V1(R): defense-regime decodability threshold.
ThresholdReport v1_of_r(const SystemConfig& cfg, const std::vector<double>& rates,
                        double delta);

/// Grid search for argmin_delta max(V(R, delta), S(eps, delta)); ties break
/// toward smaller delta.
struct DeltaOptimum {
    double delta = 0.0;
    double value = 0.0;
};
DeltaOptimum optimize_delta(const SystemConfig& cfg, const std::vector<double>& rates,
                            double epsilon, const std::vector<double>& grid);

}  // namespace mimosec

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracrecon/fracseries.hpp"
#include "json.hpp"

namespace fracrecon {

enum class ProblemKind { FIP, SIP };

// Everything the reconstruction is allowed to know about a problem instance.
struct ProblemData {
    FdoSpec fdo;
    FracPowerSeries a0;
    FracPowerSeries b0;
    std::optional<double> kernel_gamma;  // absent: no memory term
    FracPowerSeries K0;
    FracPowerSeries G;  // spatial integral of the source
    FracPowerSeries I;  // boundary integral
    int delta_flag = 0;
    double psi0 = 0.0;
    ProblemKind kind = ProblemKind::FIP;
    std::size_t i_star = 0;  // 1-based index of the unknown minor order (FIP only)
    double omega_measure = 1.0;
};

struct TrueParams {
    double nu1;
    double second;  // nu_{i*} (FIP) or gamma (SIP)
};

struct Scenario {
    std::string name;
    ProblemData data;
    FracPowerSeries psi_exact;
    TrueParams truth;
};

struct ScenarioParams {
    double nu = 0.5;
    std::optional<double> gamma;
};

std::vector<std::string> builtin_names();
Scenario builtin(const std::string& name, const ScenarioParams& params = {});

// (K * s)(t) with K = t^{-gamma} K0; zero series if the problem has no memory term.
FracPowerSeries kernel_convolve(const ProblemData& d, const FracPowerSeries& s);

// G - delta K*I + a0 psi + K*(b0 psi) - I
FracPowerSeries c_nu(const ProblemData& d, const FracPowerSeries& psi);

// Largest coefficient of apply_fdo(fdo, psi) - c_nu(psi).
double identity_residual(const Scenario& s);

// Runs the load-time assertions; throws InvariantViolation with the residual.
void validate(const Scenario& s);

Scenario load_scenario(const std::string& config_text);
nlohmann::json serialize(const Scenario& s);

enum class NoiseKind { None, FTN, STN, TTN };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::None;
    double delta = 0.0;
};

std::string to_string(NoiseKind k);
NoiseKind noise_from_string(const std::string& s);

double noise_value(NoiseKind kind, double delta, double nu1, double t);

struct Observation {
    std::vector<double> times;
    std::vector<double> values;
    double psi0 = 0.0;
    NoiseSpec noise;
};

// t_k = k tau, k = 1..K
std::vector<double> uniform_times(int K, double tau);

Observation observe(const Scenario& s, const std::vector<double>& times, const NoiseSpec& noise);

std::string observation_to_csv(const Observation& obs);
Observation observation_from_csv(const std::string& text);

}  // namespace fracrecon

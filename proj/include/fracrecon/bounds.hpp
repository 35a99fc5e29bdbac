#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracrecon/scenario.hpp"
#include "json.hpp"

namespace fracrecon::bounds {

enum class Provenance { Supplied, Estimated, Default, Derived };
std::string to_string(Provenance p);

struct LedgerEntry {
    double value;
    Provenance provenance;
};

// Named constants with their origin. Supplied values are never overwritten by
// estimates or defaults.
class ConstantsLedger {
public:
    void supply(const std::string& name, double value);
    void estimate(const std::string& name, double value);
    void set_default(const std::string& name, double value);
    void derive(const std::string& name, double value);

    bool has(const std::string& name) const;
    double get(const std::string& name) const;  // MissingConstant
    Provenance provenance(const std::string& name) const;
    const std::map<std::string, LedgerEntry>& entries() const { return entries_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Recomputes C3 = C0 |Omega| max{1,C2} sum ||rho_i|| and compares to the stored value.
    bool c3_consistent(double omega_measure, std::size_t M) const;

private:
    void put(const std::string& name, double value, Provenance p);
    std::map<std::string, LedgerEntry> entries_;
    std::vector<std::string> warnings_;
};

nlohmann::json to_json(const ConstantsLedger& l);
ConstantsLedger ledger_from_json(const nlohmann::json& j);

enum class FdoType { I, II };
FdoType leading_type(const FdoSpec& fdo);

// Free parameters of the horizon formulas that the problem data does not fix.
struct BoundsConfig {
    double t_star = 0.2;
    double alpha = 0.5;        // Holder exponent of the data
    double rho_holder = 1.0;   // exponent of the coefficient norms
    std::optional<double> t1_star;     // default t_star
    std::optional<double> alpha1;      // default: from the series of D^{nu1a} psi
    double alpha5 = 0.5;               // Holder exponent of K0
    std::optional<double> nu_lower;    // default nu_M / 2
    std::optional<double> nu_upper;    // default (1 + nu_1) / 2
    std::optional<double> gamma_bar;   // default gamma / 2
    double t_a = 1e-3;                 // time at which nu_{1,a} is taken
    std::optional<double> nu1a;        // overrides the value taken at t_a
    double lambda = 0.99;
    double mu = 0.01;
    double eps_I = 0.05;
    double eps_II = 0.9;
    double eps_III = 0.9;
    double eps = 1e-3;
    int norm_grid = 512;
};

struct Horizon {
    std::optional<double> value;
    std::string argmin;
    std::vector<std::pair<std::string, double>> terms;
    std::string absent_reason;
};
nlohmann::json to_json(const Horizon& h);

Horizon t_i0(double eps_I, FdoType type, double rho1_at_0, double c_nu_0, double t_star);

double t_k(const FracPowerSeries& K0, double t_star);

double c4(const ConstantsLedger& ledger, const FdoSpec& fdo);

// Exponent nu_0 of the FIP horizon; WrongBranch when the FDO is too short.
double nu_zero(const FdoSpec& fdo, std::size_t i_star, double alpha);

Horizon t_i(double eps_I, const ConstantsLedger& ledger, const Scenario& s, const BoundsConfig& cfg);

// Smallest n >= 1 with |a/n + b| > 1e-12 (|a| + |b|); NotFound beyond 1e6.
long find_n_star(double a, double b);
long find_n_star(const Scenario& s);
// U(0, n) split as a/n + b.
std::pair<double, double> u_at_zero(const Scenario& s);

struct HorizonPair {
    Horizon general;
    Horizon known_nu1;
};

HorizonPair t_ii(double eps_II, ConstantsLedger& ledger, const Scenario& s, const BoundsConfig& cfg);
HorizonPair t_iii(double eps_III, ConstantsLedger& ledger, const Scenario& s, const BoundsConfig& cfg);

// Sampled norms on [0, t_star] (lower bounds): rho_i, 1/rho_{i*}, a0, b0, K0.
ConstantsLedger estimate_norms(const Scenario& s, int grid_density, double t_star, double rho_holder,
                               double alpha5);
double sampled_sup(const FracPowerSeries& f, int grid_density, double T);
double sampled_seminorm(const FracPowerSeries& f, double exponent, int grid_density, double T);

// Existential constants at 1.0 (with warnings), sampled norms, and the derived C3, C4.
ConstantsLedger default_ledger(const Scenario& s, const BoundsConfig& cfg);
void complete_ledger(ConstantsLedger& l, const Scenario& s, const BoundsConfig& cfg);

struct DeltaPoint {
    double t_a;
    double delta;
    bool valid;
};

struct DeltaCurve {
    int which;
    std::vector<DeltaPoint> points;  // in grid order
    std::optional<double> threshold;  // largest t_a with delta < eps at every grid point <= t_a
};

DeltaCurve empirical_delta(const Scenario& s, int which, const std::vector<double>& t_a_grid, double step,
                           double eps);
std::vector<double> log_grid(double hi, double lo, int per_decade);
std::string delta_to_csv(const DeltaCurve& c);

struct BoundsReport {
    Horizon T_I0, T_K, T_I;
    HorizonPair T_II, T_III;
    double eps_I, eps_II, eps_III, eps;
    std::vector<std::string> warnings;
    ConstantsLedger ledger;
};

// Invariant: T_I <= T_I0 whenever both are present.
BoundsReport compute_bounds(const Scenario& s, const ConstantsLedger& supplied, const BoundsConfig& cfg);
nlohmann::json to_json(const BoundsReport& r);

}  // namespace fracrecon::bounds

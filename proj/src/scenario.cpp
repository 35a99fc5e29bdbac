#include "fracrecon/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "fracrecon/error.hpp"
#include "fracrecon/format.hpp"
#include "fracrecon/quadrature.hpp"
#include "fracrecon/specfun.hpp"

namespace fracrecon {

using specfun::gamma;

namespace {

using Source = std::function<double(double, double, double)>;

// Checks the stored closed-form source integral against a tensor Gauss-Legendre rule
// of the pointwise source over [0,L]^2.
void check_source_integral(const Scenario& s, const Source& g, double L) {
    const auto rule = oracle::gauss_legendre(32);
    for (double t : {0.01, 0.05, 0.1, 0.2, 0.5}) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule->nodes.size(); ++i)
            for (std::size_t j = 0; j < rule->nodes.size(); ++j)
                acc += rule->weights[i] * rule->weights[j] * g(L * rule->nodes[i], L * rule->nodes[j], t);
        acc *= L * L;
        const double stored = s.data.G.eval(t);
        if (std::fabs(acc - stored) > 1e-8 * std::max(1.0, std::fabs(stored))) {
            std::ostringstream os;
            os << s.name << ": source integral mismatch at t=" << t << " (closed form " << stored
               << ", quadrature " << acc << ")";
            fail(ErrorCode::InvariantViolation, os.str());
        }
    }
}

FracPowerSeries series(std::vector<Term> t) { return FracPowerSeries(std::move(t)); }

Scenario make_ex82(double nu, double gam, bool sip) {
    if (!(nu > 0.0 && nu < 1.0)) fail(ErrorCode::Domain, "nu must lie in (0,1)");
    if (!(gam > 0.0 && gam < 1.0)) fail(ErrorCode::Domain, "gamma must lie in (0,1)");
    Scenario s;
    s.name = sip ? "sip_ex83" : "fip_ex82";
    ProblemData& d = s.data;
    d.fdo = FdoSpec({
        {nu, FracPowerSeries::constant(0.5), Placement::Outside},
        {nu / 2.0, FracPowerSeries::constant(-0.25), Placement::Outside},
        {nu / 3.0, series({{0.25, 0.0}, {0.25, 2.0}}), Placement::Inside},
    });
    d.a0 = FracPowerSeries::constant(2.0);
    d.b0 = sip ? FracPowerSeries::constant(15.0) : FracPowerSeries();
    d.kernel_gamma = gam;
    d.K0 = FracPowerSeries::constant(1.0);
    d.I = FracPowerSeries();
    d.delta_flag = 0;
    d.psi0 = 1.0 / 15.0;
    d.kind = sip ? ProblemKind::SIP : ProblemKind::FIP;
    d.i_star = sip ? 0 : 3;
    d.omega_measure = 1.0;

    const double g1 = gamma(1.0 + nu);
    // bracket multiplying the spatial profile in the first source component
    const FracPowerSeries bracket = series({
        {7.5 * g1, 0.0},
        {-3.75 * g1 / gamma(1.0 + nu / 2.0), nu / 2.0},
        {1.0 / (2.0 * gamma(3.0 - nu / 3.0)), 2.0 - nu / 3.0},
        {3.75 * g1 / gamma(1.0 + 2.0 * nu / 3.0), 2.0 * nu / 3.0},
        {3.75 * gamma(3.0 + nu) / gamma(3.0 + 2.0 * nu / 3.0), 2.0 + 2.0 * nu / 3.0},
    });
    const FracPowerSeries amp = series({{1.0, 0.0}, {15.0, nu}});
    FracPowerSeries G = scale(bracket, 1.0 / 15.0) - scale(amp, 2.0 / 15.0);
    const double memory_coeff = gamma(1.0 - gam) * g1 / gamma(2.0 + nu - gam);
    const FracPowerSeries extra = series({{1.0 / (1.0 - gam), 1.0 - gam}, {15.0 * memory_coeff, 1.0 - gam + nu}});
    if (sip) G = G - extra;
    d.G = G;

    s.psi_exact = series({{1.0 / 15.0, 0.0}, {1.0, nu}});
    s.truth = {nu, sip ? gam : nu / 3.0};

    const Source g = [=](double x, double y, double t) {
        const double prof = x * x * (1 - x) * (1 - x) + y * y * (1 - y) * (1 - y);
        const double v1 = prof * bracket.eval(t);
        const double v2 = -2.0 * (1.0 + 15.0 * std::pow(t, nu)) *
                          (2 - 6 * x + 7 * x * x - 2 * x * x * x + x * x * x * x - 6 * y + 7 * y * y -
                           2 * y * y * y + y * y * y * y);
        const double v3 = -4.0 * (1 - 3 * x + 3 * x * x - 3 * y + 3 * y * y) *
                          (std::pow(t, 1 - gam) / (1 - gam) + 15.0 * std::pow(t, 1 - gam + nu) * memory_coeff);
        const double v4 = sip ? -extra.eval(t) : 0.0;
        return v1 + v2 + v3 + v4;
    };
    check_source_integral(s, g, 1.0);
    return s;
}

Scenario make_ex74(double nu, double gam) {
    if (!(nu > 0.0 && nu < 1.0)) fail(ErrorCode::Domain, "nu must lie in (0,1)");
    if (!(gam > 0.0 && gam < 1.0)) fail(ErrorCode::Domain, "gamma must lie in (0,1)");
    Scenario s;
    s.name = "ex74";
    ProblemData& d = s.data;
    const FracPowerSeries quarter_1pt2 = series({{-0.25, 0.0}, {-0.25, 2.0}});
    d.fdo = FdoSpec({
        {nu, FracPowerSeries::constant(0.5), Placement::Outside},
        {nu / 5.0, quarter_1pt2, Placement::Outside},
    });
    d.a0 = FracPowerSeries();
    d.b0 = FracPowerSeries::constant(4.0);
    d.kernel_gamma = gam;
    d.K0 = series({{1.0, 0.0}, {1.0, 1.0}});
    d.I = FracPowerSeries();
    d.delta_flag = 0;
    const double scale_factor = 256.0 / 225.0;
    d.psi0 = 2.0 * scale_factor;
    d.kind = ProblemKind::FIP;
    d.i_star = 2;
    d.omega_measure = 4.0;

    const double g1 = gamma(1.0 + nu);
    const double r = g1 / gamma(1.0 + 4.0 * nu / 5.0);
    const FracPowerSeries gbar1 = series({{g1 / 2.0, 0.0}, {-r / 4.0, 4.0 * nu / 5.0}, {-r / 4.0, 2.0 + 4.0 * nu / 5.0}});
    const FracPowerSeries gbar2 = series({{2.0, 0.0}, {1.0, nu}});
    const FracPowerSeries gbar3 = series({
        {2.0 / (1.0 - gam), 1.0 - gam},
        {2.0 / (2.0 - gam), 2.0 - gam},
        {gamma(1.0 - gam) * g1 / gamma(2.0 - gam + nu), 1.0 + nu - gam},
        {gamma(2.0 - gam) * g1 / gamma(3.0 - gam + nu), 2.0 - gam + nu},
    });
    d.G = scale(gbar1 - scale(gbar3, 4.0), scale_factor);

    s.psi_exact = scale(gbar2, scale_factor);
    s.truth = {nu, nu / 5.0};

    const Source g = [=](double x1, double x2, double t) {
        const double p1 = x1 * x1 * (2 - x1) * (2 - x1);
        const double p2 = x2 * x2 * (2 - x2) * (2 - x2);
        const double q1 = 2 - 6 * x1 + 3 * x1 * x1;
        const double q2 = 2 - 6 * x2 + 3 * x2 * x2;
        const double lap = p2 * q1 + p1 * q2;
        return p1 * p2 * gbar1.eval(t) - 4.0 * lap * gbar2.eval(t) - 4.0 * (lap + p1 * p2) * gbar3.eval(t);
    };
    check_source_integral(s, g, 2.0);
    return s;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"fip_ex82", "sip_ex83", "ex74"}; }

Scenario builtin(const std::string& name, const ScenarioParams& params) {
    Scenario s;
    if (name == "fip_ex82")
        s = make_ex82(params.nu, params.gamma.value_or(0.5), false);
    else if (name == "sip_ex83")
        s = make_ex82(params.nu, params.gamma.value_or(0.9), true);
    else if (name == "ex74")
        s = make_ex74(params.nu, params.gamma.value_or(0.5));
    else
        fail(ErrorCode::UnknownScenario, "no built-in scenario named '" + name + "'");
    validate(s);
    return s;
}

FracPowerSeries kernel_convolve(const ProblemData& d, const FracPowerSeries& s) {
    if (!d.kernel_gamma || d.K0.empty() || s.empty()) return FracPowerSeries();
    return convolve_singular(*d.kernel_gamma, d.K0, s);
}

FracPowerSeries c_nu(const ProblemData& d, const FracPowerSeries& psi) {
    FracPowerSeries out = d.G + multiply(d.a0, psi) + kernel_convolve(d, multiply(d.b0, psi)) - d.I;
    if (d.delta_flag != 0) out = out - kernel_convolve(d, d.I);
    return out;
}

double identity_residual(const Scenario& s) {
    const FracPowerSeries r = apply_fdo(s.data.fdo, s.psi_exact) - c_nu(s.data, s.psi_exact);
    double m = 0.0;
    for (const Term& t : r.terms()) m = std::max(m, std::fabs(t.c));
    return m;
}

void validate(const Scenario& s) {
    const ProblemData& d = s.data;
    double at0 = 0.0;
    try {
        at0 = s.psi_exact.at_zero();
    } catch (const Error&) {
        fail(ErrorCode::InvariantViolation, s.name + ": psi is unbounded at 0");
    }
    if (std::fabs(at0 - d.psi0) > 1e-14 * std::max(1.0, std::fabs(at0)))
        fail(ErrorCode::InvariantViolation, s.name + ": psi0 differs from psi(0)");
    if (d.kind == ProblemKind::FIP && (d.i_star < 2 || d.i_star > d.fdo.size()))
        fail(ErrorCode::InvariantViolation, s.name + ": i_star must lie in 2..M");
    if (d.kind == ProblemKind::SIP && !d.kernel_gamma)
        fail(ErrorCode::InvariantViolation, s.name + ": the second problem needs a kernel");
    if (d.delta_flag != 0 && d.delta_flag != 1) fail(ErrorCode::InvariantViolation, s.name + ": delta_flag must be 0 or 1");

    double c0 = 0.0;
    try {
        c0 = c_nu(d, s.psi_exact).at_zero();
    } catch (const Error&) {
        fail(ErrorCode::InvariantViolation, s.name + ": C_nu is unbounded at 0");
    }
    if (std::fabs(c0) <= 1e-14) fail(ErrorCode::InvariantViolation, s.name + ": C_nu(0) = 0");

    const double res = identity_residual(s);
    if (!(res <= 1e-8)) {
        std::ostringstream os;
        os << s.name << ": D psi = C_nu fails, largest residual coefficient " << res;
        fail(ErrorCode::InvariantViolation, os.str());
    }
}

nlohmann::json serialize(const Scenario& s) {
    const ProblemData& d = s.data;
    nlohmann::json j;
    j["name"] = s.name;
    j["fdo"] = to_json(d.fdo);
    j["a0"] = to_json(d.a0);
    j["b0"] = to_json(d.b0);
    j["kernel"] = {{"gamma", d.kernel_gamma ? nlohmann::json(*d.kernel_gamma) : nlohmann::json(nullptr)},
                   {"K0", to_json(d.K0)}};
    j["G"] = to_json(d.G);
    j["I"] = to_json(d.I);
    j["delta_flag"] = d.delta_flag;
    j["omega_measure"] = d.omega_measure;
    j["psi"] = {{"series", to_json(s.psi_exact)}, {"psi0", d.psi0}};
    j["true_params"] = {{"nu1", s.truth.nu1},
                        {"second", s.truth.second},
                        {"kind", d.kind == ProblemKind::FIP ? "FIP" : "SIP"},
                        {"i_star", d.i_star}};
    return j;
}

Scenario load_scenario(const std::string& config_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(config_text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, e.what());
    }
    Scenario s;
    try {
        ProblemData& d = s.data;
        s.name = j.value("name", std::string("custom"));
        d.fdo = fdo_from_json(j.at("fdo"));
        d.a0 = j.contains("a0") ? series_from_json(j["a0"]) : FracPowerSeries();
        d.b0 = j.contains("b0") ? series_from_json(j["b0"]) : FracPowerSeries();
        if (j.contains("kernel")) {
            const auto& k = j["kernel"];
            if (k.contains("gamma") && !k["gamma"].is_null()) d.kernel_gamma = k["gamma"].get<double>();
            if (k.contains("K0")) d.K0 = series_from_json(k["K0"]);
        }
        d.G = series_from_json(j.at("G"));
        d.I = j.contains("I") ? series_from_json(j["I"]) : FracPowerSeries();
        d.delta_flag = j.value("delta_flag", 0);
        d.omega_measure = j.value("omega_measure", 1.0);
        s.psi_exact = series_from_json(j.at("psi").at("series"));
        d.psi0 = j["psi"].contains("psi0") ? j["psi"]["psi0"].get<double>() : s.psi_exact.at_zero();
        const auto& tp = j.at("true_params");
        s.truth = {tp.at("nu1").get<double>(), tp.at("second").get<double>()};
        const std::string kind = tp.value("kind", std::string("FIP"));
        if (kind == "FIP")
            d.kind = ProblemKind::FIP;
        else if (kind == "SIP")
            d.kind = ProblemKind::SIP;
        else
            fail(ErrorCode::Parse, "true_params.kind must be FIP or SIP");
        d.i_star = tp.value("i_star", std::size_t{0});
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, e.what());
    }
    validate(s);
    return s;
}

std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::FTN: return "ftn";
        case NoiseKind::STN: return "stn";
        case NoiseKind::TTN: return "ttn";
        case NoiseKind::None: break;
    }
    return "none";
}

NoiseKind noise_from_string(const std::string& s) {
    std::string l(s);
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (l == "ftn") return NoiseKind::FTN;
    if (l == "stn") return NoiseKind::STN;
    if (l == "ttn") return NoiseKind::TTN;
    if (l == "none") return NoiseKind::None;
    fail(ErrorCode::Parse, "unknown noise kind '" + s + "'");
}

double noise_value(NoiseKind kind, double delta, double nu1, double t) {
    if (kind == NoiseKind::None) return 0.0;
    if (!(t > 0.0 && t < 1.0)) fail(ErrorCode::Domain, "noise profile needs t in (0,1)");
    switch (kind) {
        case NoiseKind::FTN: return delta * t * std::fabs(std::log(t));
        case NoiseKind::STN: return delta * std::pow(t, nu1);
        case NoiseKind::TTN: return delta * std::pow(t, nu1) * std::fabs(std::log(t));
        case NoiseKind::None: break;
    }
    return 0.0;
}

std::vector<double> uniform_times(int K, double tau) {
    if (K < 1 || !(tau > 0.0)) fail(ErrorCode::Domain, "time grid needs K >= 1 and tau > 0");
    std::vector<double> t(K);
    for (int k = 1; k <= K; ++k) t[k - 1] = k * tau;
    return t;
}

namespace {

void check_times(const std::vector<double>& times) {
    if (times.empty()) fail(ErrorCode::Domain, "observation grid is empty");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] > 0.0 && times[k] < 1.0)) fail(ErrorCode::Domain, "observation times must lie in (0,1)");
        if (k > 0 && !(times[k] > times[k - 1])) fail(ErrorCode::Domain, "observation times must increase");
    }
}

}  // namespace

Observation observe(const Scenario& s, const std::vector<double>& times, const NoiseSpec& noise) {
    check_times(times);
    Observation obs;
    obs.times = times;
    obs.psi0 = s.data.psi0;
    obs.noise = noise;
    obs.values.reserve(times.size());
    for (double t : times) obs.values.push_back(s.psi_exact.eval(t) + noise_value(noise.kind, noise.delta, s.truth.nu1, t));
    return obs;
}

std::string observation_to_csv(const Observation& obs) {
    std::ostringstream os;
    os << "# psi0=" << shortest(obs.psi0) << ",noise=" << to_string(obs.noise.kind)
       << ",delta=" << shortest(obs.noise.delta) << "\n";
    os << "t,psi_delta\n";
    for (std::size_t k = 0; k < obs.times.size(); ++k) os << shortest(obs.times[k]) << "," << shortest(obs.values[k]) << "\n";
    return os.str();
}

Observation observation_from_csv(const std::string& text) {
    Observation obs;
    bool have_psi0 = false, have_header = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string item;
            while (std::getline(meta, item, ',')) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) continue;
                std::string key = item.substr(0, eq);
                key.erase(0, key.find_first_not_of(' '));
                const std::string val = item.substr(eq + 1);
                try {
                    if (key == "psi0") {
                        obs.psi0 = std::stod(val);
                        have_psi0 = true;
                    } else if (key == "noise") {
                        obs.noise.kind = noise_from_string(val);
                    } else if (key == "delta") {
                        obs.noise.delta = std::stod(val);
                    }
                } catch (const std::logic_error&) {
                    fail(ErrorCode::Parse, "bad metadata entry '" + item + "'");
                }
            }
            continue;
        }
        if (!have_header) {
            if (line != "t,psi_delta") fail(ErrorCode::Parse, "expected header t,psi_delta");
            have_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail(ErrorCode::Parse, "malformed row '" + line + "'");
        try {
            obs.times.push_back(std::stod(line.substr(0, comma)));
            obs.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            fail(ErrorCode::Parse, "malformed row '" + line + "'");
        }
        if (!std::isfinite(obs.values.back())) fail(ErrorCode::Parse, "non-finite observation value");
    }
    if (!have_psi0) fail(ErrorCode::Parse, "observation CSV lacks the psi0 metadata line");
    check_times(obs.times);
    return obs;
}

}  // namespace fracrecon

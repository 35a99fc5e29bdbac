#include "fracrecon/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include "fracrecon/error.hpp"
#include "fracrecon/format.hpp"
#include "fracrecon/reference.hpp"

namespace fracrecon {

QuasiOptConfig PipelineSettings::quasiopt(ProblemKind kind) const {
    QuasiOptConfig c;
    c.sigma1 = sigma1;
    c.xi1 = xi1;
    c.K1 = K1;
    c.tbar1 = tbar1.value_or(t_K());
    c.xi2 = xi2;
    c.K2 = K2;
    c.upsilon = upsilon;
    c.ratio_step = kind == ProblemKind::FIP ? lambda : mu;
    c.validate();
    return c;
}

RegressionModel PipelineSettings::model() const { return build_basis(betas, jacobi_degree, weight_a, t_K()); }

nlohmann::json PipelineSettings::to_json() const {
    return {{"betas", betas},   {"jacobi_degree", jacobi_degree},
            {"weight_a", weight_a}, {"K", K},
            {"tau", tau},       {"sigma1", sigma1},
            {"xi1", xi1},       {"K1", K1},
            {"tbar1", tbar1.value_or(t_K())}, {"xi2", xi2},
            {"K2", K2},         {"upsilon", upsilon},
            {"lambda", lambda}, {"mu", mu}};
}

ReconstructionResult run_pipeline(const Scenario& s, const Observation& obs, const PipelineSettings& p,
                                  CandidateGrid* grid_out) {
    if (std::fabs(obs.psi0 - s.data.psi0) > 1e-12)
        fail(ErrorCode::InputMismatch, "observation psi0=" + shortest(obs.psi0) + " but scenario psi0=" +
                                           shortest(s.data.psi0));
    return reconstruct(s.data, p.model(), obs, p.quasiopt(s.data.kind), p.workers, grid_out);
}

std::optional<std::array<double, 2>> reference_cell(ProblemKind kind, double delta, NoiseKind noise, double nu) {
    if (noise == NoiseKind::None) return std::nullopt;
    const int k = static_cast<int>(noise) - static_cast<int>(NoiseKind::FTN);
    const bool coarse = std::fabs(delta - 0.01) < 1e-15;
    const bool fine = std::fabs(delta - 0.001) < 1e-15;
    if (!coarse && !fine) return std::nullopt;
    auto find = [&](const auto& rows) -> std::optional<std::array<double, 2>> {
        for (const auto& r : rows)
            if (std::fabs(r.nu - nu) < 1e-12) return coarse ? r.coarse[k] : r.fine[k];
        return std::nullopt;
    };
    return kind == ProblemKind::FIP ? find(reference::kFip) : find(reference::kSip);
}

std::vector<TableCell> run_table(ProblemKind kind, double delta, const std::vector<NoiseKind>& noises,
                                 const std::vector<double>& nus, const PipelineSettings& p) {
    const std::string name = kind == ProblemKind::FIP ? "fip_ex82" : "sip_ex83";
    const std::vector<double> times = uniform_times(p.K, p.tau);
    std::vector<TableCell> cells;
    for (double nu : nus)
        for (NoiseKind nk : noises) {
            TableCell c{nu, nk, delta, std::nullopt, {}, reference_cell(kind, delta, nk, nu)};
            try {
                const Scenario s = builtin(name, {nu, std::nullopt});
                c.result = run_pipeline(s, observe(s, times, {nk, delta}), p);
            } catch (const Error& e) {
                c.error = e.what();
            }
            cells.push_back(std::move(c));
        }
    return cells;
}

namespace {

std::string num(double v, bool four) {
    if (!four) return shortest(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string table_to_csv(ProblemKind kind, const std::vector<TableCell>& cells, bool four) {
    const std::string second = kind == ProblemKind::FIP ? "nu_istar" : "gamma";
    std::string out = "nu,noise,delta,nu1," + second + ",sigma,t_bar,ref_nu1,ref_" + second + ",status\n";
    for (const TableCell& c : cells) {
        out += num(c.nu, false) + "," + to_string(c.noise) + "," + shortest(c.delta) + ",";
        if (c.result)
            out += num(c.result->pair.nu1, four) + "," + num(c.result->pair.second, four) + "," +
                   shortest(c.result->sigma) + "," + shortest(c.result->t_bar) + ",";
        else
            out += ",,,,";
        if (c.reference)
            out += num((*c.reference)[0], true) + "," + num((*c.reference)[1], true) + ",";
        else
            out += ",,";
        out += c.result ? "ok" : "failed: " + c.error;
        out += "\n";
    }
    return out;
}

nlohmann::json table_to_json(ProblemKind kind, const std::vector<TableCell>& cells) {
    nlohmann::json rows = nlohmann::json::array();
    for (const TableCell& c : cells) {
        nlohmann::json r = {{"nu", c.nu}, {"noise", to_string(c.noise)}, {"delta", c.delta}};
        if (c.result)
            r["result"] = to_json(*c.result);
        else
            r["error"] = c.error;
        if (c.reference) r["reference"] = {(*c.reference)[0], (*c.reference)[1]};
        rows.push_back(r);
    }
    return {{"kind", kind == ProblemKind::FIP ? "FIP" : "SIP"}, {"rows", rows}};
}

}  // namespace fracrecon

#include "fracrecon/quasiopt.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "fracrecon/error.hpp"
#include "fracrecon/format.hpp"

namespace fracrecon {

void QuasiOptConfig::validate() const {
    if (!(sigma1 > 0.0)) fail(ErrorCode::Domain, "sigma1 must be positive");
    if (!(xi1 > 0.0 && xi1 < 1.0) || !(xi2 > 0.0 && xi2 < 1.0)) fail(ErrorCode::Domain, "grid ratios must lie in (0,1)");
    if (K1 < 2 || K2 < 2) fail(ErrorCode::Domain, "grids need at least two points");
    if (!(tbar1 > 0.0 && tbar1 < 1.0)) fail(ErrorCode::Domain, "tbar1 must lie in (0,1)");
    if (!(upsilon > 0.0)) fail(ErrorCode::Domain, "upsilon must be positive");
    if (!(ratio_step > 0.0 && ratio_step < 1.0)) fail(ErrorCode::Domain, "ratio step must lie in (0,1)");
}

double QuasiOptConfig::sigma(int i) const { return sigma1 * std::pow(xi1, i); }

double QuasiOptConfig::tbar(int j) const { return tbar1 * std::pow(xi2, j); }

int CandidateGrid::invalid_count() const {
    int n = 0;
    for (const Candidate& c : entries_) n += c.valid ? 0 : 1;
    return n;
}

double weighted_norm(double d1, double d2, double upsilon) { return std::hypot(upsilon * d1, d2); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double diff(const Candidate& a, const Candidate& b, double upsilon) {
    if (!a.valid || !b.valid) return kInf;
    const double v = weighted_norm(a.pair.nu1 - b.pair.nu1, a.pair.second - b.pair.second, upsilon);
    return std::isfinite(v) ? v : kInf;
}

}  // namespace

Selection select(const CandidateGrid& grid, const QuasiOptConfig& cfg) {
    Selection sel;
    sel.invalid_candidates = grid.invalid_count();
    sel.i_j.resize(grid.cols());
    for (int j = 0; j < grid.cols(); ++j) {
        double best = kInf;
        for (int i = 1; i < grid.rows(); ++i) {
            const double d = diff(grid.at(i, j), grid.at(i - 1, j), cfg.upsilon);
            if (d < best) {
                best = d;
                sel.i_j[j] = i;
            }
        }
        if (!sel.i_j[j]) ++sel.excluded_columns;
    }

    double best = kInf;
    for (int j = 1; j < grid.cols(); ++j) {
        if (!sel.i_j[j] || !sel.i_j[j - 1]) continue;
        const double d = diff(grid.at(*sel.i_j[j], j), grid.at(*sel.i_j[j - 1], j - 1), cfg.upsilon);
        if (d < best) {
            best = d;
            sel.j0 = j;
        }
    }
    if (sel.j0 < 0) {
        // No comparable neighbouring columns: fall back to the first usable column.
        for (int j = 0; j < grid.cols(); ++j)
            if (sel.i_j[j]) {
                sel.j0 = j;
                break;
            }
    }
    if (sel.j0 < 0) fail(ErrorCode::NoValidCandidates, "every t_bar column lacks two consecutive valid candidates");
    sel.i0 = *sel.i_j[sel.j0];
    sel.final = grid.at(sel.i0, sel.j0).pair;
    return sel;
}

CandidateGrid evaluate_grid(const ProblemData& data, const RegressionModel& model, const Observation& obs,
                            const QuasiOptConfig& cfg, int workers) {
    cfg.validate();
    const TikhonovProblem problem(model, obs);
    CandidateGrid grid(cfg.K1, cfg.K2);

    auto row = [&](int i) {
        std::optional<TikhonovFit> fit;
        std::string fit_error;
        try {
            fit = problem.fit(cfg.sigma(i));
        } catch (const Error& e) {
            fit_error = std::string(to_string(e.code()));
        }
        std::optional<AuxAssembler> aux;
        if (fit) {
            try {
                aux.emplace(data, fit->psi_fit);
            } catch (const Error& e) {
                fit_error = std::string(to_string(e.code()));
            }
        }
        for (int j = 0; j < cfg.K2; ++j) {
            Candidate& c = grid.at(i, j);
            if (!aux) {
                c.reason = fit_error;
                continue;
            }
            try {
                const EstimatorInput inp{&data, fit->psi_fit, obs.psi0};
                const double tb = cfg.tbar(j);
                const double n1 = nu1_estimate(inp, tb);
                const double second = second_estimate(*aux, data.kind, n1, tb, cfg.ratio_step);
                if (!std::isfinite(n1) || !std::isfinite(second)) {
                    c.reason = std::string(to_string(ErrorCode::RatioDegenerate));
                    continue;
                }
                c.pair = {n1, second, data.kind};
                c.valid = true;
            } catch (const Error& e) {
                c.reason = std::string(to_string(e.code()));
            }
        }
    };

    int n = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(1, std::min(n, cfg.K1));
    if (n == 1) {
        for (int i = 0; i < cfg.K1; ++i) row(i);
        return grid;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int w = 0; w < n; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < cfg.K1; i = next.fetch_add(1)) row(i);
        });
    for (auto& th : pool) th.join();
    return grid;
}

std::string grid_to_csv(const CandidateGrid& grid, const QuasiOptConfig& cfg) {
    std::ostringstream os;
    os << "i,j,sigma,t_bar,nu1,second,valid,reason\n";
    for (int i = 0; i < grid.rows(); ++i)
        for (int j = 0; j < grid.cols(); ++j) {
            const Candidate& c = grid.at(i, j);
            os << i + 1 << "," << j + 1 << "," << shortest(cfg.sigma(i)) << "," << shortest(cfg.tbar(j)) << ",";
            if (c.valid)
                os << shortest(c.pair.nu1) << "," << shortest(c.pair.second) << ",1,";
            else
                os << ",,0," << c.reason;
            os << "\n";
        }
    return os.str();
}

}  // namespace fracrecon

namespace fracrecon {

ReconstructionResult reconstruct(const ProblemData& data, const RegressionModel& model, const Observation& obs,
                                 const QuasiOptConfig& cfg, int workers, CandidateGrid* grid_out) {
    CandidateGrid grid = evaluate_grid(data, model, obs, cfg, workers);
    ReconstructionResult r;
    r.selection = select(grid, cfg);
    r.pair = r.selection.final;
    r.sigma = cfg.sigma(r.selection.i0);
    r.t_bar = cfg.tbar(r.selection.j0);
    if (grid_out) *grid_out = std::move(grid);
    return r;
}

nlohmann::json to_json(const ReconstructionResult& r) {
    nlohmann::json ij = nlohmann::json::array();
    for (const auto& v : r.selection.i_j) ij.push_back(v ? nlohmann::json(*v + 1) : nlohmann::json(nullptr));
    const bool fip = r.pair.kind == ProblemKind::FIP;
    return {{"kind", fip ? "FIP" : "SIP"},
            {"nu1", r.pair.nu1},
            {fip ? "nu_istar" : "gamma", r.pair.second},
            {"sigma", r.sigma},
            {"t_bar", r.t_bar},
            {"i0", r.selection.i0 + 1},
            {"j0", r.selection.j0 + 1},
            {"i_j", ij},
            {"invalid_candidates", r.selection.invalid_candidates},
            {"excluded_columns", r.selection.excluded_columns}};
}

}  // namespace fracrecon

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracrecon/reconstruct.hpp"
#include "fracrecon/regression.hpp"
#include "fracrecon/scenario.hpp"
#include "json.hpp"

namespace fracrecon {

struct QuasiOptConfig {
    double sigma1 = 1.0;
    double xi1 = 0.5;
    int K1 = 50;
    double tbar1 = 0.2;
    double xi2 = 0.5;
    int K2 = 20;
    double upsilon = 10.0;
    double ratio_step = 0.99;

    void validate() const;
    double sigma(int i) const;  // 0-based
    double tbar(int j) const;   // 0-based
};

struct Candidate {
    bool valid = false;
    ParamPair pair{0.0, 0.0, ProblemKind::FIP};
    std::string reason;  // error code name when invalid
};

class CandidateGrid {
public:
    CandidateGrid(int K1, int K2) : K1_(K1), K2_(K2), entries_(static_cast<std::size_t>(K1) * K2) {}
    int rows() const noexcept { return K1_; }
    int cols() const noexcept { return K2_; }
    Candidate& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * K2_ + j]; }
    const Candidate& at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * K2_ + j]; }
    int invalid_count() const;

private:
    int K1_, K2_;
    std::vector<Candidate> entries_;
};

double weighted_norm(double d1, double d2, double upsilon);

struct Selection {
    std::vector<std::optional<int>> i_j;  // per column; empty when the column is excluded
    int j0 = -1;
    int i0 = -1;
    ParamPair final{0.0, 0.0, ProblemKind::FIP};
    int invalid_candidates = 0;
    int excluded_columns = 0;
};

Selection select(const CandidateGrid& grid, const QuasiOptConfig& cfg);

// Fits psi for every sigma and evaluates the estimator pair for every t_bar.
// `workers` <= 0 means one per logical core.
CandidateGrid evaluate_grid(const ProblemData& data, const RegressionModel& model, const Observation& obs,
                            const QuasiOptConfig& cfg, int workers = 0);

std::string grid_to_csv(const CandidateGrid& grid, const QuasiOptConfig& cfg);

struct ReconstructionResult {
    ParamPair pair{0.0, 0.0, ProblemKind::FIP};
    double sigma = 0.0;
    double t_bar = 0.0;
    Selection selection;
};

ReconstructionResult reconstruct(const ProblemData& data, const RegressionModel& model, const Observation& obs,
                                 const QuasiOptConfig& cfg, int workers = 0, CandidateGrid* grid_out = nullptr);

nlohmann::json to_json(const ReconstructionResult& r);

}  // namespace fracrecon

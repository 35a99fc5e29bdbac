#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fracrecon/quasiopt.hpp"
#include "json.hpp"

namespace fracrecon {

// Defaults reproduce the published experiments.
struct PipelineSettings {
    std::vector<double> betas{0.25, 0.5, 0.75};
    int jacobi_degree = 5;
    double weight_a = 0.99;
    int K = 20;
    double tau = 0.01;
    double sigma1 = 1.0, xi1 = 0.5;
    int K1 = 50;
    std::optional<double> tbar1;  // default K * tau
    double xi2 = 0.5;
    int K2 = 20;
    double upsilon = 10.0;
    double lambda = 0.99;
    double mu = 0.01;
    int workers = 0;

    double t_K() const { return K * tau; }
    QuasiOptConfig quasiopt(ProblemKind kind) const;
    RegressionModel model() const;
    nlohmann::json to_json() const;
};

ReconstructionResult run_pipeline(const Scenario& s, const Observation& obs, const PipelineSettings& p,
                                  CandidateGrid* grid_out = nullptr);

struct TableCell {
    double nu;
    NoiseKind noise;
    double delta;
    std::optional<ReconstructionResult> result;
    std::string error;
    std::optional<std::array<double, 2>> reference;
};

std::vector<TableCell> run_table(ProblemKind kind, double delta, const std::vector<NoiseKind>& noises,
                                 const std::vector<double>& nus, const PipelineSettings& p);

// Published (nu1, second) for the matching built-in table cell, if there is one.
std::optional<std::array<double, 2>> reference_cell(ProblemKind kind, double delta, NoiseKind noise, double nu);

std::string table_to_csv(ProblemKind kind, const std::vector<TableCell>& cells, bool four_decimals);
nlohmann::json table_to_json(ProblemKind kind, const std::vector<TableCell>& cells);

}  // namespace fracrecon

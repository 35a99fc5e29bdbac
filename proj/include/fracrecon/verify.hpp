#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace fracrecon::verify {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string summary;
    nlohmann::json details;
};

// FDO identity residuals on every built-in scenario and the two convolution
// identities for the auxiliary functions at `samples` times.
SuiteResult identities(int samples = 10);

// Closed-form Caputo derivatives and singular convolutions against quadrature.
SuiteResult oracle_equivalence(int cases = 200, std::uint64_t seed = 20240611);

// Off-diagonal Gram entries of the shifted Jacobi block, degrees up to 8.
SuiteResult jacobi_orthogonality();

// Randomized hypothesis-satisfying inputs for every lemma checker.
SuiteResult lemmas(int per_lemma = 20, std::uint64_t seed = 7);

// Empirical pre-limit errors against the computed horizons.
SuiteResult deltas();

// Shipped leading-order reference values for ex74 together with the closed-form
// nu_{1,a}(t_a) curves.
SuiteResult leading_order_reference();
std::string leading_order_curve_csv();

std::vector<std::string> suite_names();
SuiteResult run(const std::string& name);

}  // namespace fracrecon::verify

#pragma once

#include "dynbc/problems.hpp"
#include "dynbc/schemes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dynbc {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct IdentityErrors {
    double difference_of_derivatives = 0.0;  ///< 2 tau (D_BDF - D_alt) x = 3 E^3 x
    double testing_with_difference = 0.0;    ///< 2 tau E x . M D_BDF x
    double testing_with_value = 0.0;         ///< 4 tau x . M D_BDF x
};

/// Largest relative residual of the three multistep identities over `trials`
/// random sequences (dimension 1 to 8) with random SPD weights.
IdentityErrors identity_residuals(int trials = 1000, std::uint64_t seed = 77);

struct TruncationSlopes {
    double bdf_defect = 0.0;  ///< |D_BDF r - r'|
    double second_difference = 0.0;
    double third_difference = 0.0;
    std::vector<double> taus;
};

/// Log-log slopes of the local defects of r = sin at t = 1 for tau = 2^-3 .. 2^-10.
TruncationSlopes truncation_slopes();

/// Relative difference between one step of `variant` (sparse, as shipped)
/// and an independent dense assembly and solve of the same step equations.
/// Start-up values are the exact interpolants at t = 0, -tau, ...
double dense_oracle_difference(Variant variant, const Mesh& mesh, const Problem& problem, double tau);

/// All checks behind `dynbc verify`.
std::vector<CheckResult> run_verification();

}  // namespace dynbc

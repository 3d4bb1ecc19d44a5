#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jz/report.hpp"
#include "jz/verify.hpp"

namespace jz {

// Validated run configuration shared by the CLI and the suite runner.
// Zero / empty fields select the per-check defaults documented in README.md.
struct RunConfig {
    std::string family = "symr";  // "all" expands to the default families of rank <= 2
    int rank = 2;
    int dim = 0;  // spin factors: n
    std::string m;  // empty: every partition of the suite's default range
    std::vector<double> s;
    int j = -1;  // -1: every orbit
    std::string c;  // coefficient vector, "1,0,0"
    std::uint64_t seed = 1;
    long long samples = 0;
    int circle_points = 32;
    double tol = 0;
    int words = 3;  // homogeneity: group words per (m, s)
    long long max_samples = 1LL << 23;  // sigma-cap escalation ceiling
    int threads = 0;
};

std::vector<Algebra> config_algebras(const RunConfig& cfg);  // throws ParameterError
void validate(const RunConfig& cfg);
json config_json(const RunConfig& cfg);

std::vector<double> parse_real_list(const std::string& text);  // "0.4,0.9"
std::vector<cplx> parse_coefficients(const std::string& text, int count);  // "1,0,1"; complex as "a+bi"

// Partitions with r parts and |m| <= max_abs, in lexicographic order.
std::vector<Partition> partitions_up_to(int r, int max_abs);

const std::vector<std::string>& suite_names();  // homogeneity chart funceq dimension equivariance all

// Deterministic per-check seed from the run seed and a check key.
std::uint64_t check_seed(std::uint64_t seed, const std::string& key);

// Numerical-budget failures (sigma cap, conditioning, indeterminate order) are
// reported with details["error_class"] = "budget".
std::vector<CheckReport> run_suite(const std::string& suite, const RunConfig& cfg);

bool is_budget_failure(const CheckReport& r);

}  // namespace jz

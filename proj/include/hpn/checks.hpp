#pragma once
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>
#include "hpn/lie.hpp"

namespace hpn::checks {

// One measured quantity compared against a tolerance. Upper bounds pass when
// observed <= tol; lower bounds pass when observed >= tol.
struct CheckResult {
    std::string suite;
    std::string name;
    int criterion = 0;
    double tol = 0;
    double observed = 0;
    bool lower_bound = false;
    bool pass = false;
    std::string note;
};
using Report = std::vector<CheckResult>;

enum class Scope { Algebra, Operators, Flows, Geometry, All };
Scope scope_from_string(const std::string& s);  // ConfigError on unknown names
const char* to_string(Scope s);

struct CheckOptions {
    std::uint64_t seed = 20261016;
    int algebra_instances = 1000;  // per n
    int bracket_instances = 500;   // per closed form
    int lmax = 1;                  // deepest hierarchy level in the density identity
};

Report run_algebra(const CheckOptions& opt = {});    // criteria 1, 2
Report run_operators(const CheckOptions& opt = {});  // criteria 3, 4
Report run_flows(const CheckOptions& opt = {});      // criteria 5, 6, 8
Report run_geometry(const CheckOptions& opt = {});   // criterion 7
Report run(Scope scope, const CheckOptions& opt = {});

bool all_passed(const Report& r);

struct CriterionSummary {
    int criterion = 0;
    int checks = 0;
    int failed = 0;
    bool pass = false;
    std::string worst;  // name of the check with the largest observed/tol ratio
    double worst_ratio = 0;
};
std::vector<CriterionSummary> summarize(const Report& r);

void write_text(std::ostream& os, const Report& r);
void write_json(std::ostream& os, const Report& r, Scope scope, const CheckOptions& opt);

// Random algebra elements with standard normal components, used by the suites and tests.
Quat random_quat(std::mt19937_64& rng);
Quat random_imag(std::mt19937_64& rng);
Quat random_unit(std::mt19937_64& rng);
QMat random_unitary(int m, std::mt19937_64& rng);
LieElement random_element(int n, Subspace s, std::mt19937_64& rng);
LieElement random_element(int n, std::mt19937_64& rng);  // all four parts

}  // namespace hpn::checks

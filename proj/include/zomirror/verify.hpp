#pragma once

#include <string>
#include <vector>

namespace zomirror {

// One empirical check keyed to a quantitative statement: the measured value,
// the bound it is held against, and the direction of the comparison. Checks
// always report both numbers, never a bare boolean.
struct CheckResult {
    std::string name;
    double empirical = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::string note;
};

std::vector<CheckResult> verify_mirror();
std::vector<CheckResult> verify_prox();
std::vector<CheckResult> verify_estimator();
std::vector<CheckResult> verify_lemma4();
std::vector<CheckResult> verify_lemma5();
std::vector<CheckResult> verify_lemma6();

// selection from {mirror, prox, estimator, lemma4, lemma5, lemma6}; empty
// runs everything. Throws std::invalid_argument on an unknown name.
std::vector<CheckResult> run_verify(const std::vector<std::string>& selection);

}  // namespace zomirror

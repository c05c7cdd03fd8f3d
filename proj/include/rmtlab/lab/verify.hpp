#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rmtlab::lab {

/// One measured check. `gating` is false for diagnostics that are reported but
/// never decide pass/fail.
struct CheckRecord {
    int criterion = 0;
    std::string name;
    double statistic = 0.0;
    std::string threshold;
    bool pass = false;
    bool gating = true;
};

struct VerifyOptions {
    std::uint64_t seed = 20240611;
};

/// Suite names in criterion order, followed by "all".
const std::vector<std::string>& suite_names();

/// Runs one suite. Throws InvalidConfig for an unknown name.
std::vector<CheckRecord> run_suite(const std::string& suite, const VerifyOptions& options = {});

/// A criterion passes when all of its gating records pass.
bool criterion_passes(const std::vector<CheckRecord>& records, int criterion);
bool all_pass(const std::vector<CheckRecord>& records);

/// One PASS/FAIL line per criterion, each followed by indented detail lines.
void print_report(std::ostream& out, const std::vector<CheckRecord>& records);

std::string records_to_json(const std::vector<CheckRecord>& records);

}  // namespace rmtlab::lab

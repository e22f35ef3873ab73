#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace varharm::harness {

/// Config for a registered verification target. N = 0 resolves to the desk
/// default for the dimension (n=1: N=1024, L=8; n=2: N=128, L=4).
struct Config {
    std::string target;
    int n = 1;
    int N = 0;
    double L = 0.0;
    std::uint64_t seed = 42;
    double alpha = 0.5;
    std::string p_spec;      // empty -> per-target default
    int trials = 0;          // 0 -> per-target default
    int atom_count = 0;      // 0 -> per-target default
    double stability_tol = 0.25;
    bool refine = true;      // re-fit constants at 2N and compare
    std::string out_path;    // write the JSON report here if nonempty
    std::string csv_dir;     // write per-case CSV here if nonempty

    static Config from_json_text(const std::string& text);
    std::string to_json_text() const;

    int resolved_N() const { return N > 0 ? N : (n == 1 ? 1024 : 128); }
    double resolved_L() const { return L > 0.0 ? L : (n == 1 ? 8.0 : 4.0); }
};

struct CaseRow {
    std::string label;
    double value = 0.0;
    double budget = 0.0;
    std::string note;
};

struct Report {
    std::string target;
    std::string verdict = "pass";  // pass | fail | inconclusive
    std::string header_note;
    std::vector<CaseRow> cases;
    std::map<std::string, double> constants;          // keys starting with "C" are
    std::map<std::string, double> constants_refined;  // held to the stability check
    double stability = 0.0;
    double wall_ms = 0.0;

    std::string to_json_text() const;
    void write_csv(const std::string& dir) const;
    int exit_code() const;
};

std::vector<std::string> registered_targets();
std::string describe(const std::string& target);

Report run(const Config& cfg);

}  // namespace varharm::harness

#pragma once

// Subcommands of lozi_lab, callable without going through argv.

#include <set>
#include <string>

#include "lozi/io.hpp"

namespace lozi::cli {

struct RunConfig {
    std::string a = "1.06";
    std::string b = "0.96";
    std::string mode = "exact";  // exact | float
    int precision_bits = 128;
    int depth = 12;           // unstable arcs for figures and the trap
    int crossing_depth = 100;  // census depth for classification
    int homoclinic_u = 60;
    int homoclinic_s = 60;
    int iterates = 50;  // largest k tried for L^2k(D)
    int orbit_cap = 8;
    std::size_t bit_cap = 1u << 20;
    std::size_t vertex_cap = 20000;
    int lap_n_max = 80;
    double lap_threshold = 0.05;
    std::string out = ".";
    std::set<std::string> formats{"svg", "csv", "json"};
    int threads = 1;

    Params params() const;
    ClassifyBudgets budgets() const;
    bool wants(const std::string& f) const { return formats.count(f) != 0; }
};

// Exit codes
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInconsistent = 2;
constexpr int kBudget = 3;

// LOZI_LAB_THREADS, else the hardware concurrency.
int default_threads();

// Parses "lo:hi:step" with exact decimals.
void parse_range(const std::string& text, Rational& lo, Rational& hi, Rational& step);

int cmd_analyze(const RunConfig& config);
int cmd_orbits(const RunConfig& config, int n);
int cmd_sweep(const RunConfig& config, const SweepGrid& grid);

// Entry point used by main(); returns the process exit code.
int run(int argc, char** argv);

}  // namespace lozi::cli

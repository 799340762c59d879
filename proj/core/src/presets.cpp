#include <map>
#include <stdexcept>

#include "nomalink/code.hpp"

namespace nomalink {

namespace {

CodePreset make(const std::string& name, int q, int alpha, std::map<int, double> lambda, int K,
                int M, double sigma_n) {
    // Published profiles are rounded to 6 decimals and can miss the simplex by
    // ~1e-6; renormalize so the strict sum-to-one validation holds.
    double total = 0.0;
    for (const auto& [d, f] : lambda) total += f;
    for (auto& [d, f] : lambda) f /= total;
    CodePreset p;
    p.name = name;
    p.params = make_code_params(q, alpha, DegreeDistribution(lambda));
    p.design_K = K;
    p.design_M = M;
    p.design_sigma_n = sigma_n;
    return p;
}

std::vector<CodePreset> build_presets() {
    std::vector<CodePreset> v;
    // Multi-user IRA profiles designed against the iterative LMMSE detector at
    // the listed (K, M, sigma_n) operating points.
    v.push_back(make("table1-full", 2, 4,
                     {{3, 0.14619}, {10, 0.212715}, {30, 0.223699}, {50, 0.112159}, {100, 0.305237}},
                     8, 8, 4.58));
    v.push_back(make("table1-over", 2, 3,
                     {{3, 0.129157}, {10, 0.173591}, {30, 0.125162}, {80, 0.384998}, {100, 0.187092}},
                     16, 8, 5.27));
    v.push_back(make("table1-severe-b3", 2, 2,
                     {{3, 0.174135}, {10, 0.153139}, {30, 0.254471}, {50, 0.085083}, {80, 0.333171}},
                     24, 8, 5.52));
    v.push_back(make("table1-severe-b4", 2, 2,
                     {{3, 0.121532}, {10, 0.113888}, {30, 0.103885}, {80, 0.152555}, {100, 0.50814}},
                     32, 8, 6.34));
    v.push_back(make("table1-severe-b8-m4", 4, 2,
                     {{3, 0.207197}, {10, 0.036035}, {30, 0.139163}, {50, 0.048337}, {80, 0.136988},
                      {100, 0.43228}},
                     32, 4, 3.81));
    v.push_back(make("table1-severe-b8-m8", 4, 2,
                     {{3, 0.204955}, {10, 0.044794}, {30, 0.0638}, {50, 0.066099}, {80, 0.313755},
                      {100, 0.306596}},
                     64, 8, 5.43));
    // Single-user IRA profiles (point-to-point designs, q = 1) used as the
    // baseline code family in comparisons.
    v.push_back(make("table3-su-r020", 1, 4,
                     {{3, 0.099822}, {10, 0.214201}, {30, 0.023108}, {80, 0.186412}, {100, 0.476457}},
                     0, 0, 0.0));
    v.push_back(make("table3-su-r015", 1, 3,
                     {{3, 0.091575}, {10, 0.171829}, {30, 0.122928}, {80, 0.278914}, {100, 0.334754}},
                     0, 0, 0.0));
    v.push_back(make("table3-su-r013", 1, 2,
                     {{3, 0.118814}, {10, 0.204525}, {30, 0.196695}, {50, 0.346954}, {80, 0.016878},
                      {100, 0.116134}},
                     0, 0, 0.0));
    v.push_back(make("table3-su-r010", 1, 2,
                     {{3, 0.085867}, {10, 0.132226}, {30, 0.198883}, {80, 0.276011}, {100, 0.307013}},
                     0, 0, 0.0));
    // Rate-0.08 MAC-IRA profile (single-antenna multiple-access design,
    // alpha = 1, q = 5) kept for cross-family comparisons.
    v.push_back(make("mac-ira-r008", 5, 1,
                     {{2, 0.063021}, {3, 0.228288}, {10, 0.111951}, {30, 0.226877}, {50, 0.369864}},
                     0, 0, 0.0));
    return v;
}

}  // namespace

const std::vector<CodePreset>& code_presets() {
    static const std::vector<CodePreset> presets = build_presets();
    return presets;
}

const CodePreset& find_preset(const std::string& name) {
    for (const auto& p : code_presets())
        if (p.name == name) return p;
    throw std::out_of_range("unknown preset: " + name);
}

bool has_preset(const std::string& name) {
    for (const auto& p : code_presets())
        if (p.name == name) return true;
    return false;
}

}  // namespace nomalink

#include "nomalink/degree_dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nomalink {

DegreeDistribution::DegreeDistribution(std::vector<DegreeTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("degree distribution: no terms");
    std::sort(terms_.begin(), terms_.end(),
              [](const DegreeTerm& a, const DegreeTerm& b) { return a.degree < b.degree; });
    double sum = 0.0;
    int prev = 0;
    for (const auto& t : terms_) {
        if (t.degree < 2)
            throw std::invalid_argument("degree distribution: degree " + std::to_string(t.degree) +
                                        " < 2");
        if (t.degree == prev)
            throw std::invalid_argument("degree distribution: duplicate degree " +
                                        std::to_string(t.degree));
        if (!(t.fraction > 0.0))
            throw std::invalid_argument("degree distribution: non-positive fraction at degree " +
                                        std::to_string(t.degree));
        prev = t.degree;
        sum += t.fraction;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("degree distribution: fractions sum to " + std::to_string(sum) +
                                    ", expected 1");
}

DegreeDistribution::DegreeDistribution(const std::map<int, double>& lambda) {
    std::vector<DegreeTerm> t;
    t.reserve(lambda.size());
    for (const auto& [d, f] : lambda) t.push_back({d, f});
    *this = DegreeDistribution(std::move(t));
}

double DegreeDistribution::inverse_moment() const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.fraction / t.degree;
    return s;
}

bool DegreeDistribution::operator==(const DegreeDistribution& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].degree != o.terms_[i].degree || terms_[i].fraction != o.terms_[i].fraction)
            return false;
    return true;
}

}  // namespace nomalink

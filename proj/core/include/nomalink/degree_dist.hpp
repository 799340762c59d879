#pragma once

#include <map>
#include <vector>

namespace nomalink {

// Edge-perspective irregular repetition profile: fraction[i] is the fraction
// of graph edges attached to information nodes of degree i.
struct DegreeTerm {
    int degree = 0;
    double fraction = 0.0;
};

class DegreeDistribution {
  public:
    DegreeDistribution() = default;
    // terms may arrive unsorted; they are sorted by degree and validated:
    // degrees distinct and >= 2, fractions > 0, sum == 1 within 1e-9.
    explicit DegreeDistribution(std::vector<DegreeTerm> terms);
    explicit DegreeDistribution(const std::map<int, double>& lambda);

    const std::vector<DegreeTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    int min_degree() const { return terms_.front().degree; }
    int max_degree() const { return terms_.back().degree; }

    // sum_i lambda_i / i; node count per edge, shows up in the code rate.
    double inverse_moment() const;

    bool operator==(const DegreeDistribution& o) const;

  private:
    std::vector<DegreeTerm> terms_;
};

}  // namespace nomalink

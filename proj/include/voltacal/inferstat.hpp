#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "voltacal/errors.hpp"

namespace voltacal {

// Balanced a x b x r factorial layout. Cell (i, j) holds r observations,
// stored row-major: index (i*b + j)*r + k.
class FactorialData {
public:
    FactorialData(std::size_t a_levels, std::size_t b_levels, std::size_t replicates,
                  std::vector<double> observations);

    std::size_t a() const { return a_; }
    std::size_t b() const { return b_; }
    std::size_t r() const { return r_; }
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return cells_[(i * b_ + j) * r_ + k];
    }
    const std::vector<double>& raw() const { return cells_; }

    // Set when replicates were tiled to balance the design, so reports can
    // carry the caveat along.
    bool duplicated = false;

private:
    std::size_t a_, b_, r_;
    std::vector<double> cells_;
};

// One source row of the decomposition. MS is absent for the total row; F and
// the F-derived columns are absent for within/total and whenever the within
// mean square is zero (constant data).
struct AnovaRow {
    std::string source;
    double ss = 0.0;
    std::size_t df = 0;
    std::optional<double> ms;
    std::optional<double> f;
    std::optional<double> p_value;
    std::optional<double> f_critical;
};

struct AnovaTable {
    std::vector<AnovaRow> rows;  // Sample, Columns, Interaction, Within, Total
    double alpha = 0.05;

    const AnovaRow& row(const std::string& source) const;
};

struct TTestResult {
    double t = 0.0;
    std::size_t df = 0;
    double t_critical = 0.0;
    bool reject_null = false;
    double alpha = 0.05;
};

enum class Dist { student_t, fisher_f };

// Classical fixed-effects two-way ANOVA with replication. Factor A is the
// "Sample" row, factor B the "Columns" row, matching the spreadsheet layout
// the reference tables use. Throws SingleReplicate when r < 2.
AnovaTable two_way_anova(const FactorialData& data, double alpha = 0.05);

// Two-tailed one-sample t test. df is an explicit parameter rather than
// n - 1 because the replication target uses df = n in one documented spot;
// callers choose.
TTestResult one_sample_t(double mean, double mu0, double sd, std::size_t n,
                         std::size_t df, double alpha = 0.05);

// Upper-tail probability P(X > stat). df2 is ignored for student_t.
double dist_tail(Dist kind, double stat, std::size_t df1, std::size_t df2 = 0);

// Upper-tail quantile: the q with dist_tail(kind, q, df1, df2) == p,
// found by geometric bracket growth plus bisection.
double dist_quantile(Dist kind, double p, std::size_t df1, std::size_t df2 = 0);

// Tiles each cell's replicates verbatim until target_r is reached and flags
// the result as duplicated. target_r must be an integer multiple of r.
FactorialData balance_by_duplication(const FactorialData& data, std::size_t target_r);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
// Exposed because the distribution tails are thin wrappers around it and
// tests probe it directly.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace voltacal

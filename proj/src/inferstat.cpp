#include "voltacal/inferstat.hpp"

#include <cmath>
#include <limits>

namespace voltacal {

FactorialData::FactorialData(std::size_t a_levels, std::size_t b_levels, std::size_t replicates,
                             std::vector<double> observations)
    : a_(a_levels), b_(b_levels), r_(replicates), cells_(std::move(observations)) {
    if (a_ == 0 || b_ == 0 || r_ == 0)
        throw UnbalancedDesign("factor levels and replicate count must all be positive");
    if (cells_.size() != a_ * b_ * r_)
        throw UnbalancedDesign("expected " + std::to_string(a_ * b_ * r_) + " observations for a " +
                               std::to_string(a_) + "x" + std::to_string(b_) + " design with r=" +
                               std::to_string(r_) + ", got " + std::to_string(cells_.size()));
}

const AnovaRow& AnovaTable::row(const std::string& source) const {
    for (const auto& r : rows)
        if (r.source == source) return r;
    throw std::invalid_argument("no ANOVA row named " + source);
}

namespace {

constexpr int kBetaMaxIter = 500;
constexpr double kBetaEps = 1e-15;

// Lentz's algorithm for the continued fraction of I_x(a, b).
double beta_cont_frac(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kBetaMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kBetaEps) return h;
    }
    throw NonConvergence("incomplete beta continued fraction did not settle in " +
                         std::to_string(kBetaMaxIter) + " iterations");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("incomplete beta needs positive shape parameters");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // The continued fraction converges fast only on its own side of the
    // mean; use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) past the switch.
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cont_frac(a, b, x) / a;
    return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double dist_tail(Dist kind, double stat, std::size_t df1, std::size_t df2) {
    if (!std::isfinite(stat)) throw std::invalid_argument("distribution statistic must be finite");
    if (df1 < 1) throw std::invalid_argument("df1 must be >= 1");
    if (kind == Dist::student_t) {
        const double v = static_cast<double>(df1);
        const double x = v / (v + stat * stat);
        const double half_tail = 0.5 * regularized_incomplete_beta(v / 2.0, 0.5, x);
        return stat >= 0.0 ? half_tail : 1.0 - half_tail;
    }
    if (df2 < 1) throw std::invalid_argument("df2 must be >= 1 for the F distribution");
    if (stat <= 0.0) return 1.0;
    const double d1 = static_cast<double>(df1);
    const double d2 = static_cast<double>(df2);
    const double x = d2 / (d2 + d1 * stat);
    return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, x);
}

double dist_quantile(Dist kind, double p, std::size_t df1, std::size_t df2) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("quantile probability must be in (0, 1)");

    // dist_tail is strictly decreasing in the statistic, so bracket the root
    // of tail(q) - p and bisect.
    double lo, hi;
    if (kind == Dist::fisher_f) {
        lo = 0.0;  // tail(0) = 1 > p
        hi = 1.0;
    } else if (p <= 0.5) {
        lo = 0.0;  // tail(0) = 0.5 >= p
        hi = 1.0;
    } else {
        hi = 0.0;  // tail(0) = 0.5 < p, root is negative
        lo = -1.0;
        int grow = 0;
        while (dist_tail(kind, lo, df1, df2) < p) {
            lo *= 2.0;
            if (++grow > 80)
                throw NonConvergence("quantile bracket did not capture the root (low side)");
        }
    }
    {
        int grow = 0;
        while (dist_tail(kind, hi, df1, df2) > p) {
            hi *= 2.0;
            if (++grow > 80)
                throw NonConvergence("quantile bracket did not capture the root (high side)");
        }
    }

    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 300; ++it) {
        mid = 0.5 * (lo + hi);
        const double tail = dist_tail(kind, mid, df1, df2);
        if (std::fabs(tail - p) < 1e-12) return mid;
        if (tail > p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * std::max(1.0, std::fabs(mid))) return 0.5 * (lo + hi);
    }
    throw NonConvergence("quantile bisection did not converge");
}

AnovaTable two_way_anova(const FactorialData& data, double alpha) {
    const std::size_t a = data.a(), b = data.b(), r = data.r();
    if (a < 2 || b < 2)
        throw std::invalid_argument("two-way ANOVA needs at least 2 levels per factor");
    if (r < 2)
        throw SingleReplicate("interaction is inestimable with a single replicate per cell");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0, 1)");

    const double an = static_cast<double>(a);
    const double bn = static_cast<double>(b);
    const double rn = static_cast<double>(r);

    double grand = 0.0;
    for (double x : data.raw()) grand += x;
    grand /= (an * bn * rn);

    std::vector<double> row_mean(a, 0.0), col_mean(b, 0.0), cell_mean(a * b, 0.0);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j) {
            double cell = 0.0;
            for (std::size_t k = 0; k < r; ++k) cell += data.at(i, j, k);
            cell /= rn;
            cell_mean[i * b + j] = cell;
            row_mean[i] += cell / bn;
            col_mean[j] += cell / an;
        }

    double ss_sample = 0.0, ss_columns = 0.0, ss_inter = 0.0, ss_within = 0.0, ss_total = 0.0;
    for (std::size_t i = 0; i < a; ++i) ss_sample += (row_mean[i] - grand) * (row_mean[i] - grand);
    ss_sample *= bn * rn;
    for (std::size_t j = 0; j < b; ++j) ss_columns += (col_mean[j] - grand) * (col_mean[j] - grand);
    ss_columns *= an * rn;
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j) {
            const double dev = cell_mean[i * b + j] - row_mean[i] - col_mean[j] + grand;
            ss_inter += dev * dev;
            for (std::size_t k = 0; k < r; ++k) {
                const double w = data.at(i, j, k) - cell_mean[i * b + j];
                ss_within += w * w;
                const double t = data.at(i, j, k) - grand;
                ss_total += t * t;
            }
        }
    ss_inter *= rn;

    const std::size_t df_sample = a - 1;
    const std::size_t df_columns = b - 1;
    const std::size_t df_inter = (a - 1) * (b - 1);
    const std::size_t df_within = a * b * (r - 1);
    const std::size_t df_total = a * b * r - 1;

    const double ms_within = ss_within / static_cast<double>(df_within);

    AnovaTable table;
    table.alpha = alpha;
    auto effect_row = [&](const std::string& name, double ss, std::size_t df) {
        AnovaRow row{name, ss, df, {}, {}, {}, {}};
        row.ms = ss / static_cast<double>(df);
        row.f_critical = dist_quantile(Dist::fisher_f, alpha, df, df_within);
        if (ms_within > 0.0) {
            row.f = *row.ms / ms_within;
            row.p_value = dist_tail(Dist::fisher_f, *row.f, df, df_within);
        }
        return row;
    };
    table.rows.push_back(effect_row("Sample", ss_sample, df_sample));
    table.rows.push_back(effect_row("Columns", ss_columns, df_columns));
    table.rows.push_back(effect_row("Interaction", ss_inter, df_inter));
    table.rows.push_back(AnovaRow{"Within", ss_within, df_within, ms_within, {}, {}, {}});
    table.rows.push_back(AnovaRow{"Total", ss_total, df_total, {}, {}, {}, {}});
    return table;
}

TTestResult one_sample_t(double mean, double mu0, double sd, std::size_t n, std::size_t df,
                         double alpha) {
    if (sd <= 0.0) throw ZeroVariance("one-sample t test needs a positive sample SD");
    if (n < 2) throw std::invalid_argument("one-sample t test needs n >= 2");
    if (df < 1) throw std::invalid_argument("one-sample t test needs df >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0, 1)");

    TTestResult res;
    res.t = (mean - mu0) / (sd / std::sqrt(static_cast<double>(n)));
    res.df = df;
    res.alpha = alpha;
    res.t_critical = dist_quantile(Dist::student_t, alpha / 2.0, df);
    res.reject_null = std::fabs(res.t) > res.t_critical;
    return res;
}

FactorialData balance_by_duplication(const FactorialData& data, std::size_t target_r) {
    if (target_r == 0 || target_r % data.r() != 0)
        throw NonIntegerMultiple("target replicate count " + std::to_string(target_r) +
                                 " is not a multiple of " + std::to_string(data.r()));
    const std::size_t m = target_r / data.r();
    std::vector<double> tiled;
    tiled.reserve(data.a() * data.b() * target_r);
    for (std::size_t i = 0; i < data.a(); ++i)
        for (std::size_t j = 0; j < data.b(); ++j)
            for (std::size_t copy = 0; copy < m; ++copy)
                for (std::size_t k = 0; k < data.r(); ++k)
                    tiled.push_back(data.at(i, j, k));
    FactorialData out(data.a(), data.b(), target_r, std::move(tiled));
    out.duplicated = data.duplicated || m > 1;
    return out;
}

}  // namespace voltacal

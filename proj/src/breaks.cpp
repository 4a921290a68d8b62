#include "qconn/breaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qconn/distributions.hpp"

namespace qconn {

namespace {

double centered_rss(const Eigen::VectorXd& v) {
    return (v.array() - v.mean()).square().sum();
}

}  // namespace

BreakTestResult chow_test_split(const Eigen::VectorXd& pre, const Eigen::VectorXd& post) {
    if (pre.size() < 10 || post.size() < 10) {
        throw std::invalid_argument("chow_test: need at least 10 observations per side");
    }
    const Eigen::Index t = pre.size() + post.size();
    Eigen::VectorXd pooled(t);
    pooled << pre, post;

    const double rss_pooled = centered_rss(pooled);
    const double rss_1 = centered_rss(pre);
    const double rss_2 = centered_rss(post);
    constexpr double k = 1.0;
    const double dof = static_cast<double>(t) - 2.0 * k;

    BreakTestResult result;
    result.test = BreakTest::Chow;
    const double denom = (rss_1 + rss_2) / dof;
    if (denom <= 0.0) {
        // Both sides constant: any mean difference is an exact break.
        result.statistic = rss_pooled > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        result.pvalue = rss_pooled > 0.0 ? 0.0 : 1.0;
        return result;
    }
    result.statistic = (rss_pooled - rss_1 - rss_2) / k / denom;
    result.pvalue = dist::f_sf(result.statistic, k, dof);
    return result;
}

BreakTestResult chow_test(const std::vector<std::string>& dates, const Eigen::VectorXd& values,
                          const std::string& break_date) {
    if (static_cast<Eigen::Index>(dates.size()) != values.size()) {
        throw std::invalid_argument("chow_test: dates and values differ in length");
    }
    Eigen::Index cut = 0;
    while (cut < values.size() && dates[static_cast<std::size_t>(cut)] < break_date) ++cut;
    BreakTestResult result =
        chow_test_split(values.head(cut), values.tail(values.size() - cut));
    result.break_date = break_date;
    return result;
}

BreakTestResult wilcoxon_rank_sum(const Eigen::VectorXd& pre, const Eigen::VectorXd& post) {
    const Eigen::Index n1 = pre.size();
    const Eigen::Index n2 = post.size();
    if (n1 < 10 || n2 < 10) {
        throw std::invalid_argument("wilcoxon_rank_sum: need at least 10 observations per side");
    }
    const Eigen::Index n = n1 + n2;

    struct Entry {
        double value;
        bool first_sample;
    };
    std::vector<Entry> pooled;
    pooled.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n1; ++i) pooled.push_back({pre(i), true});
    for (Eigen::Index i = 0; i < n2; ++i) pooled.push_back({post(i), false});
    std::sort(pooled.begin(), pooled.end(),
              [](const Entry& a, const Entry& b) { return a.value < b.value; });

    double rank_sum = 0.0;
    double tie_correction = 0.0;  // sum over groups of t^3 - t
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i + 1;
        while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        const double t = static_cast<double>(j - i);
        tie_correction += t * t * t - t;
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].first_sample) rank_sum += midrank;
        }
        i = j;
    }

    BreakTestResult result;
    result.test = BreakTest::Wilcoxon;
    result.statistic = rank_sum;
    const double dn = static_cast<double>(n);
    const double mean = static_cast<double>(n1) * (dn + 1.0) / 2.0;
    const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                       ((dn + 1.0) - tie_correction / (dn * (dn - 1.0)));
    if (var <= 0.0) {
        result.pvalue = 1.0;
        return result;
    }
    result.pvalue = dist::normal_two_sided_pvalue((rank_sum - mean) / std::sqrt(var));
    return result;
}

}  // namespace qconn

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qconn {

enum class BreakTest { Chow, Wilcoxon };

struct BreakTestResult {
    double statistic = 0.0;
    double pvalue = 1.0;
    std::string break_date;
    BreakTest test = BreakTest::Chow;
};

/// Chow test for a mean shift at a known break date. Intercept-only
/// regression on each side (k = 1):
///   F = ((RSS_pooled - RSS_1 - RSS_2) / k) / ((RSS_1 + RSS_2) / (T - 2k))
/// with p-value from F(k, T - 2k). Each side needs >= 10 observations.
[[nodiscard]] BreakTestResult chow_test(const std::vector<std::string>& dates,
                                        const Eigen::VectorXd& values,
                                        const std::string& break_date);

/// Same test on a pre-split pair of samples.
[[nodiscard]] BreakTestResult chow_test_split(const Eigen::VectorXd& pre,
                                              const Eigen::VectorXd& post);

/// Wilcoxon rank-sum test of a location shift between the two samples.
/// The statistic is the rank sum of the first sample (midranks for ties);
/// the two-sided p-value uses the tie-corrected normal approximation.
[[nodiscard]] BreakTestResult wilcoxon_rank_sum(const Eigen::VectorXd& pre,
                                                const Eigen::VectorXd& post);

}  // namespace qconn

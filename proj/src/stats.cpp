#include "qconn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qconn/distributions.hpp"

namespace qconn::stats {

namespace {

// MacKinnon response-surface coefficients for the constant-only ADF case
// (single series). p = Phi(polynomial(stat)), with separate polynomials
// for the small-p and large-p regions.
constexpr double kTauStar = -1.61;
constexpr double kTauMin = -18.83;
constexpr double kTauMax = 2.74;
constexpr double kSmallP[] = {2.1659, 1.4412, 0.038269};
constexpr double kLargeP[] = {1.7339, 0.93202, -0.12745, -0.010368};

double mackinnon_pvalue(double stat) {
    if (stat > kTauMax) return 1.0;
    if (stat < kTauMin) return 0.0;
    double poly = 0.0;
    if (stat <= kTauStar) {
        poly = kSmallP[0] + stat * (kSmallP[1] + stat * kSmallP[2]);
    } else {
        poly = kLargeP[0] + stat * (kLargeP[1] + stat * (kLargeP[2] + stat * kLargeP[3]));
    }
    return dist::normal_cdf(poly);
}

struct OlsFit {
    Eigen::VectorXd beta;
    double rss = 0.0;
    bool ok = false;
};

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    OlsFit fit;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    fit.beta = qr.solve(y);
    fit.rss = (y - x * fit.beta).squaredNorm();
    fit.ok = qr.rank() == x.cols();
    return fit;
}

// Tie statistics for one variable: sum t(t-1)/2, sum t(t-1)(t-2),
// sum t(t-1)(2t+5) over tied groups.
struct TieStats {
    double pairs = 0.0;
    double triple = 0.0;
    double weighted = 0.0;
};

TieStats tie_stats(std::span<const double> v) {
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    TieStats out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        out.pairs += t * (t - 1.0) / 2.0;
        out.triple += t * (t - 1.0) * (t - 2.0);
        out.weighted += t * (t - 1.0) * (2.0 * t + 5.0);
        i = j;
    }
    return out;
}

}  // namespace

SeriesSummary summarize(std::span<const double> series) {
    const auto t = static_cast<double>(series.size());
    if (series.size() < 8) {
        throw std::invalid_argument("summarize: need at least 8 observations");
    }
    SeriesSummary s;
    double sum = 0.0;
    for (double v : series) sum += v;
    s.mean = sum / t;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : series) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    s.std_dev = std::sqrt(m2 / (t - 1.0));
    m2 /= t;
    m3 /= t;
    m4 /= t;
    if (m2 <= 0.0) {
        s.zero_variance = true;
        s.skewness = s.excess_kurtosis = s.jb_stat = s.jb_pvalue =
            std::numeric_limits<double>::quiet_NaN();
    } else {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
        s.jb_stat = t / 6.0 *
                    (s.skewness * s.skewness + s.excess_kurtosis * s.excess_kurtosis / 4.0);
        s.jb_pvalue = dist::chi_squared_sf(s.jb_stat, 2.0);
    }
    const AdfResult adf = adf_test(series);
    s.adf_stat = adf.stat;
    s.adf_pvalue = adf.pvalue;
    return s;
}

AdfResult adf_test(std::span<const double> series, int max_lag) {
    const auto t = static_cast<int>(series.size());
    if (max_lag < 0) {
        max_lag = static_cast<int>(std::floor(12.0 * std::pow(t / 100.0, 0.25)));
    }
    if (t <= max_lag + 10) {
        throw std::invalid_argument("adf_test: series too short for requested lags");
    }

    // First differences; candidate regressions share the sample trimmed to
    // the longest lag so AIC values are comparable.
    const int nd = t - 1;
    std::vector<double> dy(static_cast<std::size_t>(nd));
    for (int i = 0; i < nd; ++i) dy[static_cast<std::size_t>(i)] = series[i + 1] - series[i];

    const int rows = nd - max_lag;
    Eigen::VectorXd response(rows);
    for (int i = 0; i < rows; ++i) response(i) = dy[static_cast<std::size_t>(max_lag + i)];

    const auto build_design = [&](int lag) {
        Eigen::MatrixXd x(rows, 2 + lag);
        for (int i = 0; i < rows; ++i) {
            x(i, 0) = 1.0;
            x(i, 1) = series[max_lag + i];  // y_{t-1} aligned with dy_t
            for (int l = 1; l <= lag; ++l) {
                x(i, 1 + l) = dy[static_cast<std::size_t>(max_lag + i - l)];
            }
        }
        return x;
    };

    int best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int lag = 0; lag <= max_lag; ++lag) {
        const OlsFit fit = ols(build_design(lag), response);
        const double sigma2 = fit.rss / rows;
        const double aic = sigma2 <= 0.0 ? -std::numeric_limits<double>::infinity()
                                         : rows * std::log(sigma2) + 2.0 * (2 + lag);
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = lag;
        }
    }

    const Eigen::MatrixXd x = build_design(best_lag);
    const OlsFit fit = ols(x, response);
    AdfResult result;
    result.lags = best_lag;
    const int k = static_cast<int>(x.cols());
    const double dof = rows - k;
    const double sigma2 = dof > 0 ? fit.rss / dof : 0.0;
    if (!fit.ok || sigma2 <= 0.0) {
        // Degenerate regression (perfect fit or collinear design): no unit
        // root evidence either way.
        result.stat = 0.0;
        result.pvalue = 1.0;
        return result;
    }
    const Eigen::MatrixXd xtx_inv =
        (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    const double var_gamma = sigma2 * xtx_inv(1, 1);
    if (!(var_gamma > 0.0) || !std::isfinite(var_gamma)) {
        result.stat = 0.0;
        result.pvalue = 1.0;
        return result;
    }
    result.stat = fit.beta(1) / std::sqrt(var_gamma);
    result.pvalue = mackinnon_pvalue(result.stat);
    return result;
}

KendallResult kendall_tau(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("kendall_tau: length mismatch");
    }
    const std::size_t n = x.size();
    if (n < 10) {
        throw std::invalid_argument("kendall_tau: need at least 10 observations");
    }
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            const double prod = dx * dy;
            if (prod > 0.0) {
                ++concordant;
            } else if (prod < 0.0) {
                ++discordant;
            }
        }
    }
    const double nn = static_cast<double>(n);
    const double total_pairs = nn * (nn - 1.0) / 2.0;
    const TieStats tx = tie_stats(x);
    const TieStats ty = tie_stats(y);
    const double s = static_cast<double>(concordant - discordant);

    KendallResult result;
    const double denom =
        std::sqrt(total_pairs - tx.pairs) * std::sqrt(total_pairs - ty.pairs);
    if (denom <= 0.0) {
        // One variable entirely tied; correlation undefined, report zero.
        result.tau = 0.0;
        result.pvalue = 1.0;
        return result;
    }
    result.tau = s / denom;

    const double m = nn * (nn - 1.0);
    double var = (m * (2.0 * nn + 5.0) - tx.weighted - ty.weighted) / 18.0 +
                 2.0 * tx.pairs * ty.pairs / m;
    if (n > 2) {
        var += tx.triple * ty.triple / (9.0 * m * (nn - 2.0));
    }
    if (var <= 0.0) {
        result.pvalue = 1.0;
        return result;
    }
    result.pvalue = dist::normal_two_sided_pvalue(s / std::sqrt(var));
    return result;
}

CorrelationMatrix correlation_matrix(const ReturnPanel& panel, double alpha) {
    const Eigen::Index n = panel.values.cols();
    if (n < 2) {
        throw std::invalid_argument("correlation_matrix: need at least 2 series");
    }
    CorrelationMatrix out;
    out.tau = Eigen::MatrixXd::Identity(n, n);
    out.significant.setConstant(n, n, false);
    out.significant.diagonal().setConstant(true);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto xi = std::span<const double>(panel.values.col(i).data(),
                                                    static_cast<std::size_t>(panel.values.rows()));
            const auto xj = std::span<const double>(panel.values.col(j).data(),
                                                    static_cast<std::size_t>(panel.values.rows()));
            const KendallResult r = kendall_tau(xi, xj);
            out.tau(i, j) = out.tau(j, i) = r.tau;
            const bool sig = r.pvalue < alpha;
            out.significant(i, j) = sig;
            out.significant(j, i) = sig;
        }
    }
    return out;
}

}  // namespace qconn::stats

#include "qconn/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qconn/connectedness.hpp"
#include "qconn/distributions.hpp"
#include "qconn/qvar.hpp"

namespace qconn {

namespace {

// Budget-constrained minimizer of w' M w via its KKT system. For an
// invertible M this is M^{-1} 1 / (1' M^{-1} 1); for a singular PSD M it
// still yields the limit allocation (e.g. all weight on a riskless asset)
// whenever the minimizer is unique.
Eigen::VectorXd inverse_weights(const Eigen::MatrixXd& matrix, const char* what) {
    const Eigen::Index n = matrix.rows();
    if (n == 0 || matrix.cols() != n) {
        throw std::invalid_argument(std::string(what) + ": square matrix required");
    }
    const Eigen::MatrixXd sym = (matrix + matrix.transpose()) / 2.0;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
    kkt.topLeftCorner(n, n) = 2.0 * sym;
    kkt.topRightCorner(n, 1).setOnes();
    kkt.bottomLeftCorner(1, n).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) {
        throw std::runtime_error(std::string(what) + ": matrix is singular");
    }
    const Eigen::VectorXd solution = lu.solve(rhs);
    if (!solution.allFinite()) {
        throw std::runtime_error(std::string(what) + ": degenerate weight normalization");
    }
    return solution.head(n);
}

double sample_variance(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

// Order statistic interpolated at position (T-1)*alpha of the sorted data.
double empirical_quantile(const Eigen::VectorXd& v, double alpha) {
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end());
    const double h = alpha * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

PerformanceReport build_report(const Eigen::VectorXd& realized,
                               const Eigen::MatrixXd& asset_returns) {
    PerformanceReport report;
    report.mean_return = realized.mean();
    report.std_dev = std::sqrt(sample_variance(realized));
    report.sharpe_std = sharpe(realized, SharpeDenominator::StdDev);
    report.sharpe_var = sharpe(realized, SharpeDenominator::Var);
    report.sharpe_cvar = sharpe(realized, SharpeDenominator::Cvar);
    const Eigen::Index n = asset_returns.cols();
    report.he.resize(n);
    report.he_pvalue.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto [he, pvalue] = hedging_effectiveness(realized, asset_returns.col(j));
        report.he(j) = he;
        report.he_pvalue(j) = pvalue;
    }
    report.cumulative.resize(realized.size());
    double running = 0.0;
    for (Eigen::Index i = 0; i < realized.size(); ++i) {
        running += realized(i);
        report.cumulative(i) = running;
    }
    return report;
}

}  // namespace

Eigen::VectorXd project_to_simplex(Eigen::VectorXd weights) {
    for (int pass = 0; pass < static_cast<int>(weights.size()) + 1; ++pass) {
        if ((weights.array() >= 0.0).all()) break;
        weights = weights.cwiseMax(0.0);
        const double total = weights.sum();
        if (total <= 0.0) {
            throw std::runtime_error("project_to_simplex: no positive weight remains");
        }
        weights /= total;
    }
    return weights;
}

Eigen::VectorXd mvp_weights(const Eigen::MatrixXd& cov) {
    return project_to_simplex(inverse_weights(cov, "mvp_weights"));
}

Eigen::VectorXd mcp_weights(const Eigen::MatrixXd& corr) {
    return project_to_simplex(inverse_weights(corr, "mcp_weights"));
}

Eigen::MatrixXd pairwise_connectedness_index(const Eigen::MatrixXd& theta_tilde) {
    const Eigen::Index n = theta_tilde.rows();
    if (n == 0 || theta_tilde.cols() != n) {
        throw std::invalid_argument("pairwise_connectedness_index: square matrix required");
    }
    Eigen::MatrixXd pci = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double cross = theta_tilde(i, j) + theta_tilde(j, i);
            const double denom = theta_tilde(i, i) + theta_tilde(j, j) + cross;
            if (denom <= 0.0) {
                throw std::invalid_argument(
                    "pairwise_connectedness_index: nonpositive pair total");
            }
            pci(i, j) = pci(j, i) = 2.0 * cross / denom;
        }
    }
    return pci;
}

Eigen::VectorXd mcop_weights(const Eigen::MatrixXd& pci) {
    return project_to_simplex(inverse_weights(pci, "mcop_weights"));
}

std::pair<double, double> hedging_effectiveness(const Eigen::VectorXd& portfolio,
                                                const Eigen::VectorXd& asset) {
    if (portfolio.size() != asset.size()) {
        throw std::invalid_argument("hedging_effectiveness: length mismatch");
    }
    if (portfolio.size() < 30) {
        throw std::invalid_argument("hedging_effectiveness: need at least 30 observations");
    }
    const double var_p = sample_variance(portfolio);
    const double var_a = sample_variance(asset);
    if (var_a <= 0.0) {
        throw std::invalid_argument("hedging_effectiveness: asset variance is zero");
    }
    const double he = 1.0 - var_p / var_a;
    const double dof = static_cast<double>(portfolio.size() - 1);
    double pvalue = 1.0;
    if (var_p > 0.0) {
        const double f = var_p / var_a;
        pvalue = 2.0 * std::min(dist::f_cdf(f, dof, dof), dist::f_sf(f, dof, dof));
        pvalue = std::min(pvalue, 1.0);
    } else {
        pvalue = 0.0;
    }
    return {he, pvalue};
}

double sharpe(const Eigen::VectorXd& returns, SharpeDenominator denominator, double alpha) {
    if (returns.size() < 30) {
        throw std::invalid_argument("sharpe: need at least 30 observations");
    }
    const double mean = returns.mean();
    double risk = 0.0;
    switch (denominator) {
        case SharpeDenominator::StdDev:
            risk = std::sqrt(sample_variance(returns));
            break;
        case SharpeDenominator::Var: {
            if (!(alpha > 0.0 && alpha < 0.5)) {
                throw std::invalid_argument("sharpe: alpha must lie in (0, 0.5)");
            }
            risk = std::fabs(empirical_quantile(returns, alpha));
            break;
        }
        case SharpeDenominator::Cvar: {
            if (!(alpha > 0.0 && alpha < 0.5)) {
                throw std::invalid_argument("sharpe: alpha must lie in (0, 0.5)");
            }
            const double q = empirical_quantile(returns, alpha);
            double sum = 0.0;
            int count = 0;
            for (Eigen::Index i = 0; i < returns.size(); ++i) {
                if (returns(i) <= q) {
                    sum += returns(i);
                    ++count;
                }
            }
            risk = count > 0 ? std::fabs(sum / count) : 0.0;
            break;
        }
    }
    if (risk <= 1e-14 * (1.0 + std::fabs(mean))) {
        throw std::runtime_error("sharpe: zero risk denominator");
    }
    return mean / risk;
}

BacktestResult backtest(const ReturnPanel& panel, Strategy strategy, double tau,
                        const RollingConfig& config,
                        const std::optional<std::string>& break_date) {
    const Eigen::Index t = panel.values.rows();
    const Eigen::Index n = panel.values.cols();
    if (t < config.window + 1) {
        throw std::invalid_argument("backtest: need at least window + 1 observations");
    }

    BacktestResult result;
    std::vector<std::string> weight_dates;
    std::vector<Eigen::VectorXd> weight_rows;
    std::vector<double> realized;

    Eigen::VectorXd current = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    bool have_weights = false;
    Eigen::Index next_rebalance = config.window - 1;

    for (Eigen::Index end = config.window - 1; end + 1 < t; ++end) {
        if (end == next_rebalance) {
            next_rebalance += config.step;
            const Eigen::MatrixXd window_values =
                panel.values.middleRows(end - config.window + 1, config.window);
            try {
                Eigen::VectorXd weights;
                if (strategy == Strategy::Mvp || strategy == Strategy::Mcp) {
                    const Eigen::RowVectorXd mean = window_values.colwise().mean();
                    const Eigen::MatrixXd centered = window_values.rowwise() - mean;
                    Eigen::MatrixXd cov = centered.transpose() * centered /
                                          static_cast<double>(config.window - 1);
                    if (strategy == Strategy::Mvp) {
                        weights = mvp_weights(cov);
                    } else {
                        const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
                        if ((sd.array() <= 0.0).any()) {
                            throw std::runtime_error("zero-variance asset in window");
                        }
                        const Eigen::MatrixXd corr =
                            cov.array() / (sd * sd.transpose()).array();
                        weights = mcp_weights(corr);
                    }
                } else {
                    const QvarModel model = fit_qvar(window_values, config.lag, tau);
                    const VmaCoefficients vma = vma_coefficients(model, config.horizon);
                    const Eigen::MatrixXd theta_tilde =
                        normalize_rows(gfevd(vma, model.sigma, config.horizon));
                    weights = mcop_weights(pairwise_connectedness_index(theta_tilde));
                }
                current = weights;
                have_weights = true;
            } catch (const std::exception& e) {
                result.flags.push_back(panel.dates[static_cast<std::size_t>(end)] + ": " +
                                       e.what());
                // Keep the previous weights, if any; skip the period otherwise.
            }
        }
        if (!have_weights) continue;
        weight_dates.push_back(panel.dates[static_cast<std::size_t>(end)]);
        weight_rows.push_back(current);
        realized.push_back(current.dot(panel.values.row(end + 1)));
        result.realized_dates.push_back(panel.dates[static_cast<std::size_t>(end + 1)]);
    }

    if (realized.size() < 30) {
        throw std::runtime_error("backtest: fewer than 30 realized returns");
    }

    result.path.dates = std::move(weight_dates);
    result.path.weights.resize(static_cast<Eigen::Index>(weight_rows.size()), n);
    for (std::size_t i = 0; i < weight_rows.size(); ++i) {
        result.path.weights.row(static_cast<Eigen::Index>(i)) = weight_rows[i].transpose();
    }
    result.realized = Eigen::Map<const Eigen::VectorXd>(
        realized.data(), static_cast<Eigen::Index>(realized.size()));

    // Asset returns over the realized period, for hedging comparisons.
    // Realized dates are consecutive panel rows from the first successful
    // rebalance onward.
    const auto first_it = std::find(panel.dates.begin(), panel.dates.end(),
                                    result.realized_dates.front());
    const Eigen::Index first_realized = first_it - panel.dates.begin();
    const Eigen::MatrixXd asset_slice =
        panel.values.middleRows(first_realized, result.realized.size());
    result.full = build_report(result.realized, asset_slice);

    if (break_date) {
        Eigen::Index cut = 0;
        while (cut < result.realized.size() &&
               result.realized_dates[static_cast<std::size_t>(cut)] < *break_date) {
            ++cut;
        }
        if (cut >= 30) {
            result.pre = build_report(result.realized.head(cut), asset_slice.topRows(cut));
        }
        const Eigen::Index rest = result.realized.size() - cut;
        if (rest >= 30) {
            result.post = build_report(result.realized.tail(rest), asset_slice.bottomRows(rest));
        }
    }
    return result;
}

Eigen::VectorXd cumulative_returns(const WeightPath& path, const ReturnPanel& panel) {
    const auto rows = static_cast<Eigen::Index>(path.dates.size());
    if (rows == 0 || path.weights.rows() != rows) {
        throw std::invalid_argument("cumulative_returns: empty or inconsistent weight path");
    }
    Eigen::VectorXd out(rows);
    double running = 0.0;
    std::size_t panel_pos = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const std::string& date = path.dates[static_cast<std::size_t>(i)];
        while (panel_pos < panel.dates.size() && panel.dates[panel_pos] < date) ++panel_pos;
        if (panel_pos >= panel.dates.size() || panel.dates[panel_pos] != date) {
            throw std::invalid_argument("cumulative_returns: weight date " + date +
                                        " not found in the panel");
        }
        if (panel_pos + 1 >= panel.dates.size()) {
            throw std::invalid_argument("cumulative_returns: no return follows date " + date);
        }
        running += path.weights.row(i).dot(
            panel.values.row(static_cast<Eigen::Index>(panel_pos) + 1));
        out(i) = running;
    }
    return out;
}

}  // namespace qconn

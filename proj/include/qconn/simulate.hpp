#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qconn/panel.hpp"

namespace qconn::sim {

/// Deterministic random source. Transforms are implemented here rather
/// than via std::*_distribution, whose streams differ across standard
/// library implementations; a given seed yields the same draws everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform draw on (0, 1).
    double uniform() {
        // 53-bit mantissa, shifted away from exact 0.
        return (static_cast<double>(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(6.283185307179586476925286766559 * u2);
        have_spare_ = true;
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Student-t with integer degrees of freedom.
    double student_t(int df) {
        double chi2 = 0.0;
        for (int i = 0; i < df; ++i) {
            const double z = normal();
            chi2 += z * z;
        }
        return normal() / std::sqrt(chi2 / df);
    }

    std::uint64_t next_raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// T x n matrix of independent standard normal draws.
[[nodiscard]] Eigen::MatrixXd iid_gaussian(int t, int n, Rng& rng);

/// Simulates y_t = phi * y_{t-1} + u_t with u_t ~ N(0, sigma), discarding
/// a burn-in prefix. sigma must be symmetric positive definite.
[[nodiscard]] Eigen::MatrixXd var1_gaussian(int t, const Eigen::MatrixXd& phi,
                                            const Eigen::MatrixXd& sigma, Rng& rng,
                                            int burn_in = 200);

/// VAR(2) counterpart: y_t = phi1 y_{t-1} + phi2 y_{t-2} + u_t.
[[nodiscard]] Eigen::MatrixXd var2_gaussian(int t, const Eigen::MatrixXd& phi1,
                                            const Eigen::MatrixXd& phi2,
                                            const Eigen::MatrixXd& sigma, Rng& rng,
                                            int burn_in = 200);

/// Returns driven by a shared heavy-tailed factor: column i equals
/// loading * f_t + e_{i,t} with f_t Student-t(df) and e Gaussian noise.
[[nodiscard]] Eigen::MatrixXd common_factor_heavy_tail(int t, int n, double loading, int df,
                                                       Rng& rng);

/// Heavy-tailed common factor plus a shared volatility response to lagged
/// losses:
///   y_t = (1 + vol_feedback * mean_i max(-y_{i,t-1}, 0)) * (loading*f_t + e_t)
/// The volatility channel ties the series together in both tails while
/// leaving the conditional median uncoupled, so tail-quantile dynamics are
/// genuinely stronger than median dynamics.
[[nodiscard]] Eigen::MatrixXd tail_coupled_factor(int t, int n, double loading, int df,
                                                  double vol_feedback, Rng& rng);

/// Piecewise VAR(1): phi_a for the first half of the sample, phi_b after.
[[nodiscard]] Eigen::MatrixXd var1_regime_switch(int t, const Eigen::MatrixXd& phi_a,
                                                 const Eigen::MatrixXd& phi_b,
                                                 const Eigen::MatrixXd& sigma, Rng& rng,
                                                 int burn_in = 200);

/// Wraps a value matrix in a ReturnPanel with sequential calendar dates.
[[nodiscard]] ReturnPanel make_return_panel(const Eigen::MatrixXd& values,
                                            const std::string& start_date = "2020-01-01");

/// Wraps a value matrix in a PricePanel with sequential calendar dates.
[[nodiscard]] PricePanel make_price_panel(const Eigen::MatrixXd& values,
                                          const std::string& start_date = "2020-01-01");

/// Exponentiated cumulative returns, base 100: a synthetic price history.
[[nodiscard]] Eigen::MatrixXd prices_from_returns(const Eigen::MatrixXd& returns);

}  // namespace qconn::sim

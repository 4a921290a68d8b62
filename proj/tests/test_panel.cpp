#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qconn/panel.hpp"
#include "qconn/simulate.hpp"

using namespace qconn;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/qconn_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("load_price_csv parses a small panel") {
    const auto path = write_temp("basic.csv",
                                 "date,A,B\n"
                                 "2021-01-04,1.5,2\n"
                                 "2021-01-05,1.6,2.5\n"
                                 "2021-01-06,1.7,3\n");
    const PricePanel panel = load_price_csv(path);
    CHECK(panel.dates.size() == 3);
    CHECK(panel.labels == std::vector<std::string>{"A", "B"});
    CHECK(panel.values(0, 0) == 1.5);
    CHECK(panel.values(2, 1) == 3.0);
    std::remove(path.c_str());
}

TEST_CASE("load_price_csv keeps empty cells as missing") {
    const auto path = write_temp("missing.csv",
                                 "date,A,B\n"
                                 "2021-01-04,1.5,\n"
                                 "2021-01-05,1.6,2.5\n");
    const PricePanel panel = load_price_csv(path);
    int missing = 0;
    for (Eigen::Index t = 0; t < panel.values.rows(); ++t) {
        for (Eigen::Index j = 0; j < panel.values.cols(); ++j) {
            if (std::isnan(panel.values(t, j))) ++missing;
        }
    }
    CHECK(missing == 1);
    CHECK(std::isnan(panel.values(0, 1)));
    std::remove(path.c_str());
}

TEST_CASE("load_price_csv rejects duplicate dates naming the row") {
    const auto path = write_temp("dup.csv",
                                 "date,A\n"
                                 "2021-01-04,1\n"
                                 "2021-01-04,2\n");
    CHECK_THROWS_WITH_AS(load_price_csv(path), doctest::Contains("row 3"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("clean forward fills and backfills") {
    PricePanel panel;
    panel.dates = {"2021-01-01", "2021-01-02", "2021-01-03", "2021-01-04"};
    panel.labels = {"A"};
    const double nan = std::nan("");
    panel.values.resize(4, 1);
    panel.values << nan, 5.0, nan, 7.0;
    const PricePanel cleaned = clean(panel);
    CHECK(cleaned.values(0, 0) == 5.0);
    CHECK(cleaned.values(1, 0) == 5.0);
    CHECK(cleaned.values(2, 0) == 5.0);
    CHECK(cleaned.values(3, 0) == 7.0);
}

TEST_CASE("clean leaves complete columns unchanged and is idempotent") {
    sim::Rng rng(7);
    Eigen::MatrixXd values = sim::iid_gaussian(20, 3, rng).array() + 10.0;
    // knock out a few cells
    values(0, 1) = std::nan("");
    values(7, 2) = std::nan("");
    values(19, 0) = std::nan("");
    PricePanel panel = sim::make_price_panel(values);
    const PricePanel once = clean(panel);
    const PricePanel twice = clean(once);
    CHECK(once.values == twice.values);
    for (Eigen::Index t = 0; t < once.values.rows(); ++t) {
        for (Eigen::Index j = 0; j < once.values.cols(); ++j) {
            CHECK(!std::isnan(once.values(t, j)));
        }
    }
}

TEST_CASE("clean rejects a fully missing series") {
    PricePanel panel;
    panel.dates = {"2021-01-01", "2021-01-02", "2021-01-03"};
    panel.labels = {"A", "BAD"};
    const double nan = std::nan("");
    panel.values.resize(3, 2);
    panel.values << 1, nan, 2, nan, 3, nan;
    CHECK_THROWS_WITH_AS(clean(panel), doctest::Contains("BAD"), std::runtime_error);
}

TEST_CASE("log_returns matches direct formula") {
    PricePanel panel;
    panel.dates = {"2021-01-01", "2021-01-02", "2021-01-03"};
    panel.labels = {"A"};
    panel.values.resize(3, 1);
    panel.values << 1.0, std::exp(1.0), std::exp(2.0);
    const ReturnPanel returns = log_returns(panel);
    CHECK(returns.values.rows() == 2);
    CHECK(returns.values(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(returns.values(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(returns.dates.front() == "2021-01-02");
}

TEST_CASE("log_returns on constant prices is zero") {
    PricePanel panel;
    panel.dates = {"2021-01-01", "2021-01-02", "2021-01-03"};
    panel.labels = {"A"};
    panel.values = Eigen::MatrixXd::Constant(3, 1, 4.0);
    const ReturnPanel returns = log_returns(panel);
    CHECK(returns.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("log_returns of 100 -> 105 is ln(1.05)") {
    PricePanel panel;
    panel.dates = {"2021-01-01", "2021-01-02"};
    panel.labels = {"A"};
    panel.values.resize(2, 1);
    panel.values << 100.0, 105.0;
    const ReturnPanel returns = log_returns(panel);
    CHECK(returns.values(0, 0) == doctest::Approx(std::log(1.05)).epsilon(1e-15));
}

TEST_CASE("log_returns rejects nonpositive prices with coordinates") {
    PricePanel panel;
    panel.dates = {"2021-01-01", "2021-01-02"};
    panel.labels = {"A"};
    panel.values.resize(2, 1);
    panel.values << 100.0, -1.0;
    CHECK_THROWS_WITH_AS(log_returns(panel), doctest::Contains("row 1"), std::runtime_error);
}

TEST_CASE("prices reconstructed from returns match the original panel") {
    sim::Rng rng(11);
    const Eigen::MatrixXd raw = 0.01 * sim::iid_gaussian(50, 2, rng);
    const Eigen::MatrixXd prices = sim::prices_from_returns(raw);
    const PricePanel panel = sim::make_price_panel(prices);
    const ReturnPanel returns = log_returns(panel);

    // exp-cumsum identity: rebuild prices from the first level
    Eigen::MatrixXd rebuilt(prices.rows(), prices.cols());
    rebuilt.row(0) = prices.row(0);
    for (Eigen::Index t = 0; t < returns.values.rows(); ++t) {
        rebuilt.row(t + 1) =
            rebuilt.row(t).array() * returns.values.row(t).array().exp();
    }
    CHECK((rebuilt - prices).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("split partitions without losing rows") {
    sim::Rng rng(3);
    const ReturnPanel panel = sim::make_return_panel(sim::iid_gaussian(10, 2, rng));

    SUBCASE("at the first date gives an empty head") {
        const auto [pre, post] = split(panel, panel.dates.front());
        CHECK(pre.dates.empty());
        CHECK(post.dates.size() == 10);
    }
    SUBCASE("at an interior observed date") {
        const auto [pre, post] = split(panel, panel.dates[4]);
        CHECK(pre.dates.size() == 4);
        CHECK(post.dates.size() == 6);
        CHECK(pre.dates.back() < panel.dates[4]);
        CHECK(post.dates.front() == panel.dates[4]);
        Eigen::MatrixXd glued(10, 2);
        glued << pre.values, post.values;
        CHECK(glued == panel.values);
    }
    SUBCASE("at an unobserved date between rows") {
        // dates are consecutive days, so use an out-of-band time by
        // splitting a panel with a weekend-style gap
        ReturnPanel gapped = panel;
        gapped.dates[5] = "2020-01-09";  // leave 2020-01-06..08 unobserved
        for (std::size_t i = 6; i < gapped.dates.size(); ++i) {
            gapped.dates[i] = iso_from_days(days_from_iso("2020-01-09") +
                                            static_cast<long>(i) - 5);
        }
        const auto [pre, post] = split(gapped, "2020-01-07");
        CHECK(pre.dates.size() + post.dates.size() == 10);
        CHECK(pre.dates.back() < "2020-01-07");
        CHECK(post.dates.front() >= "2020-01-07");
    }
    SUBCASE("outside the range throws") {
        CHECK_THROWS_AS(split(panel, "2019-12-31"), std::runtime_error);
        CHECK_THROWS_AS(split(panel, "2031-01-01"), std::runtime_error);
    }
}

TEST_CASE("panel csv round trip is lossless") {
    sim::Rng rng(5);
    const ReturnPanel panel = sim::make_return_panel(0.01 * sim::iid_gaussian(25, 3, rng));
    const std::string path = "/tmp/qconn_test_roundtrip.csv";
    write_panel_csv(path, panel.dates, panel.labels, panel.values);
    const ReturnPanel loaded = load_return_csv(path);
    CHECK(loaded.dates == panel.dates);
    CHECK(loaded.labels == panel.labels);
    CHECK(loaded.values == panel.values);
    std::remove(path.c_str());
}

TEST_CASE("date helpers round trip") {
    CHECK(is_iso_date("2022-02-24"));
    CHECK(!is_iso_date("2022-2-24"));
    CHECK(!is_iso_date("2022-13-01"));
    CHECK(!is_iso_date("2021-02-29"));
    CHECK(is_iso_date("2020-02-29"));
    CHECK(iso_from_days(days_from_iso("2022-02-24")) == "2022-02-24");
    CHECK(days_from_iso("1970-01-01") == 0);
    CHECK(days_from_iso("1970-01-02") == 1);
}

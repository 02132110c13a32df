#include "sigfolio/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sigfolio/error.hpp"

namespace sigfolio {

namespace {

constexpr double kDaysPerYear = 365.0;

void check_positive(const std::vector<double>& values, std::size_t min_count) {
    if (values.size() < min_count)
        throw Error("need at least " + std::to_string(min_count) + " values");
    for (double v : values)
        if (!(v > 0.0)) throw Error("value series must be strictly positive");
}

}  // namespace

double annualized_return(const std::vector<Date>& dates, const std::vector<double>& values) {
    check_positive(values, 2);
    if (dates.size() != values.size()) throw Error("dates and values lengths differ");
    const int span = dates.back() - dates.front();
    if (span <= 0) throw Error("annualized return undefined over a zero-day span");
    return std::pow(values.back() / values.front(), kDaysPerYear / double(span)) - 1.0;
}

double annualized_volatility(const std::vector<double>& values) {
    check_positive(values, 3);
    const std::size_t n = values.size() - 1;
    std::vector<double> logret(n);
    for (std::size_t i = 0; i < n; ++i) logret[i] = std::log(values[i + 1] / values[i]);
    double mean = 0.0;
    for (double r : logret) mean += r;
    mean /= double(n);
    double var = 0.0;
    for (double r : logret) var += (r - mean) * (r - mean);
    var /= double(n);
    return std::sqrt(var) * std::sqrt(kDaysPerYear);
}

double max_drawdown(const std::vector<double>& values) {
    check_positive(values, 1);
    double peak = values.front();
    double worst = 0.0;
    for (double v : values) {
        peak = std::max(peak, v);
        worst = std::max(worst, 1.0 - v / peak);
    }
    return worst;
}

double sharpe(double ann_return, double ann_volatility) {
    if (!(ann_volatility > 0.0)) throw Error("sharpe undefined for zero volatility");
    return ann_return / ann_volatility;
}

double calmar(double ann_return, double mdd) {
    if (!(mdd > 0.0)) throw Error("calmar undefined for zero drawdown");
    return ann_return / mdd;
}

MetricSummary summarize(const std::vector<Date>& dates, const std::vector<double>& values) {
    MetricSummary s;
    s.annualized_return = annualized_return(dates, values);
    s.annualized_volatility = annualized_volatility(values);
    s.mdd = max_drawdown(values);
    if (s.annualized_volatility > 0.0) {
        s.sharpe = sharpe(s.annualized_return, s.annualized_volatility);
        s.sharpe_defined = true;
    }
    if (s.mdd > 0.0) {
        s.calmar = calmar(s.annualized_return, s.mdd);
        s.calmar_defined = true;
    }
    return s;
}

}  // namespace sigfolio

#pragma once

#include <vector>

#include "sigfolio/dates.hpp"

namespace sigfolio {

struct MetricSummary {
    double annualized_return = 0.0;
    double annualized_volatility = 0.0;
    double sharpe = 0.0;
    double calmar = 0.0;
    double mdd = 0.0;
    bool sharpe_defined = false;
    bool calmar_defined = false;
};

// Geometric annualization over the calendar span: (V_end/V_start)^(365/D) - 1.
double annualized_return(const std::vector<Date>& dates, const std::vector<double>& values);

// Population stdev of daily log-returns, scaled by sqrt(365).
double annualized_volatility(const std::vector<double>& values);

// Largest peak-to-trough relative decline.
double max_drawdown(const std::vector<double>& values);

// Plain ratios, zero risk-free rate. Throw on zero denominator.
double sharpe(double ann_return, double ann_volatility);
double calmar(double ann_return, double mdd);

MetricSummary summarize(const std::vector<Date>& dates, const std::vector<double>& values);

}  // namespace sigfolio

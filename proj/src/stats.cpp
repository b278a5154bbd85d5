#include "bpmac/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

namespace bpmac {

double student_t99(size_t dof) {
    if (dof < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
    boost::math::students_t dist{double(dof)};
    return boost::math::quantile(dist, 0.995);
}

Summary summarize99(std::span<const double> samples) {
    const size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("need at least 2 samples for a confidence interval");

    double sum = 0;
    for (double s : samples) sum += s;
    const double mean = sum / double(n);

    double ss = 0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    const double stddev = std::sqrt(ss / double(n - 1));
    const double half_width = student_t99(n - 1) * stddev / std::sqrt(double(n));

    return {mean, mean - half_width, mean + half_width, n};
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("need matching x/y with >= 2 points");

    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);

    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("x values are all equal");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double ss_res = 0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r2 = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

}  // namespace bpmac

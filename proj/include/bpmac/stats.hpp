#pragma once

#include <cstddef>
#include <span>

namespace bpmac {

// Mean with a two-sided 99% Student-t confidence interval over the samples.
struct Summary {
    double mean = 0;
    double ci99_low = 0;
    double ci99_high = 0;
    size_t count = 0;
};

// Requires at least 2 samples.
Summary summarize99(std::span<const double> samples);

// Two-sided 99% critical value of Student's t for the given degrees of
// freedom (i.e. the 0.995 quantile).
double student_t99(size_t dof);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
};

// Ordinary least squares of y on x. Requires >= 2 points with non-constant x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace bpmac

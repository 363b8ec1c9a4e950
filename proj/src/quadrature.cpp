#include "fixpoint/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixpoint/metric.hpp"

namespace fixpoint {

CumulativeIntegral::CumulativeIntegral(const std::function<double(double)>& integrand, double t_max,
                                       std::size_t subdivisions, std::string label)
    : t_max_(t_max), step_(0.0), label_(std::move(label)) {
    if (subdivisions < 2) throw std::invalid_argument("quadrature needs at least 2 subdivisions");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("quadrature t_max must be positive");
    step_ = t_max / static_cast<double>(subdivisions);

    std::vector<double> f(subdivisions + 1);
    for (std::size_t i = 0; i <= subdivisions; ++i) {
        const double t = i == subdivisions ? t_max : node(i);
        const double v = integrand(t);
        if (!std::isfinite(v) || v < 0.0) {
            std::ostringstream os;
            os.precision(17);
            os << "integrand " << label_ << " is " << v << " at grid node " << i << " (t = " << t
               << "); it must be finite and nonnegative";
            throw DomainError(os.str());
        }
        f[i] = v;
    }

    increments_.resize(subdivisions);
    prefix_.resize(subdivisions + 1);
    prefix_[0] = 0.0;
    for (std::size_t i = 0; i < subdivisions; ++i) {
        increments_[i] = 0.5 * step_ * (f[i] + f[i + 1]);
        prefix_[i + 1] = prefix_[i] + increments_[i];
    }
}

double CumulativeIntegral::operator()(double t) const {
    if (!(t >= 0.0) || t > t_max_) {
        std::ostringstream os;
        os.precision(17);
        os << "argument " << t << " outside the quadrature domain [0, " << t_max_ << "]";
        throw DomainError(os.str());
    }
    const std::size_t cells = increments_.size();
    const auto cell = std::min(cells - 1, static_cast<std::size_t>(t / step_));
    const double w = std::clamp((t - node(cell)) / step_, 0.0, 1.0);
    return prefix_[cell] + w * increments_[cell];
}

}  // namespace fixpoint

#include "polariton/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "polariton/dressed.hpp"
#include "polariton/reduced.hpp"

namespace polariton {

namespace {

// y = b + (A + D u) / (1 + u^2), u = (w - c)/g, parameters (c, A, g, b[, D])
struct LorentzFunctor : Eigen::DenseFunctor<double> {
    const Eigen::VectorXd& w;
    const Eigen::VectorXd& y;

    LorentzFunctor(const Eigen::VectorXd& w_, const Eigen::VectorXd& y_, bool dispersive)
        : Eigen::DenseFunctor<double>(dispersive ? 5 : 4, static_cast<int>(w_.size())), w(w_), y(y_)
    {
    }

    static double disp(const Eigen::VectorXd& x) { return x.size() > 4 ? x[4] : 0.0; }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const
    {
        const double d = disp(x);
        for (Eigen::Index k = 0; k < w.size(); ++k) {
            const double u = (w[k] - x[0]) / x[2];
            f[k] = x[3] + (x[1] + d * u) / (1.0 + u * u) - y[k];
        }
        return 0;
    }

    int df(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const
    {
        const double d = disp(x);
        for (Eigen::Index k = 0; k < w.size(); ++k) {
            const double u = (w[k] - x[0]) / x[2];
            const double q = 1.0 / (1.0 + u * u);
            // d/du of the profile
            const double du = d * q - 2.0 * u * q * q * (x[1] + d * u);
            jac(k, 0) = -du / x[2];
            jac(k, 1) = q;
            jac(k, 2) = -du * u / x[2];
            jac(k, 3) = 1.0;
            if (x.size() > 4) {
                jac(k, 4) = u * q;
            }
        }
        return 0;
    }
};

bool local_max(const std::vector<double>& v, std::size_t k)
{
    return k > 0 && k + 1 < v.size() && v[k] > v[k - 1] && v[k] >= v[k + 1];
}

// Height of v[k] above the higher of the two lowest points separating it
// from taller samples (or the ends) on either side.
double prominence(const std::vector<double>& v, std::size_t k)
{
    double left = v[k];
    for (std::size_t j = k; j-- > 0;) {
        if (v[j] > v[k]) {
            break;
        }
        left = std::min(left, v[j]);
    }
    double right = v[k];
    for (std::size_t j = k + 1; j < v.size(); ++j) {
        if (v[j] > v[k]) {
            break;
        }
        right = std::min(right, v[j]);
    }
    return v[k] - std::max(left, right);
}

// Half-width at half maximum above the higher neighbouring minimum, from
// linear interpolation of the half-level crossings.
double hwhm_estimate(const std::vector<double>& w, const std::vector<double>& v, std::size_t k)
{
    std::size_t lo = k;
    while (lo > 0 && v[lo - 1] < v[lo]) {
        --lo;
    }
    std::size_t hi = k;
    while (hi + 1 < v.size() && v[hi + 1] < v[hi]) {
        ++hi;
    }
    const double half = std::max(v[lo], v[hi]) + 0.5 * (v[k] - std::max(v[lo], v[hi]));
    std::vector<double> widths;
    for (std::size_t j = k; j > lo; --j) {
        if (v[j - 1] <= half) {
            const double t = (v[j] - half) / (v[j] - v[j - 1]);
            widths.push_back(w[k] - (w[j] - t * (w[j] - w[j - 1])));
            break;
        }
    }
    for (std::size_t j = k; j < hi; ++j) {
        if (v[j + 1] <= half) {
            const double t = (v[j] - half) / (v[j] - v[j + 1]);
            widths.push_back((w[j] + t * (w[j + 1] - w[j])) - w[k]);
            break;
        }
    }
    if (widths.empty()) {
        return 0.5 * std::min(w[k] - w[lo], w[hi] - w[k]);
    }
    double sum = 0.0;
    for (const double x : widths) {
        sum += x;
    }
    return sum / static_cast<double>(widths.size());
}

Peak fit_peak(const std::vector<double>& w, const std::vector<double>& v, std::size_t k,
              const PeakOptions& options)
{
    Peak peak;
    peak.index = k;
    peak.center = w[k];
    peak.height = v[k];
    const double est = hwhm_estimate(w, v, k);
    peak.fwhm = 2.0 * est;
    if (!(est > 0.0)) {
        return peak;
    }

    std::size_t lo = k;
    while (lo > 0 && w[lo - 1] >= w[k] - 3.0 * est) {
        --lo;
    }
    std::size_t hi = k;
    while (hi + 1 < w.size() && w[hi + 1] <= w[k] + 3.0 * est) {
        ++hi;
    }
    const auto count = static_cast<Eigen::Index>(hi - lo + 1);
    if (count < std::max(options.min_fit_points, 5)) {
        return peak;
    }

    // fit in units of the raw height so all parameters are O(1)
    const double scale = std::abs(v[k]) > 0.0 ? std::abs(v[k]) : 1.0;
    Eigen::VectorXd ww(count);
    Eigen::VectorXd yy(count);
    double floor = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < count; ++j) {
        ww[j] = w[lo + static_cast<std::size_t>(j)];
        yy[j] = v[lo + static_cast<std::size_t>(j)] / scale;
        floor = std::min(floor, yy[j]);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(options.dispersive ? 5 : 4);
    x.head<4>() << w[k], 1.0 - floor, est, floor;
    LorentzFunctor functor(ww, yy, options.dispersive);
    Eigen::LevenbergMarquardt<LorentzFunctor> lm(functor);
    lm.setXtol(1e-12);
    lm.setFtol(1e-12);
    lm.setMaxfev(2000);
    const auto status = lm.minimize(x);

    using namespace Eigen::LevenbergMarquardtSpace;
    const bool converged = status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
                           status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall ||
                           status == XtolTooSmall || status == FtolTooSmall || status == GtolTooSmall;
    const double g = std::abs(x[2]);
    if (!converged || !x.allFinite() || !(g > 0.0) || g > ww[count - 1] - ww[0] || !(x[1] > 0.0) ||
        x[0] < ww[0] || x[0] > ww[count - 1]) {
        return peak;
    }
    Eigen::VectorXd resid(count);
    functor(x, resid);
    peak.fitted = true;
    peak.center = x[0];
    peak.fwhm = 2.0 * g;
    peak.baseline = x[3] * scale;
    peak.dispersion = std::copysign(LorentzFunctor::disp(x), x[2]) * scale; // u flips with g
    peak.height = (x[1] + x[3]) * scale;
    peak.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(count)) / x[1];
    return peak;
}

} // namespace

std::vector<Peak> find_peaks(const std::vector<double>& omega, const std::vector<double>& values,
                             const PeakOptions& options)
{
    if (omega.size() != values.size()) {
        throw std::invalid_argument("find_peaks: grid and values differ in length");
    }
    for (std::size_t k = 1; k < omega.size(); ++k) {
        if (!(omega[k] > omega[k - 1])) {
            throw std::invalid_argument("find_peaks: grid must be strictly ascending");
        }
    }
    // NaN samples (failed solves) would poison comparisons; bridge them
    // linearly from their finite neighbours
    std::vector<double> v = values;
    std::vector<std::size_t> finite;
    double top = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (std::isfinite(v[k])) {
            finite.push_back(k);
            top = std::max(top, std::abs(v[k]));
        }
    }
    if (finite.empty()) {
        return {};
    }
    std::size_t next = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        while (next < finite.size() && finite[next] < k) {
            ++next;
        }
        if (next < finite.size() && finite[next] == k) {
            continue;
        }
        if (next == 0) {
            v[k] = v[finite.front()];
        } else if (next == finite.size()) {
            v[k] = v[finite.back()];
        } else {
            const std::size_t a = finite[next - 1];
            const std::size_t b = finite[next];
            const double t = (omega[k] - omega[a]) / (omega[b] - omega[a]);
            v[k] = v[a] + t * (v[b] - v[a]);
        }
    }

    std::vector<Peak> peaks;
    std::vector<std::size_t> maxima;
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        if (local_max(v, k) && prominence(v, k) >= options.min_prominence * top) {
            maxima.push_back(k);
            peaks.push_back(fit_peak(omega, v, k, options));
        }
    }

    if (options.shoulders && v.size() >= 5) {
        // -S'' on the (possibly non-uniform) grid
        std::vector<double> curv(v.size(), 0.0);
        double curv_top = 0.0;
        for (std::size_t k = 1; k + 1 < v.size(); ++k) {
            const double h1 = omega[k] - omega[k - 1];
            const double h2 = omega[k + 1] - omega[k];
            curv[k] = -2.0 * (h1 * v[k + 1] - (h1 + h2) * v[k] + h2 * v[k - 1]) / (h1 * h2 * (h1 + h2));
            curv_top = std::max(curv_top, std::abs(curv[k]));
        }
        curv.front() = curv[1];
        curv.back() = curv[curv.size() - 2];
        for (std::size_t k = 2; k + 2 < v.size(); ++k) {
            if (!local_max(curv, k) || prominence(curv, k) < options.shoulder_prominence * curv_top) {
                continue;
            }
            const bool near_max = std::any_of(maxima.begin(), maxima.end(), [&](std::size_t m) {
                return (m > k ? m - k : k - m) <= 3;
            });
            if (near_max) {
                continue;
            }
            Peak s;
            s.index = k;
            s.center = omega[k];
            s.height = v[k];
            s.shoulder = true;
            peaks.push_back(s);
        }
    }

    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.center < b.center; });
    return peaks;
}

std::vector<CatalogEntry> transition_catalog(const SystemParams& params)
{
    const StarkResult stark = stark_eigenvalues(params);
    const double s = stark.epsilon_plus;
    const ManifoldSpectrum m1 = dressed_manifold(params, 1);
    const ManifoldSpectrum m2 = dressed_manifold(params, 2);
    const ManifoldSpectrum m3 = dressed_manifold(params, 3);
    const auto e = [](const ManifoldSpectrum& m, int label) { return m.states[m.position_of(label)].epsilon; };

    return {
        {"Mollow-", -2.0 * s},
        {"Mollow0", 0.0},
        {"Mollow+", 2.0 * s},
        {"+D1", e(m3, 3) - e(m2, 3)},
        {"-D1", e(m3, 2) - e(m2, 2)},
        {"+D2", e(m2, 3) - s},
        {"-D2", e(m2, 2) + s},
        {"+D3", e(m2, 3) + s},
        {"-D3", e(m2, 2) - s},
        {"+D4", e(m1, 1) + s},
        {"-D4", e(m1, -1) - s},
    };
}

std::vector<Peak> identify_transitions(const SystemParams& params, std::vector<Peak> peaks, double window)
{
    const std::vector<CatalogEntry> catalog = transition_catalog(params);
    for (Peak& p : peaks) {
        p.assignment = "unassigned";
        p.assignment_residual = 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (const CatalogEntry& c : catalog) {
            const double d = std::abs(p.center - c.position);
            if (d < best) {
                best = d;
                if (d <= window) {
                    p.assignment = c.name;
                    p.assignment_residual = d;
                }
            }
        }
        if (p.assignment == "unassigned") {
            p.assignment_residual = best;
        }
    }
    return peaks;
}

} // namespace polariton

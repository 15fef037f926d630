// peaks.hpp: peak detection and Lorentzian fitting on sampled spectra, and
// assignment of peaks to dressed-state transition frequencies.

#pragma once

#include <string>
#include <vector>

#include "polariton/model.hpp"

namespace polariton {

struct Peak {
    double center{0.0};
    double height{0.0};   // value at the center: fitted amplitude + baseline
    double fwhm{0.0};
    double baseline{0.0};
    double dispersion{0.0}; // D of the dispersive admixture, same units as height
    double residual{0.0}; // rms fit residual / fitted amplitude
    std::size_t index{0}; // grid sample of the raw maximum
    bool fitted{false};   // false: raw maximum, width from the half-height estimate
    bool shoulder{false}; // a curvature feature rather than a local maximum
    std::string assignment{"unassigned"};
    double assignment_residual{0.0};

    double hwhm() const { return fwhm / 2.0; }
};

struct PeakOptions {
    // local maxima whose topographic prominence is below this fraction of
    // the largest sample are dropped
    double min_prominence{1e-6};
    // also report shoulders: local maxima of -S'' that are not next to a
    // local maximum of S, kept when their -S'' prominence exceeds this
    // fraction of max |S''|
    bool shoulders{false};
    double shoulder_prominence{1e-7};
    int min_fit_points{5};
    // fit (A + D u)/(1 + u^2) rather than A/(1 + u^2); Mollow sidebands are
    // asymmetric and a pure Lorentzian drags their center toward the middle
    bool dispersive{true};
};

// Fits b + (A + D u) / (1 + u^2), u = (w - c)/g, to the samples within +-3
// estimated HWHM of every detected maximum (D = 0 unless
// options.dispersive). A fit is rejected, leaving the raw maximum, when it
// fails to converge or lands its center or width outside the window.
// Peaks come back sorted by center.
std::vector<Peak> find_peaks(const std::vector<double>& omega, const std::vector<double>& values,
                             const PeakOptions& options = {});

struct CatalogEntry {
    std::string name;
    double position{0.0};
};

// Transition frequencies near which sidebands are expected:
//   +D1 = e3(3) - e3(2)     -D1 = e2(3) - e2(2)
//   +D2 = e3(2) - s         -D2 = e2(2) + s
//   +D3 = e3(2) + s         -D3 = e2(2) - s
//   +D4 = e+(1) + s         -D4 = e-(1) - s
// with e_j(n) the dressed energies (ascending labels) and +-s the Stark
// doublet energies, plus the Mollow set 0, +-2s. Without splitting s = 0.
std::vector<CatalogEntry> transition_catalog(const SystemParams& params);

// Nearest catalog entry within `window`, else "unassigned".
std::vector<Peak> identify_transitions(const SystemParams& params, std::vector<Peak> peaks,
                                       double window = 0.1);

} // namespace polariton

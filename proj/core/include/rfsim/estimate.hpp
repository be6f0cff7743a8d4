#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rfsim/correlations.hpp"
#include "rfsim/optim.hpp"

// Parameter recovery: maximum-likelihood fits of {p0,p1,p2;M'} to
// phase-resolved coincidence data and least-squares fits of the
// visibility-versus-flux curve in both model forms.
namespace rfsim {

struct FitResult {
    std::map<std::string, double> values;
    std::map<std::string, double> stderrs;
    double objective = 0.0;        // chi^2
    double log_likelihood = 0.0;   // -chi^2/2 up to the Gaussian constant
    bool converged = false;
    int iterations = 0;
    int starts = 0;
    std::string model;
};

std::string fit_result_json(const FitResult& fit);

struct CoincidencePoint {
    double phi = 0.0;
    DegeneracyClass clazz = DegeneracyClass::zero;  // zero or side
    double value = 0.0;  // coincidence normalized to the baseline C0
    double error = 0.0;  // 1-sigma; nonpositive entries fall back to unit weights
};

struct FitOptions {
    int starts = 12;  // lower bound; the built-in start list has 12 points
    optim::NelderMeadOptions nelder_mead{};
    int refine_iterations = 200;
};

// Normalized model curve C_class(phi)/C0(phi) for given parameters.
double coincidence_model(double phi, DegeneracyClass clazz, const EmitterParams& params);

// Gaussian likelihood over {p0,p1,p2,M'} with M fixed externally (the
// coherence plateau pins M = |g1|^2). Probabilities run through a softmax
// parameterization so every iterate stays on the simplex; multi-start
// simplex descent, then an analytic-Jacobian damped Gauss-Newton polish.
FitResult mle_fit_coincidences(std::span<const CoincidencePoint> data, double fixed_M,
                               const FitOptions& opts = {});

enum class VisibilityModel { saturation, rabi };

struct VisibilityPoint {
    double nbar = 0.0;
    double visibility = 0.0;
};

// V = V0/(1 + x nbar) or V = V0/(1 + Omega_scale^2 T1 T2 nbar); the forms
// coincide under x = Omega_scale^2 T1 T2, so both report the derived x.
FitResult fit_visibility_curve(std::span<const VisibilityPoint> data,
                               VisibilityModel model, double T1 = 67.2e-12,
                               double T2 = 1.62 * 67.2e-12,
                               const FitOptions& opts = {});

// p1 = 1/sqrt(g2(0)) from the filtered super-bunching value.
double infer_p1_from_g2(double g2_zero_filtered);

struct SaturationConsistency {
    double p1_inferred = 0.0;
    double p1_saturation = 0.0;
    bool consistent = false;
};

// Flags an inferred p1 that disagrees with the saturation law at the given
// flux (the measured low-flux super-bunching sits far below the ideal
// model; background and finite indistinguishability are not modeled).
SaturationConsistency check_p1_saturation_consistency(double p1_inferred, double nbar,
                                                      double eta_ab,
                                                      double rel_tol = 0.2);

std::vector<CoincidencePoint> read_coincidence_csv(const std::string& path);
std::vector<VisibilityPoint> read_visibility_csv(const std::string& path);
void write_coincidence_csv(const std::string& path,
                           std::span<const CoincidencePoint> points);

}  // namespace rfsim

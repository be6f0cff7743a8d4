#include "rfsim/emitter.hpp"

#include <cmath>
#include <sstream>

namespace rfsim {

namespace {

constexpr double k_prob_tol = 1e-12;
// "Much smaller" threshold for the p2 << p1^2/2 validity condition.
constexpr double k_p2_smallness = 0.5;

void check_probability(double p, const char* name) {
    if (!(p >= -k_prob_tol && p <= 1.0 + k_prob_tol))
        throw config_error(std::string(name) + " must lie in [0,1]");
}

}  // namespace

void EmitterParams::validate() const {
    check_probability(p0, "p0");
    check_probability(p1, "p1");
    check_probability(p2, "p2");
    if (std::abs(p0 + p1 + p2 - 1.0) > k_prob_tol)
        throw config_error("populations p0+p1+p2 must sum to 1");
    if (!(eta_ab > 0.0 && eta_ab <= 1.0))
        throw config_error("eta_ab must lie in (0,1]");
    if (!(M >= 0.0 && M <= 1.0) || !(Mprime >= 0.0 && Mprime <= 1.0))
        throw config_error("M and M' must lie in [0,1]");
    if (nbar < 0.0) throw config_error("nbar must be nonnegative");
    if (!(T1 > 0.0 && T2 > 0.0 && TL > 0.0)) throw config_error("T1, T2, TL must be positive");
    if (no_pure_dephasing && T2 > 2.0 * T1 * (1.0 + 1e-9))
        throw config_error("no_pure_dephasing set but T2 > 2*T1");
}

std::vector<std::string> EmitterParams::warnings() const {
    std::vector<std::string> out;
    if (p1 > 0.0 && p2 >= k_p2_smallness * (p1 * p1 / 2.0)) {
        std::ostringstream os;
        os << "p2 = " << p2 << " is not small against p1^2/2 = " << p1 * p1 / 2.0
           << "; the two-photon admixture model assumes p2 << p1^2/2";
        out.push_back(os.str());
    }
    if (p1 == 0.0 && p2 > 0.0)
        out.push_back("p2 > 0 with p1 = 0 is outside the model's regime");
    return out;
}

double saturation_p1(double nbar, double eta_ab) {
    if (nbar < 0.0) throw config_error("nbar must be nonnegative");
    if (!(eta_ab > 0.0 && eta_ab <= 1.0)) throw config_error("eta_ab must lie in (0,1]");
    const double u = 2.0 * nbar * eta_ab;
    return u / (1.0 + u);
}

double saturation_nbar(double p1, double eta_ab) {
    if (!(p1 >= 0.0 && p1 < 1.0)) throw config_error("p1 must lie in [0,1) to invert");
    if (!(eta_ab > 0.0 && eta_ab <= 1.0)) throw config_error("eta_ab must lie in (0,1]");
    return p1 / (2.0 * eta_ab * (1.0 - p1));
}

std::string saturation_validity_warning(const EmitterParams& params) {
    if (params.no_pure_dephasing) return {};
    if (std::abs(params.T2 - 2.0 * params.T1) <= 1e-6 * params.T1) return {};
    std::ostringstream os;
    os << "saturation law assumes no pure dephasing (T2 = 2*T1); configured T2 = "
       << params.T2 << " s vs 2*T1 = " << 2.0 * params.T1 << " s";
    return os.str();
}

fock::ModeState steady_state(const EmitterParams& params, std::string_view photon_label,
                             std::string_view matter_label, double carrier_phase,
                             int truncation) {
    params.validate();
    if (params.p2 != 0.0)
        throw config_error("steady_state has no two-photon sector; p2 must be 0");
    if (truncation < 1) throw config_error("steady_state needs photon truncation >= 1");

    fock::ModeSpec spec({fock::Mode::photon(std::string(photon_label), truncation),
                         fock::Mode::matter(std::string(matter_label))});
    std::vector<fock::cplx> amp(spec.dimension(), fock::cplx{0.0, 0.0});
    const fock::cplx carrier = std::polar(1.0, carrier_phase);
    const std::vector<int> vac_g{0, 0}, vac_e{0, 1}, one_g{1, 0};
    amp[spec.flat_index(vac_g)] = std::sqrt(params.p0);
    amp[spec.flat_index(vac_e)] = std::sqrt(params.p1 / 2.0) * carrier;
    amp[spec.flat_index(one_g)] = std::sqrt(params.p1 / 2.0) * carrier;
    return fock::ModeState(std::move(spec), std::move(amp));
}

fock::ModeState photon_pure_state(double p0, double p1, double p2,
                                  std::string_view label, int truncation) {
    if (std::abs(p0 + p1 + p2 - 1.0) > k_prob_tol)
        throw config_error("photon_pure_state probabilities must sum to 1");
    if (p2 > 0.0 && truncation < 2)
        throw config_error("photon_pure_state with p2 > 0 needs truncation >= 2");
    fock::ModeSpec spec({fock::Mode::photon(std::string(label), truncation)});
    std::vector<fock::cplx> amp(spec.dimension(), fock::cplx{0.0, 0.0});
    amp[0] = std::sqrt(p0);
    amp[1] = std::sqrt(p1);
    if (truncation >= 2) amp[2] = std::sqrt(p2);
    return fock::ModeState(std::move(spec), std::move(amp));
}

fock::DensityState reduced_photon_density(double p0, double p1, std::string_view label,
                                          int truncation) {
    if (std::abs(p0 + p1 - 1.0) > k_prob_tol)
        throw config_error("reduced_photon_density requires p0 + p1 = 1");
    fock::ModeSpec spec({fock::Mode::photon(std::string(label), truncation)});
    const auto dim = static_cast<Eigen::Index>(spec.dimension());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho(0, 0) = p0 + p1 / 2.0;
    rho(1, 1) = p1 / 2.0;
    rho(1, 0) = std::sqrt(p0 * p1 / 2.0);
    rho(0, 1) = std::sqrt(p0 * p1 / 2.0);
    return fock::DensityState(std::move(spec), std::move(rho));
}

}  // namespace rfsim

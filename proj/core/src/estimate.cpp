#include "rfsim/estimate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rfsim {

namespace {

struct SimplexCoords {
    // theta = (z0, z1, w): p_i = e^{z_i}/S with z2 = 0, M' = logistic(w).
    static void to_params(std::span<const double> theta, double& p0, double& p1,
                          double& p2, double& mprime) {
        const double e0 = std::exp(theta[0]), e1 = std::exp(theta[1]);
        const double s = e0 + e1 + 1.0;
        p0 = e0 / s;
        p1 = e1 / s;
        p2 = 1.0 / s;
        mprime = 1.0 / (1.0 + std::exp(-theta[2]));
    }
    static std::vector<double> from_params(double p0, double p1, double p2,
                                           double mprime) {
        const double floor = 1e-300;
        p0 = std::max(p0, floor);
        p1 = std::max(p1, floor);
        p2 = std::max(p2, floor);
        mprime = std::min(std::max(mprime, 1e-12), 1.0 - 1e-12);
        return {std::log(p0 / p2), std::log(p1 / p2),
                std::log(mprime / (1.0 - mprime))};
    }
};

struct CoincidenceModelParts {
    double value = 0.0;  // C/B
    double d_p0 = 0.0, d_p1 = 0.0, d_p2 = 0.0, d_mp = 0.0;
};

CoincidenceModelParts model_with_gradient(double phi, DegeneracyClass clazz, double p0,
                                          double p1, double p2, double mprime,
                                          double M) {
    const double c1 = std::cos(phi), c2 = std::cos(2.0 * phi);
    const double B = p1 * p1 / 4.0 * (1.0 - M * p0 * p0 * c1 * c1);
    const double dB_p0 = -p1 * p1 / 2.0 * M * p0 * c1 * c1;
    const double dB_p1 = p1 / 2.0 * (1.0 - M * p0 * p0 * c1 * c1);

    double C = 0.0, dC_p0 = 0.0, dC_p1 = 0.0, dC_p2 = 0.0, dC_mp = 0.0;
    if (clazz == DegeneracyClass::zero) {
        const double q = p1 + 2.0 * p2;
        C = p2 / 4.0 * (1.0 - p0 * M * c2) + q * q / 8.0 * (1.0 - mprime);
        dC_p0 = -p2 / 4.0 * M * c2;
        dC_p1 = q / 4.0 * (1.0 - mprime);
        dC_p2 = 0.25 * (1.0 - p0 * M * c2) + q / 2.0 * (1.0 - mprime);
        dC_mp = -q * q / 8.0;
    } else {
        C = p0 * p1 * p1 / 16.0 * (3.0 - 2.0 * M * c2) + 3.0 / 16.0 * p1 * p1 * p1;
        dC_p0 = p1 * p1 / 16.0 * (3.0 - 2.0 * M * c2);
        dC_p1 = p0 * p1 / 8.0 * (3.0 - 2.0 * M * c2) + 9.0 / 16.0 * p1 * p1;
    }

    CoincidenceModelParts out;
    out.value = C / B;
    out.d_p0 = (dC_p0 * B - C * dB_p0) / (B * B);
    out.d_p1 = (dC_p1 * B - C * dB_p1) / (B * B);
    out.d_p2 = dC_p2 / B;
    out.d_mp = dC_mp / B;
    return out;
}

std::vector<std::array<double, 4>> coincidence_starts() {
    // Half generic spread, half hugging the p2 -> 0, M' -> 1 boundary;
    // near-ideal data puts the optimum there and the zero-class weights
    // wall off approaches from deep inside the simplex.
    return {{
        {0.334, 0.333, 0.333, 0.90},
        {0.80, 0.15, 0.05, 0.95},
        {0.50, 0.45, 0.05, 0.92},
        {0.30, 0.60, 0.10, 0.85},
        {0.90, 0.09, 0.01, 0.99},
        {0.60, 0.38, 0.02, 0.80},
        {0.50, 0.50, 1e-4, 0.999},
        {0.75, 0.25, 1e-4, 0.999},
        {0.25, 0.75, 1e-4, 0.999},
        {0.92, 0.08, 1e-4, 0.999},
        {0.45, 0.50, 0.05, 0.96},
        {0.97, 0.028, 0.002, 0.93},
    }};
}

}  // namespace

std::string fit_result_json(const FitResult& fit) {
    nlohmann::json j;
    j["schema_version"] = "rfsim.fit.v1";
    j["model"] = fit.model;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["starts"] = fit.starts;
    j["objective_chi2"] = fit.objective;
    j["log_likelihood"] = fit.log_likelihood;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, value] : fit.values) {
        nlohmann::json entry;
        entry["value"] = value;
        const auto it = fit.stderrs.find(name);
        entry["stderr"] = it == fit.stderrs.end() ? 0.0 : it->second;
        params[name] = entry;
    }
    j["parameters"] = params;
    return j.dump(2);
}

double coincidence_model(double phi, DegeneracyClass clazz, const EmitterParams& params) {
    params.validate();
    return model_with_gradient(phi, clazz, params.p0, params.p1, params.p2,
                               params.Mprime, params.M)
        .value;
}

FitResult mle_fit_coincidences(std::span<const CoincidencePoint> data, double fixed_M,
                               const FitOptions& opts) {
    if (!(fixed_M >= 0.0 && fixed_M <= 1.0))
        throw config_error("fixed M must lie in [0,1]");
    std::set<double> phis;
    bool have_zero = false, have_side = false;
    for (const auto& p : data) {
        phis.insert(p.phi);
        if (p.clazz == DegeneracyClass::zero) have_zero = true;
        if (p.clazz == DegeneracyClass::side_plus || p.clazz == DegeneracyClass::side_minus)
            have_side = true;
        if (p.clazz == DegeneracyClass::nondegenerate)
            throw config_error("baseline-normalized data cannot contain the baseline class");
    }
    if (phis.size() < 4) throw config_error("need at least 4 distinct phase points");
    if (!have_zero || !have_side)
        throw config_error("need both the zero and side coincidence classes");
    const double v0 = data[0].value;
    if (std::all_of(data.begin(), data.end(),
                    [&](const CoincidencePoint& p) { return p.value == v0; }))
        throw config_error("degenerate data: all values equal");

    std::vector<double> sigma(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        sigma[i] = data[i].error > 0.0 ? data[i].error : 1.0;

    auto residuals = [&](std::span<const double> theta, Eigen::VectorXd& r,
                         Eigen::MatrixXd& jac) {
        double p0, p1, p2, mp;
        SimplexCoords::to_params(theta, p0, p1, p2, mp);
        const double dmp_dw = mp * (1.0 - mp);
        r.resize(static_cast<Eigen::Index>(data.size()));
        jac.resize(static_cast<Eigen::Index>(data.size()), 3);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto parts =
                model_with_gradient(data[i].phi, data[i].clazz, p0, p1, p2, mp, fixed_M);
            const auto row = static_cast<Eigen::Index>(i);
            r(row) = (parts.value - data[i].value) / sigma[i];
            // Softmax chain rule: dp_i/dz_j = p_i (delta_ij - p_j).
            const double d_by_p[3] = {parts.d_p0, parts.d_p1, parts.d_p2};
            const double probs[3] = {p0, p1, p2};
            for (int j = 0; j < 2; ++j) {
                double g = 0.0;
                for (int k = 0; k < 3; ++k)
                    g += d_by_p[k] * probs[k] * ((k == j ? 1.0 : 0.0) - probs[j]);
                jac(row, j) = g / sigma[i];
            }
            jac(row, 2) = parts.d_mp * dmp_dw / sigma[i];
        }
    };

    auto chi2 = [&](std::span<const double> theta) {
        Eigen::VectorXd r;
        Eigen::MatrixXd jac;
        residuals(theta, r, jac);
        return r.squaredNorm();
    };

    FitResult best;
    best.model = "hom_coincidences";
    best.objective = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_cov;
    std::vector<double> best_theta;

    auto starts = coincidence_starts();
    if (static_cast<std::size_t>(std::max(opts.starts, 1)) > starts.size())
        starts.resize(static_cast<std::size_t>(opts.starts), starts.back());
    int total_iter = 0;
    for (const auto& s : starts) {
        auto theta = SimplexCoords::from_params(s[0], s[1], s[2], s[3]);
        auto nm = optim::nelder_mead(chi2, theta, 0.8, opts.nelder_mead);
        total_iter += nm.iterations;
        auto refined = nm.x;
        auto lm = optim::levenberg_refine(residuals, refined, opts.refine_iterations);
        total_iter += lm.iterations;
        if (lm.objective < best.objective) {
            best.objective = lm.objective;
            best.converged = nm.converged || lm.converged;
            best_theta = refined;
            best_cov = lm.covariance;
        }
    }
    if (!std::isfinite(best.objective) || best_theta.empty())
        throw numeric_error("coincidence fit failed to converge from every start");

    double p0, p1, p2, mp;
    SimplexCoords::to_params(best_theta, p0, p1, p2, mp);
    best.iterations = total_iter;
    best.starts = static_cast<int>(starts.size());
    best.log_likelihood = -0.5 * best.objective;
    best.values = {{"p0", p0}, {"p1", p1}, {"p2", p2}, {"Mprime", mp}};

    // Delta method through the softmax/logistic map.
    Eigen::MatrixXd g(4, 3);
    const double probs[3] = {p0, p1, p2};
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 2; ++j)
            g(k, j) = probs[k] * ((k == j ? 1.0 : 0.0) - probs[j]);
    g(0, 2) = g(1, 2) = g(2, 2) = 0.0;
    g(3, 0) = g(3, 1) = 0.0;
    g(3, 2) = mp * (1.0 - mp);
    const Eigen::MatrixXd cov_q = g * best_cov * g.transpose();
    const char* names[4] = {"p0", "p1", "p2", "Mprime"};
    for (int k = 0; k < 4; ++k)
        best.stderrs[names[k]] = std::sqrt(std::max(cov_q(k, k), 0.0));
    return best;
}

FitResult fit_visibility_curve(std::span<const VisibilityPoint> data,
                               VisibilityModel model, double T1, double T2,
                               const FitOptions& opts) {
    if (data.size() < 3)
        throw config_error("visibility fit needs at least 3 flux points");
    double lo = data[0].nbar, hi = data[0].nbar;
    for (const auto& p : data) {
        lo = std::min(lo, p.nbar);
        hi = std::max(hi, p.nbar);
        if (p.nbar <= 0.0) throw config_error("nbar values must be positive");
    }
    if (hi / lo < 10.0)
        throw config_error("insufficient spread in nbar: fit needs a decade of flux");
    const bool rabi = model == VisibilityModel::rabi;
    const double t1t2 = T1 * T2;
    if (rabi && !(t1t2 > 0.0)) throw config_error("rabi model needs positive T1, T2");

    // theta = (ln V0, ln x) with x = Omega_scale^2 T1 T2 in the rabi form.
    auto residuals = [&](std::span<const double> theta, Eigen::VectorXd& r,
                         Eigen::MatrixXd& jac) {
        const double v0 = std::exp(theta[0]);
        const double x = std::exp(theta[1]);
        r.resize(static_cast<Eigen::Index>(data.size()));
        jac.resize(static_cast<Eigen::Index>(data.size()), 2);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double den = 1.0 + x * data[i].nbar;
            const double m = v0 / den;
            const auto row = static_cast<Eigen::Index>(i);
            r(row) = m - data[i].visibility;
            jac(row, 0) = m;
            jac(row, 1) = -m * x * data[i].nbar / den;
        }
    };
    auto chi2 = [&](std::span<const double> theta) {
        Eigen::VectorXd r;
        Eigen::MatrixXd jac;
        residuals(theta, r, jac);
        return r.squaredNorm();
    };

    FitResult best;
    best.model = rabi ? "visibility_rabi" : "visibility_saturation";
    best.objective = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_cov;
    std::vector<double> best_theta;
    const double x_starts[4] = {0.5, 2.0, 8.0, 0.05};
    int total_iter = 0;
    for (double xs : x_starts) {
        std::vector<double> theta{std::log(0.9), std::log(xs)};
        auto nm = optim::nelder_mead(chi2, theta, 0.5, opts.nelder_mead);
        total_iter += nm.iterations;
        auto refined = nm.x;
        auto lm = optim::levenberg_refine(residuals, refined, opts.refine_iterations);
        total_iter += lm.iterations;
        if (lm.objective < best.objective) {
            best.objective = lm.objective;
            best.converged = nm.converged || lm.converged;
            best_theta = refined;
            best_cov = lm.covariance;
        }
    }
    if (!std::isfinite(best.objective) || best_theta.empty())
        throw numeric_error("visibility fit failed to converge");

    const double v0 = std::exp(best_theta[0]);
    const double x = std::exp(best_theta[1]);
    best.iterations = total_iter;
    best.starts = 4;
    best.log_likelihood = -0.5 * best.objective;
    const double sd_lnv0 = std::sqrt(std::max(best_cov(0, 0), 0.0));
    const double sd_lnx = std::sqrt(std::max(best_cov(1, 1), 0.0));
    best.values = {{"V0", v0}, {"x", x}};
    best.stderrs = {{"V0", v0 * sd_lnv0}, {"x", x * sd_lnx}};
    if (rabi) {
        const double omega_scale = std::sqrt(x / t1t2);
        best.values["Omega_scale"] = omega_scale;
        best.stderrs["Omega_scale"] = omega_scale * 0.5 * sd_lnx;
    }
    return best;
}

double infer_p1_from_g2(double g2_zero_filtered) {
    if (!(g2_zero_filtered >= 1.0))
        throw config_error("filtered g2(0) below 1 is outside the model range");
    return 1.0 / std::sqrt(g2_zero_filtered);
}

SaturationConsistency check_p1_saturation_consistency(double p1_inferred, double nbar,
                                                      double eta_ab, double rel_tol) {
    SaturationConsistency out;
    out.p1_inferred = p1_inferred;
    out.p1_saturation = saturation_p1(nbar, eta_ab);
    const double scale = std::max(out.p1_saturation, 1e-300);
    out.consistent = std::abs(p1_inferred - out.p1_saturation) / scale <= rel_tol;
    return out;
}

namespace {

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path,
                                                    const std::string& expected_header,
                                                    std::size_t columns,
                                                    std::size_t& header_row) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open '" + path + "'");
    std::string line;
    std::size_t row = 0;
    // Skip comment lines, then require the column header.
    while (std::getline(is, line)) {
        ++row;
        if (!line.empty() && line[0] == '#') continue;
        break;
    }
    if (line != expected_header)
        throw io_error(path + " row " + std::to_string(row) + ": expected header '" +
                       expected_header + "', got '" + line + "'");
    header_row = row;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<std::string> cells;
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != columns)
            throw io_error(path + " row " + std::to_string(row) + ": expected " +
                           std::to_string(columns) + " columns, got " +
                           std::to_string(cells.size()));
        cells.push_back(std::to_string(row));  // keep the row number for errors
        rows.push_back(std::move(cells));
    }
    return rows;
}

double parse_double(const std::string& cell, const std::string& path,
                    const std::string& row) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw io_error(path + " row " + row + ": '" + cell + "' is not a number");
    }
}

}  // namespace

std::vector<CoincidencePoint> read_coincidence_csv(const std::string& path) {
    std::size_t header_row = 0;
    auto rows = read_csv_rows(path, "phi_radians,class,value,error", 4, header_row);
    std::vector<CoincidencePoint> out;
    for (const auto& cells : rows) {
        CoincidencePoint p;
        const std::string& row = cells.back();
        p.phi = parse_double(cells[0], path, row);
        try {
            p.clazz = degeneracy_class_from_string(cells[1]);
        } catch (const config_error& e) {
            throw io_error(path + " row " + row + ": " + e.what());
        }
        p.value = parse_double(cells[2], path, row);
        p.error = parse_double(cells[3], path, row);
        out.push_back(p);
    }
    if (out.empty()) throw io_error(path + ": no data rows");
    return out;
}

std::vector<VisibilityPoint> read_visibility_csv(const std::string& path) {
    std::size_t header_row = 0;
    auto rows = read_csv_rows(path, "nbar,visibility", 2, header_row);
    std::vector<VisibilityPoint> out;
    for (const auto& cells : rows) {
        VisibilityPoint p;
        p.nbar = parse_double(cells[0], path, cells.back());
        p.visibility = parse_double(cells[1], path, cells.back());
        out.push_back(p);
    }
    if (out.empty()) throw io_error(path + ": no data rows");
    return out;
}

void write_coincidence_csv(const std::string& path,
                           std::span<const CoincidencePoint> points) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    os.precision(17);
    os << "# schema=rfsim.coincidences.v1\n";
    os << "phi_radians,class,value,error\n";
    for (const auto& p : points) {
        os << p.phi << ",";
        switch (p.clazz) {
            case DegeneracyClass::zero: os << "zero"; break;
            case DegeneracyClass::side_plus: os << "side+"; break;
            case DegeneracyClass::side_minus: os << "side-"; break;
            case DegeneracyClass::nondegenerate: os << "baseline"; break;
        }
        os << "," << p.value << "," << p.error << "\n";
    }
}

}  // namespace rfsim

#include "fluxquant/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fluxquant/errors.hpp"

namespace fluxquant {

namespace {

using LogPoint = std::array<double, 3>;

CircuitParams params_from_log(const LogPoint& x) {
    return CircuitParams{std::exp(x[0]), std::exp(x[1]), std::exp(x[2])};
}

double simplex_diameter(const std::array<LogPoint, 4>& simplex) {
    double diam = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            double d2 = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double d = simplex[i][k] - simplex[j][k];
                d2 += d * d;
            }
            diam = std::max(diam, std::sqrt(d2));
        }
    }
    return diam;
}

// Weighted sum of squared residuals; eigensolves are shared between
// observations taken at the same flux.
double objective(const std::vector<SpectroscopyPoint>& obs, const CircuitParams& p, int dim) {
    if (!std::isfinite(p.e_c) || !std::isfinite(p.e_j) || !std::isfinite(p.e_l)) {
        return std::numeric_limits<double>::infinity();
    }
    std::map<double, int> levels_needed;
    for (const auto& pt : obs) {
        auto [it, inserted] = levels_needed.emplace(pt.flux, pt.level_j + 1);
        if (!inserted) it->second = std::max(it->second, pt.level_j + 1);
    }
    FluxoniumOperators ops(p, dim);
    std::map<double, RealVector> energies;
    for (const auto& [flux, k] : levels_needed) {
        energies[flux] =
            solve_static(p, ExternalFlux(flux), FluxAllocation::Inductor, ops, k).energies;
    }
    double sum = 0.0;
    for (const auto& pt : obs) {
        const RealVector& e = energies[pt.flux];
        const double r = (e[pt.level_j] - e[pt.level_i]) - pt.freq_ghz;
        sum += pt.weight * r * r;
    }
    return sum;
}

}  // namespace

void SpectroscopyPoint::validate() const {
    if (!std::isfinite(flux)) throw std::invalid_argument("SpectroscopyPoint: non-finite flux");
    if (level_i < 0 || level_j <= level_i || level_j > 6) {
        throw std::invalid_argument("SpectroscopyPoint: need 0 <= i < j <= 6");
    }
    if (!(std::isfinite(freq_ghz) && freq_ghz > 0.0)) {
        throw std::invalid_argument("SpectroscopyPoint: frequency must be positive");
    }
    if (!(std::isfinite(weight) && weight > 0.0)) {
        throw std::invalid_argument("SpectroscopyPoint: weight must be positive");
    }
}

double model_frequency(const CircuitParams& params, const SpectroscopyPoint& point, int dim) {
    params.validate();
    if (!std::isfinite(point.flux) || point.level_i < 0 || point.level_j <= point.level_i ||
        point.level_j > 6) {
        throw std::invalid_argument("model_frequency: need finite flux and 0 <= i < j <= 6");
    }
    FluxoniumOperators ops(params, dim);
    const Spectrum spec = solve_static(params, ExternalFlux(point.flux),
                                       FluxAllocation::Inductor, ops, point.level_j + 1);
    return spec.energies[point.level_j] - spec.energies[point.level_i];
}

FitResult fit_params(const std::vector<SpectroscopyPoint>& observations,
                     const CircuitParams& initial_guess, int dim, int max_iterations) {
    initial_guess.validate();
    for (const auto& pt : observations) pt.validate();
    if (observations.size() < 3) {
        throw std::invalid_argument("fit_params: need at least 3 observations");
    }
    std::vector<double> fluxes;
    for (const auto& pt : observations) fluxes.push_back(pt.flux);
    std::sort(fluxes.begin(), fluxes.end());
    if (std::abs(fluxes.back() - fluxes.front()) < 1e-12) {
        throw std::invalid_argument("fit_params: observations must span >= 2 flux values");
    }

    // Nelder-Mead over log-parameters with the standard coefficients.
    const double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;
    const double diameter_tol = 1e-6;
    const double objective_floor = 1e-22;  // an exact fit cannot be improved

    auto f = [&](const LogPoint& x) { return objective(observations, params_from_log(x), dim); };

    std::array<LogPoint, 4> pts;
    pts[0] = {std::log(initial_guess.e_c), std::log(initial_guess.e_j),
              std::log(initial_guess.e_l)};
    for (int i = 1; i < 4; ++i) {
        pts[i] = pts[0];
        pts[i][i - 1] += 0.05;
    }
    std::array<double, 4> fv;
    for (int i = 0; i < 4; ++i) fv[i] = f(pts[i]);

    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
    for (; iterations < max_iterations; ++iterations) {
        std::array<int, 4> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        {
            std::array<LogPoint, 4> ps;
            std::array<double, 4> fs;
            for (int i = 0; i < 4; ++i) {
                ps[i] = pts[order[i]];
                fs[i] = fv[order[i]];
            }
            pts = ps;
            fv = fs;
        }
        history.push_back(fv[0]);
        if (fv[0] < objective_floor || simplex_diameter(pts) < diameter_tol) {
            converged = true;
            break;
        }

        LogPoint centroid{};
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < 3; ++k) centroid[k] += pts[i][k] / 3.0;
        }
        auto blend = [&](double coeff) {
            LogPoint x;
            for (int k = 0; k < 3; ++k) x[k] = centroid[k] + coeff * (pts[3][k] - centroid[k]);
            return x;
        };

        const LogPoint xr = blend(-reflect);
        const double fr = f(xr);
        if (fr < fv[0]) {
            const LogPoint xe = blend(-reflect * expand);
            const double fe = f(xe);
            if (fe < fr) {
                pts[3] = xe;
                fv[3] = fe;
            } else {
                pts[3] = xr;
                fv[3] = fr;
            }
        } else if (fr < fv[2]) {
            pts[3] = xr;
            fv[3] = fr;
        } else {
            const bool outside = fr < fv[3];
            const LogPoint xc = blend(outside ? -contract : contract);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[3])) {
                pts[3] = xc;
                fv[3] = fc;
            } else {
                for (int i = 1; i < 4; ++i) {
                    for (int k = 0; k < 3; ++k) {
                        pts[i][k] = pts[0][k] + shrink * (pts[i][k] - pts[0][k]);
                    }
                    fv[i] = f(pts[i]);
                }
            }
        }
    }

    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });

    FitResult result;
    result.params = params_from_log(pts[order[0]]);
    result.residual_rms = std::sqrt(fv[order[0]] / double(observations.size()));
    result.iterations = iterations;
    result.converged = converged;
    result.best_history = std::move(history);
    return result;
}

std::vector<SpectroscopyPoint> load_observations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open observation file: " + path);

    auto strip = [](std::string s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
            s.pop_back();
        }
        size_t b = s.find_first_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b);
    };

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty observation file", 1);
    ++line_no;
    const std::string header = strip(line);
    const bool has_weight = header == "flux,level_i,level_j,freq_ghz,weight";
    if (!has_weight && header != "flux,level_i,level_j,freq_ghz") {
        throw ParseError("expected header 'flux,level_i,level_j,freq_ghz,weight' (weight "
                         "optional), got '" + header + "'",
                         line_no);
    }

    std::vector<SpectroscopyPoint> points;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = strip(line);
        if (s.empty()) continue;
        std::istringstream ss(s);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != (has_weight ? 5u : 4u)) {
            throw ParseError("expected " + std::to_string(has_weight ? 5 : 4) +
                             " comma-separated fields", line_no);
        }
        try {
            SpectroscopyPoint pt;
            pt.flux = std::stod(fields[0]);
            pt.level_i = std::stoi(fields[1]);
            pt.level_j = std::stoi(fields[2]);
            pt.freq_ghz = std::stod(fields[3]);
            pt.weight = has_weight ? std::stod(fields[4]) : 1.0;
            pt.validate();
            points.push_back(pt);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad observation: ") + e.what(), line_no);
        }
    }
    return points;
}

}  // namespace fluxquant

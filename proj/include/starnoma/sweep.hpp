#pragma once

// Experiment runners behind the CLI subcommands: the SNR sweep with its
// CSV/JSON writers, the gamma-fit report, the high-SNR slope report, and
// config validation. Runners return process exit codes: 0 success, 1
// invalid config/request, 2 SIC infeasible, 3 numerical failure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "analytic.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "montecarlo.hpp"
#include "scenario.hpp"

namespace starnoma {

enum class Method { ANALYTIC, HIGH_SNR, ORACLE, MC_GAMMA, MC_PHYSICAL };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::ANALYTIC: return "analytic";
        case Method::HIGH_SNR: return "highsnr";
        case Method::ORACLE: return "oracle";
        case Method::MC_GAMMA: return "mc-gamma";
        case Method::MC_PHYSICAL: return "mc-physical";
    }
    return "?";
}

inline Method method_from_name(const std::string& name) {
    if (name == "analytic") return Method::ANALYTIC;
    if (name == "highsnr") return Method::HIGH_SNR;
    if (name == "oracle") return Method::ORACLE;
    if (name == "mc-gamma") return Method::MC_GAMMA;
    if (name == "mc-physical") return Method::MC_PHYSICAL;
    throw ConfigError(
        "methods: unknown method '" + name +
        "' (expected analytic, highsnr, oracle, mc-gamma, mc-physical)");
}

struct SweepRequest {
    std::string config_path;  // empty = built-in defaults
    double snr_db_start = 60.0;
    double snr_db_stop = 160.0;
    double snr_db_step = 5.0;
    std::vector<Method> methods{Method::ANALYTIC};
    std::uint64_t mc_samples = 1000000;
    std::uint64_t seed = 12345;
    int quadrature_M = kDefaultQuadratureOrder;
    std::string output_path;  // empty = stdout
    enum class Format { CSV, JSON } output_format = Format::CSV;
};

struct SweepRow {
    double snr_db;
    std::string user;    // "near" / "far"
    std::string method;  // method_name()
    double rate_bpcu;
    double std_err;       // 0 for closed forms and oracle
    std::uint64_t n_samples;  // 0 for closed forms and oracle
    double k;             // resolved fit shape (k_raw)
    double theta;         // resolved fit scale
    int quadrature_M;     // 0 where no fixed-order rule is involved
    std::uint64_t seed;
};

namespace detail {

inline std::string fmt_g(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string csv_line(const SweepRow& r) {
    std::ostringstream out;
    out << fmt_g(r.snr_db, 10) << ',' << r.user << ',' << r.method << ','
        << fmt_g(r.rate_bpcu, 12) << ',' << fmt_g(r.std_err, 6) << ','
        << r.n_samples << ',' << fmt_g(r.k, 10) << ',' << fmt_g(r.theta, 10)
        << ',' << r.quadrature_M << ',' << r.seed;
    return out.str();
}

inline std::string render_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "snr_db,user,method,rate_bpcu,std_err,n_samples,k,theta,M,seed\n";
    for (const auto& r : rows) {
        out += csv_line(r);
        out += '\n';
    }
    return out;
}

inline std::string render_json(const std::vector<SweepRow>& rows) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["snr_db"] = r.snr_db;
        row["user"] = r.user;
        row["method"] = r.method;
        row["rate_bpcu"] = r.rate_bpcu;
        row["std_err"] = r.std_err;
        row["n_samples"] = r.n_samples;
        row["k"] = r.k;
        row["theta"] = r.theta;
        row["M"] = r.quadrature_M;
        row["seed"] = r.seed;
        doc.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

inline void write_output(const std::string& body, const std::string& path) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("output_path not writable: " + path);
    }
    out << body;
}

// Methods in canonical output order, deduplicated.
inline std::vector<Method> canonical_methods(const std::vector<Method>& in) {
    std::vector<Method> order{Method::ANALYTIC, Method::HIGH_SNR,
                              Method::ORACLE, Method::MC_GAMMA,
                              Method::MC_PHYSICAL};
    std::vector<Method> out;
    for (Method m : order) {
        if (std::find(in.begin(), in.end(), m) != in.end()) out.push_back(m);
    }
    return out;
}

inline bool needs_star_geometry(Method m) {
    return m == Method::ANALYTIC || m == Method::HIGH_SNR ||
           m == Method::ORACLE || m == Method::MC_GAMMA;
}

}  // namespace detail

// The SNR grid of a request: start, start+step, ..., up to and including
// stop (within half a step of floating slack).
inline std::vector<double> snr_grid(const SweepRequest& req) {
    std::vector<double> grid;
    for (double s = req.snr_db_start; s <= req.snr_db_stop + 1e-9 * req.snr_db_step;
         s += req.snr_db_step) {
        grid.push_back(s);
    }
    return grid;
}

// Runs the full sweep and writes the table; returns a process exit code.
// Row order: SNR ascending, then method in canonical order, then near
// before far.
inline int run_sweep(const SweepRequest& req) {
    try {
        if (req.methods.empty()) {
            throw ConfigError("methods: at least one method is required");
        }
        if (!(req.snr_db_start < req.snr_db_stop)) {
            throw ConfigError("snr_db: start must be below stop");
        }
        if (!(req.snr_db_step > 0.0)) {
            throw ConfigError("snr_db: step must be > 0");
        }
        if (req.quadrature_M < 1) {
            throw ConfigError("quadrature_M must be >= 1");
        }
        const std::vector<Method> methods = detail::canonical_methods(req.methods);
        const bool has_mc =
            std::find(methods.begin(), methods.end(), Method::MC_GAMMA) !=
                methods.end() ||
            std::find(methods.begin(), methods.end(), Method::MC_PHYSICAL) !=
                methods.end();
        if (has_mc && req.mc_samples < 10000) {
            throw ConfigError("mc_samples must be >= 10000 for mc methods");
        }

        const SystemConfig base = load_config(req.config_path);
        if (base.scenario_kind != ScenarioKind::STAR) {
            for (Method m : methods) {
                if (detail::needs_star_geometry(m)) {
                    throw ConfigError(
                        std::string("methods: '") + method_name(m) +
                        "' assumes the centered STAR geometry; only "
                        "mc-physical applies to scenario_kind=conventional_ris");
                }
            }
        }
        const GammaFit fit = resolve_fit(base);

        std::vector<SweepRow> rows;
        for (double snr_db : snr_grid(req)) {
            SystemConfig cfg = base;
            cfg.power.pt_dbm = cfg.power.noise_dbm + snr_db;
            for (Method m : methods) {
                SweepRow near_row{snr_db, "near", method_name(m), 0.0, 0.0, 0,
                                  fit.k_raw, fit.theta, 0, req.seed};
                SweepRow far_row = near_row;
                far_row.user = "far";
                switch (m) {
                    case Method::ANALYTIC: {
                        near_row.rate_bpcu =
                            ergodic_rate_near(cfg, fit, req.quadrature_M).value;
                        far_row.rate_bpcu =
                            ergodic_rate_far(cfg, fit, req.quadrature_M).value;
                        near_row.quadrature_M = far_row.quadrature_M =
                            req.quadrature_M;
                        break;
                    }
                    case Method::HIGH_SNR: {
                        near_row.rate_bpcu =
                            ergodic_rate_near_high_snr(cfg, fit, req.quadrature_M)
                                .value;
                        far_row.rate_bpcu =
                            ergodic_rate_far_high_snr(cfg, fit, req.quadrature_M)
                                .value;
                        near_row.quadrature_M = far_row.quadrature_M =
                            req.quadrature_M;
                        break;
                    }
                    case Method::ORACLE: {
                        near_row.rate_bpcu = oracle_rate_near(cfg, fit).value;
                        far_row.rate_bpcu = oracle_rate_far(cfg, fit).value;
                        break;
                    }
                    case Method::MC_GAMMA:
                    case Method::MC_PHYSICAL: {
                        const ChannelModel model = m == Method::MC_GAMMA
                                                       ? ChannelModel::GAMMA_FIT
                                                       : ChannelModel::PHYSICAL_IID;
                        const auto est = estimate_rates(cfg, fit, model,
                                                        req.mc_samples, req.seed);
                        near_row.rate_bpcu = est.first.mean;
                        near_row.std_err = est.first.std_error;
                        near_row.n_samples = est.first.n_samples;
                        far_row.rate_bpcu = est.second.mean;
                        far_row.std_err = est.second.std_error;
                        far_row.n_samples = est.second.n_samples;
                        break;
                    }
                }
                rows.push_back(near_row);
                rows.push_back(far_row);
            }
        }

        const std::string body = req.output_format == SweepRequest::Format::CSV
                                     ? detail::render_csv(rows)
                                     : detail::render_json(rows);
        detail::write_output(body, req.output_path);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const SicInfeasibleError& e) {
        std::cerr << "SIC infeasible: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// Prints the closed-form gamma fit for (m, omega, N) and, when the resolved
// config pins an override tuple, the override alongside with a warning when
// the two differ by more than 5%.
inline int run_fit(double m, double omega, int n_elements,
                   const std::optional<GammaOverride>& override_tuple,
                   std::ostream& out = std::cout) {
    try {
        FadingParams fading{m, omega};
        const GammaFit fit = fit_gamma_eq2(fading, n_elements);
        out << "k_raw " << detail::fmt_g(fit.k_raw, 10) << "\n";
        out << "k_int " << fit.k_int << "\n";
        out << "theta " << detail::fmt_g(fit.theta, 10) << "\n";
        if (override_tuple) {
            out << "override_k " << detail::fmt_g(override_tuple->k, 10) << "\n";
            out << "override_theta " << detail::fmt_g(override_tuple->theta, 10)
                << "\n";
            const double dk =
                std::fabs(fit.k_raw - override_tuple->k) / fit.k_raw;
            const double dt =
                std::fabs(fit.theta - override_tuple->theta) / fit.theta;
            if (dk > 0.05) {
                out << "warning: moment-fit k_raw "
                    << detail::fmt_g(fit.k_raw, 6) << " differs from override k "
                    << detail::fmt_g(override_tuple->k, 6) << " by more than 5%\n";
            }
            if (dt > 0.05) {
                out << "warning: moment-fit theta "
                    << detail::fmt_g(fit.theta, 6)
                    << " differs from override theta "
                    << detail::fmt_g(override_tuple->theta, 6)
                    << " by more than 5%\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
}

// Prints the closed-form high-SNR slopes measured between 140 and 150 dB
// plus the far-user interference ceiling. synthetic=true swaps in the exact
// rate(rho) = log2(rho) hook, a self-test of the slope estimator.
inline int run_slopes(const std::string& config_path, int quadrature_M,
                      bool synthetic = false, std::ostream& out = std::cout) {
    try {
        const SystemConfig base = load_config(config_path);
        const GammaFit fit = resolve_fit(base);
        const double rho1 = std::pow(10.0, 14.0);  // 140 dB
        const double rho2 = std::pow(10.0, 15.0);  // 150 dB

        auto rate_at = [&](auto&& fn) {
            return [&, fn](double rho) {
                SystemConfig cfg = base;
                cfg.power.pt_dbm =
                    cfg.power.noise_dbm + 10.0 * std::log10(rho);
                return fn(cfg).value;
            };
        };

        double near_slope, far_slope;
        if (synthetic) {
            auto log_rate = [](double rho) { return std::log2(rho); };
            near_slope = far_slope = high_snr_slope(log_rate, rho1, rho2);
        } else {
            near_slope = high_snr_slope(
                rate_at([&](const SystemConfig& c) {
                    return ergodic_rate_near(c, fit, quadrature_M);
                }),
                rho1, rho2);
            far_slope = high_snr_slope(
                rate_at([&](const SystemConfig& c) {
                    return ergodic_rate_far(c, fit, quadrature_M);
                }),
                rho1, rho2);
        }
        const double ceiling =
            std::log2(1.0 + base.noma.a_far / base.noma.a_near);
        out << "near_slope " << detail::fmt_g(near_slope, 6) << "\n";
        out << "far_slope " << detail::fmt_g(far_slope, 6) << "\n";
        out << "far_ceiling " << detail::fmt_g(ceiling, 6) << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const SicInfeasibleError& e) {
        std::cerr << "SIC infeasible: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// Validates a config file; prints OK or the offending field.
inline int run_validate(const std::string& config_path,
                        std::ostream& out = std::cout) {
    try {
        load_config(config_path);
        out << "OK\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace starnoma

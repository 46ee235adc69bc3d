#pragma once

// System configuration: geometry, NOMA power split, transmit/noise power,
// fading parameters, plus path loss and the per-realization SINR triplet.
// All internal math is in linear units; dB conversions live here and only
// here. Configs are immutable after validate() and safe to share across
// threads.

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "errors.hpp"

namespace starnoma {

using Vec3 = std::array<double, 3>;

enum class ScenarioKind {
    STAR,              // surface above the disk center; near user reflects,
                       // far user refracts (beta_rfl / beta_rfr split)
    CONVENTIONAL_RIS,  // offset reflect-only surface; both users get beta_rfl
};

struct GeometryConfig {
    Vec3 bs_position{400.0, 0.0, 0.0};
    Vec3 ris_position{0.0, 0.0, 30.0};
    double r1 = 100.0;   // near-user disk radius, meters
    double r2 = 200.0;   // far-user annulus outer radius, meters
    double alpha = 2.6;  // path-loss exponent

    // Surface height above the user plane; derived, never stored stale.
    double h() const { return ris_position[2]; }

    // BS-to-surface distance; derived, never stored stale.
    double d_br() const {
        const double dx = bs_position[0] - ris_position[0];
        const double dy = bs_position[1] - ris_position[1];
        const double dz = bs_position[2] - ris_position[2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }
};

struct NomaConfig {
    double a_near = 0.3;        // near-user power fraction
    double a_far = 0.7;         // far-user power fraction
    double gamma_th_sic = 1.0;  // linear SINR threshold for SIC
    double beta_rfl = 0.5;      // reflection-side energy fraction
    double beta_rfr = 0.5;      // refraction-side energy fraction
};

struct PowerConfig {
    double pt_dbm = 10.0;
    double noise_dbm = -90.0;

    // Linear transmit SNR Pt/sigma^2; derived, never stored.
    double rho() const { return std::pow(10.0, (pt_dbm - noise_dbm) / 10.0); }
};

struct FadingParams {
    double m = 2.0;      // Nakagami shape
    double omega = 1.0;  // Nakagami spread E[amp^2]
};

// Optional (k, theta) pair that replaces the moment-matched gamma fit when
// present, so figure-style shape/scale tuples can be pinned directly.
struct GammaOverride {
    double k = 0.0;
    double theta = 0.0;
};

struct SystemConfig {
    ScenarioKind scenario_kind = ScenarioKind::STAR;
    GeometryConfig geometry;
    NomaConfig noma;
    PowerConfig power;
    FadingParams fading;
    int n_elements = 30;
    std::optional<GammaOverride> gamma_override;
};

// Thermal noise power in dBm: -170 dBm/Hz floor plus bandwidth and noise
// figure.
inline double noise_power_dbm(double bw_hz, double nf_db) {
    if (!(bw_hz > 0.0)) {
        throw std::domain_error("noise_power_dbm: bw_hz must be > 0 (got " +
                                std::to_string(bw_hz) + ")");
    }
    return -170.0 + 10.0 * std::log10(bw_hz) + nf_db;
}

// Cascaded-link power path loss: (d_horiz^2 + H^2)^(-alpha/2) * d_BR^(-alpha),
// the user-to-surface slant leg times the BS-to-surface leg.
inline double path_loss(double d_horiz, double H, double d_BR, double alpha) {
    return std::pow(d_horiz * d_horiz + H * H, -alpha / 2.0) *
           std::pow(d_BR, -alpha);
}

struct SinrTriplet {
    double gamma_sic;   // SINR of the far-user message at the near user
    double gamma_near;  // post-SIC SNR of the near user's own message
    double gamma_far;   // SINR at the far user
};

namespace detail {

// SINR algebra shared by the analytic scenario (radial distances) and the
// simulator (which computes its own horizontal distances for the offset
// surface): snr_* = rho * path_loss * channel_gain.
inline SinrTriplet sinr_from_channel_snr(double snr_near, double snr_far,
                                         const NomaConfig& noma) {
    SinrTriplet out;
    out.gamma_near = noma.a_near * snr_near;
    out.gamma_sic = noma.a_far * snr_near / (noma.a_near * snr_near + 1.0);
    out.gamma_far = noma.a_far * snr_far / (noma.a_near * snr_far + 1.0);
    return out;
}

}  // namespace detail

// Per-realization SINRs for a user pair at radial distances d_near/d_far
// from the disk center with channel power gains gain_near/gain_far;
// distances are horizontal offsets from the surface axis.
inline SinrTriplet sinr_triplet(double gain_near, double gain_far,
                                double d_near, double d_far,
                                const SystemConfig& cfg) {
    const double rho = cfg.power.rho();
    const double H = cfg.geometry.h();
    const double d_br = cfg.geometry.d_br();
    const double snr_near =
        rho * path_loss(d_near, H, d_br, cfg.geometry.alpha) * gain_near;
    const double snr_far =
        rho * path_loss(d_far, H, d_br, cfg.geometry.alpha) * gain_far;
    return detail::sinr_from_channel_snr(snr_near, snr_far, cfg.noma);
}

// Rejects any type-invariant violation with a message naming the offending
// field. SIC feasibility is intentionally not checked here: it is a property
// of the near-user closed forms and surfaces where those are evaluated.
inline void validate(const SystemConfig& cfg) {
    const auto& g = cfg.geometry;
    if (!(g.r1 > 0.0)) throw ConfigError("geometry.r1 must be > 0");
    if (!(g.r2 > g.r1)) throw ConfigError("geometry.r2 must exceed geometry.r1");
    if (!(g.alpha >= 2.0)) throw ConfigError("geometry.alpha must be >= 2");
    if (!(g.h() > 0.0)) {
        throw ConfigError("geometry.ris_position: height (z) must be > 0");
    }
    if (!(g.d_br() > 0.0)) {
        throw ConfigError("geometry.bs_position must differ from ris_position");
    }

    const auto& n = cfg.noma;
    if (!(n.a_near > 0.0 && n.a_near < 1.0)) {
        throw ConfigError("noma.a_near must lie in (0,1)");
    }
    if (!(n.a_far > 0.0 && n.a_far < 1.0)) {
        throw ConfigError("noma.a_far must lie in (0,1)");
    }
    if (std::fabs(n.a_near + n.a_far - 1.0) > 1e-9) {
        throw ConfigError("noma.a_near + noma.a_far must equal 1");
    }
    if (!(n.a_near < n.a_far)) {
        throw ConfigError("noma.a_near must be smaller than noma.a_far");
    }
    if (!(n.gamma_th_sic > 0.0)) {
        throw ConfigError("noma.gamma_th_sic must be > 0");
    }
    // beta_rfl = 1 is legitimate (reflect-only conventional surface), so the
    // bounds here are closed.
    if (!(n.beta_rfl >= 0.0 && n.beta_rfl <= 1.0)) {
        throw ConfigError("noma.beta_rfl must lie in [0,1]");
    }
    if (!(n.beta_rfr >= 0.0 && n.beta_rfr <= 1.0)) {
        throw ConfigError("noma.beta_rfr must lie in [0,1]");
    }
    if (std::fabs(n.beta_rfl + n.beta_rfr - 1.0) > 1e-9) {
        throw ConfigError("noma.beta_rfl + noma.beta_rfr must equal 1");
    }

    if (!std::isfinite(cfg.power.pt_dbm)) {
        throw ConfigError("power.pt_dbm must be finite");
    }
    if (!std::isfinite(cfg.power.noise_dbm)) {
        throw ConfigError("power.noise_dbm must be finite");
    }

    if (!(cfg.fading.m >= 0.5)) throw ConfigError("fading.m must be >= 0.5");
    if (!(cfg.fading.omega > 0.0)) throw ConfigError("fading.omega must be > 0");

    if (cfg.n_elements < 1) throw ConfigError("elements.n must be >= 1");

    if (cfg.gamma_override) {
        if (!(cfg.gamma_override->k > 0.0)) {
            throw ConfigError("gamma_override.k must be > 0");
        }
        if (!(cfg.gamma_override->theta > 0.0)) {
            throw ConfigError("gamma_override.theta must be > 0");
        }
    }
}

}  // namespace starnoma

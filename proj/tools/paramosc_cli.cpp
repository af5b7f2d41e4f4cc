// Command-line front end: emits the CSV data behind the phase-space,
// adiabaticity and transition-probability figures, and runs the full
// cross-check battery (`verify`).
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paramosc/paramosc.hpp"

namespace pm = paramosc;
using ordered_json = nlohmann::ordered_json;

namespace {

struct ScheduleConfig {
    std::string schedule = "cubic";  // "cubic", "constant", or a JSON file path
    double t0 = 0.0;
    double tf = 0.5;
    double omega0 = 2.0;
    double omegaf = 4.0;
};

struct RunConfig {
    ScheduleConfig sched;
    std::string variant = "tt";
    double rel_tol = 1e-10;
    std::size_t samples = 1000;
    std::size_t n_max = 80;
    std::string out;
    double table_at = -1.0;   // emit a full P-table at this time if >= t0
    std::string table_out;    // JSON path; a .csv twin is written next to it
};

pm::FrequencySchedule schedule_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pm::DomainError("cannot open schedule file: " + path);
    ordered_json j = ordered_json::parse(in);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant")
        return pm::make_constant_schedule(j.at("t0").get<double>(), j.at("tf").get<double>(),
                                          j.at("omega0").get<double>());
    if (kind == "cubic")
        return pm::make_cubic_schedule(j.at("t0").get<double>(), j.at("tf").get<double>(),
                                       j.at("omega0").get<double>(),
                                       j.at("omegaf").get<double>());
    if (kind == "tabulated") {
        std::vector<double> ts, ws;
        for (const auto& row : j.at("samples")) {
            ts.push_back(row.at(0).get<double>());
            ws.push_back(row.at(1).get<double>());
        }
        return pm::make_tabulated_schedule(std::move(ts), std::move(ws));
    }
    throw pm::DomainError("unknown schedule kind: " + kind);
}

ordered_json schedule_to_json(const pm::FrequencySchedule& s) {
    ordered_json j;
    switch (s.kind()) {
        case pm::ScheduleKind::constant:
            j["kind"] = "constant";
            j["t0"] = s.t0();
            j["tf"] = s.tf();
            j["omega0"] = s.omega0();
            break;
        case pm::ScheduleKind::cubic:
            j["kind"] = "cubic";
            j["t0"] = s.t0();
            j["tf"] = s.tf();
            j["omega0"] = s.omega0();
            j["omegaf"] = s.omegaf();
            break;
        case pm::ScheduleKind::tabulated: {
            j["kind"] = "tabulated";
            j["t0"] = s.t0();
            j["tf"] = s.tf();
            ordered_json samples = ordered_json::array();
            for (const auto& [t, w] : s.samples()) samples.push_back({t, w});
            j["samples"] = std::move(samples);
            break;
        }
    }
    return j;
}

pm::FrequencySchedule build_schedule(const ScheduleConfig& cfg) {
    if (cfg.schedule == "cubic")
        return pm::make_cubic_schedule(cfg.t0, cfg.tf, cfg.omega0, cfg.omegaf);
    if (cfg.schedule == "constant")
        return pm::make_constant_schedule(cfg.t0, cfg.tf, cfg.omega0);
    return schedule_from_json_file(cfg.schedule);
}

pm::OscillatorVariant parse_variant(const std::string& v) {
    if (v == "tt") return pm::OscillatorVariant::tt;
    if (v == "adiabatic") return pm::OscillatorVariant::adiabatic;
    throw pm::DomainError("variant must be 'tt' or 'adiabatic'");
}

void write_metadata(const std::string& out_path, const std::string& command,
                    const pm::FrequencySchedule& s, const RunConfig& cfg,
                    const ordered_json& residuals) {
    ordered_json meta;
    meta["command"] = command;
    meta["schedule"] = schedule_to_json(s);
    meta["variant"] = cfg.variant;
    meta["rel_tol"] = cfg.rel_tol;
    meta["samples"] = cfg.samples;
    meta["residuals"] = residuals;
    meta["output"] = out_path;
    std::ofstream out(out_path + ".meta.json");
    if (!out) throw pm::DomainError("cannot open metadata file: " + out_path + ".meta.json");
    out << meta.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

int cmd_trajectory(const RunConfig& cfg) {
    const auto s = build_schedule(cfg.sched);
    const auto variant = parse_variant(cfg.variant);
    const auto traj = pm::integrate_cpo(s, variant, cfg.rel_tol, cfg.samples);

    pm::CsvWriter csv(cfg.out,
                      {"t", "mu", "mu_dot", "nu", "nu_dot", "wronskian", "e_mu", "e_nu"});
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < traj.times().size(); ++i) {
        const double t = traj.times()[i];
        const double w =
            traj.mu_dot()[i] * traj.nu()[i] - traj.mu()[i] * traj.nu_dot()[i];
        double e_mu = nan, e_nu = nan;
        if (variant == pm::OscillatorVariant::adiabatic ||
            pm::effective_frequencies(s, t).big_omega_sq > 0.0) {
            const auto ep = pm::energies(traj, s, t);
            e_mu = ep.e_mu;
            e_nu = ep.e_nu;
        }
        csv.row({t, traj.mu()[i], traj.mu_dot()[i], traj.nu()[i], traj.nu_dot()[i], w, e_mu,
                 e_nu});
    }
    ordered_json residuals;
    residuals["wronskian_max_drift"] = traj.wronskian_max_drift();
    write_metadata(cfg.out, "trajectory", s, cfg, residuals);
    return 0;
}

int cmd_qfactor(const RunConfig& cfg) {
    const auto s = build_schedule(cfg.sched);
    const auto tt = pm::integrate_cpo(s, pm::OscillatorVariant::tt, cfg.rel_tol, cfg.samples);
    const auto ad =
        pm::integrate_cpo(s, pm::OscillatorVariant::adiabatic, cfg.rel_tol, cfg.samples);

    pm::CsvWriter csv(cfg.out, {"t", "q_tt", "q_star", "e_mu_over_Omega", "e_nu_over_Omega",
                                "E_mu_over_omega", "E_nu_over_omega", "defined"});
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < tt.times().size(); ++i) {
        const double t = tt.times()[i];
        const bool defined = pm::effective_frequencies(s, t).big_omega_sq > 0.0;
        double q_tt = nan, j_mu = nan, j_nu = nan;
        if (defined) {
            q_tt = pm::q_tt_general(tt, s, t);
            const auto ep = pm::energies(tt, s, t);
            j_mu = ep.j_mu;
            j_nu = ep.j_nu;
        }
        const auto ep_ad = pm::energies(ad, s, t);
        csv.row({t, q_tt, pm::q_husimi(ad, s, t), j_mu, j_nu, ep_ad.j_mu, ep_ad.j_nu,
                 static_cast<double>(defined)});
    }
    ordered_json residuals;
    residuals["wronskian_max_drift_tt"] = tt.wronskian_max_drift();
    residuals["wronskian_max_drift_adiabatic"] = ad.wronskian_max_drift();
    write_metadata(cfg.out, "qfactor", s, cfg, residuals);
    return 0;
}

int cmd_probabilities(const RunConfig& cfg) {
    const auto s = build_schedule(cfg.sched);
    const auto ad =
        pm::integrate_cpo(s, pm::OscillatorVariant::adiabatic, cfg.rel_tol, cfg.samples);

    // P^{0,0} = sqrt(2/(Q+1)) and P^{1,1} = (2/(Q+1))^(3/2), with Q^TT for the
    // driven oscillator and Husimi's Q* for the plain one.
    const auto p00 = [](double q) { return std::sqrt(2.0 / (q + 1.0)); };
    const auto p11 = [](double q) { return std::pow(2.0 / (q + 1.0), 1.5); };

    pm::CsvWriter csv(cfg.out, {"t", "p00_tt", "p11_tt", "p00_ad", "p11_ad", "defined"});
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < ad.times().size(); ++i) {
        const double t = ad.times()[i];
        const bool defined = pm::effective_frequencies(s, t).big_omega_sq > 0.0;
        double p00_tt = nan, p11_tt = nan;
        if (defined) {
            const double q = pm::q_tt_simple(s, t);
            p00_tt = p00(q);
            p11_tt = p11(q);
        }
        const double q_star = pm::q_husimi(ad, s, t);
        csv.row({t, p00_tt, p11_tt, p00(q_star), p11(q_star),
                 static_cast<double>(defined)});
    }
    if (!cfg.table_out.empty()) {
        const double t = (cfg.table_at >= s.t0()) ? cfg.table_at : s.tf();
        const auto qp = pm::QParameter::from_value(pm::q_tt_simple(s, t));
        const auto table = pm::probability_table(qp, cfg.n_max);
        std::ofstream jout(cfg.table_out);
        if (!jout) throw pm::DomainError("cannot open table file: " + cfg.table_out);
        jout << pm::transition_table_to_json(table);
        std::string csv_path = cfg.table_out;
        if (const auto pos = csv_path.rfind(".json"); pos != std::string::npos)
            csv_path.resize(pos);
        pm::write_transition_csv(table, csv_path + ".csv");
    }

    ordered_json residuals;
    residuals["wronskian_max_drift_adiabatic"] = ad.wronskian_max_drift();
    write_metadata(cfg.out, "probabilities", s, cfg, residuals);
    return 0;
}

int cmd_figures(const std::string& out_dir, double rel_tol, std::size_t samples) {
    std::filesystem::create_directories(out_dir);
    const auto run = [&](const std::string& name, RunConfig cfg, int (*fn)(const RunConfig&)) {
        cfg.rel_tol = rel_tol;
        cfg.samples = samples;
        cfg.out = out_dir + "/" + name;
        if (const int rc = fn(cfg); rc != 0) throw pm::IntegrationError("command failed");
    };
    for (const double tf : {0.2, 0.5, 2.0}) {
        const std::string tag = "tf" + pm::format_double(tf);
        RunConfig base;
        base.sched.tf = tf;
        for (const char* variant : {"tt", "adiabatic"}) {
            RunConfig cfg = base;
            cfg.variant = variant;
            run("trajectory_" + std::string(variant) + "_" + tag + ".csv", cfg,
                cmd_trajectory);
        }
        run("qfactor_" + tag + ".csv", base, cmd_qfactor);
        run("probabilities_" + tag + ".csv", base, cmd_probabilities);
    }
    std::cout << "wrote figure data for tf in {0.2, 0.5, 2.0} to " << out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    double residual;
    double bound;
    bool pass;
};

class Battery {
  public:
    void add(const std::string& name, double residual, double bound) {
        results_.push_back({name, residual, bound, residual < bound});
    }

    int report() const {
        bool all_pass = true;
        for (const auto& r : results_) {
            std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
                      << "  residual=" << pm::format_double(r.residual)
                      << "  bound=" << pm::format_double(r.bound) << "\n";
            all_pass = all_pass && r.pass;
        }
        std::cout << (all_pass ? "verify: all checks passed\n"
                               : "verify: at least one check FAILED\n");
        return all_pass ? 0 : 1;
    }

    ordered_json to_json() const {
        ordered_json j = ordered_json::array();
        for (const auto& r : results_)
            j.push_back({{"name", r.name},
                         {"residual", r.residual},
                         {"bound", r.bound},
                         {"pass", r.pass}});
        return j;
    }

  private:
    std::vector<CheckResult> results_;
};

int cmd_verify(const RunConfig& cfg, bool negative_control) {
    Battery battery;
    const double ode_bound = std::max(1e-7, 1000.0 * cfg.rel_tol);
    const double drift_bound = 100.0 * cfg.rel_tol;

    const std::vector<double> tfs{0.2, 0.5, 2.0};
    std::vector<pm::FrequencySchedule> scheds;
    for (double tf : tfs) scheds.push_back(pm::make_cubic_schedule(0.0, tf, 2.0, 4.0));

    // schedule boundary conditions
    double worst_bc = 0.0;
    for (const auto& s : scheds)
        worst_bc = std::max({worst_bc, std::abs(s.omega_dot(s.t0())),
                             std::abs(s.omega_dot(s.tf()))});
    battery.add("schedule-boundary-slopes", worst_bc, 1e-14);

    // integrate everything once
    std::vector<pm::CpoTrajectory> tts, ads;
    double worst_drift = 0.0;
    for (const auto& s : scheds) {
        tts.push_back(pm::integrate_cpo(s, pm::OscillatorVariant::tt, cfg.rel_tol, 1000));
        ads.push_back(
            pm::integrate_cpo(s, pm::OscillatorVariant::adiabatic, cfg.rel_tol, 1000));
        worst_drift = std::max({worst_drift, tts.back().wronskian_max_drift(),
                                ads.back().wronskian_max_drift()});
    }
    battery.add("wronskian-drift", worst_drift, drift_bound);

    // closed form vs ODE
    double worst_cf = 0.0;
    for (std::size_t i = 0; i < scheds.size(); ++i) {
        const auto& s = scheds[i];
        const auto& traj = tts[i];
        for (std::size_t j = 0; j < traj.times().size(); j += 3) {
            const double t = traj.times()[j];
            worst_cf = std::max(worst_cf, std::abs(pm::mu_closed(s, t) - traj.mu()[j]));
            worst_cf = std::max(worst_cf, std::abs(pm::nu_closed(s, t) - traj.nu()[j]));
        }
    }
    battery.add("closed-form-vs-ode", worst_cf, ode_bound);

    // three q forms agree at interior times (outside any undefined window)
    double worst_q = 0.0;
    for (std::size_t i = 0; i < scheds.size(); ++i) {
        const auto& s = scheds[i];
        for (int j = 1; j < 100; ++j) {
            const double t = tfs[i] * j / 100.0;
            if (!(pm::effective_frequencies(s, t).big_omega_sq > 0.0)) continue;
            const double qa = negative_control ? pm::q_husimi(ads[i], s, t)
                                               : pm::q_tt_general(tts[i], s, t);
            const double qb = pm::q_tt_simple(s, t);
            const double qc = pm::q_tt_rho_form(s, t);
            worst_q = std::max({worst_q, std::abs(qa - qb), std::abs(qb - qc),
                                std::abs(qa - qc)});
        }
    }
    battery.add(negative_control ? "q-forms-agreement (negative control: Q* vs Q^TT)"
                                 : "q-forms-agreement",
                worst_q, ode_bound);

    // endpoint energies and invariant ratios
    double worst_e = 0.0, worst_j = 0.0, worst_q1 = 0.0;
    for (std::size_t i = 0; i < scheds.size(); ++i) {
        const auto& s = scheds[i];
        const auto ep0 = pm::energies(tts[i], s, 0.0);
        const auto epf = pm::energies(tts[i], s, tfs[i]);
        worst_e = std::max({worst_e, std::abs(ep0.e_mu - 0.5), std::abs(ep0.e_nu - 2.0),
                            std::abs(epf.e_mu - 1.0), std::abs(epf.e_nu - 4.0)});
        worst_j = std::max({worst_j, std::abs(ep0.j_mu - 0.25), std::abs(ep0.j_nu - 1.0),
                            std::abs(epf.j_mu - 0.25), std::abs(epf.j_nu - 1.0)});
        worst_q1 = std::max({worst_q1, std::abs(pm::q_tt_general(tts[i], s, 0.0) - 1.0),
                             std::abs(pm::q_tt_general(tts[i], s, tfs[i]) - 1.0)});
    }
    battery.add("endpoint-energies", worst_e, std::max(1e-6, 10.0 * ode_bound));
    battery.add("endpoint-invariant-ratios", worst_j, std::max(1e-6, 10.0 * ode_bound));
    battery.add("q-tt-endpoint-unity", worst_q1, std::max(1e-6, 10.0 * ode_bound));

    // Ermakov-Lewis invariant along tt trajectories
    double worst_el = 0.0;
    for (std::size_t i = 0; i < scheds.size(); ++i) {
        const auto rho = pm::inverse_sqrt_omega(scheds[i]);
        for (int j = 0; j <= 20; ++j) {
            const double t = tfs[i] * j / 20.0;
            worst_el = std::max(
                {worst_el,
                 std::abs(pm::ermakov_lewis_invariant(tts[i], scheds[i], rho,
                                                      pm::InvariantBranch::mu, t) -
                          0.5),
                 std::abs(pm::ermakov_lewis_invariant(tts[i], scheds[i], rho,
                                                      pm::InvariantBranch::nu, t) -
                          0.5)});
        }
    }
    battery.add("ermakov-lewis-invariant", worst_el, ode_bound);

    // Ermakov equation residual for rho = 1/sqrt(omega)
    double worst_res = 0.0;
    for (std::size_t i = 0; i < scheds.size(); ++i) {
        const auto rho = pm::inverse_sqrt_omega(scheds[i]);
        for (int j = 2; j <= 18; ++j)
            worst_res = std::max(worst_res, std::abs(pm::ermakov_residual(
                                                scheds[i], rho.value, tfs[i] * j / 20.0)));
    }
    battery.add("ermakov-equation-residual", worst_res, 1e-4);

    // chi modulus identity at interior times of the tf=0.5 ramp
    {
        const auto& s = scheds[1];
        const auto& tt = tts[1];
        std::mt19937 rng(811);
        std::uniform_real_distribution<double> dist(0.0, tfs[1]);
        double worst = 0.0;
        for (int j = 0; j < 30; ++j) {
            const double t = dist(rng);
            const auto [cp, cm] = pm::chi_pm(tt, s, t);
            const auto ep = pm::energies(tt, s, t);
            const double big0 = s.omega0();
            const double big = std::sqrt(pm::effective_frequencies(s, t).big_omega_sq);
            const double q = big0 * ep.e_mu / big + ep.e_nu / (big0 * big);
            const double scale = 2.0 * big * big0;
            worst = std::max(
                {worst, std::abs(std::norm(cp) - scale * (q - 1.0)) / scale,
                 std::abs(std::norm(cm) - scale * (q + 1.0)) / (scale * (q + 1.0))});
        }
        battery.add("chi-modulus-identity", worst, std::max(1e-8, 100.0 * cfg.rel_tol));
    }

    // probability structure (feasible truncation set; see docs for Q=3 tails)
    {
        double worst_identity = 0.0;
        const auto id_table = pm::probability_table(pm::QParameter::from_value(1.0), 40);
        for (std::size_t m = 0; m <= 40; ++m)
            for (std::size_t n = 0; n <= 40; ++n)
                worst_identity = std::max(
                    worst_identity, std::abs(id_table.prob(m, n) - (m == n ? 1.0 : 0.0)));
        battery.add("probability-identity-at-q1", worst_identity, 1e-10);

        double worst_parity = 0.0, worst_sym = 0.0, worst_col = 0.0;
        for (double q : {1.0, 1.5, 2.0}) {
            const auto table =
                pm::probability_table(pm::QParameter::from_value(q), cfg.n_max);
            for (std::size_t m = 0; m <= cfg.n_max; ++m)
                for (std::size_t n = 0; n <= cfg.n_max; ++n) {
                    if ((m + n) % 2 == 1)
                        worst_parity = std::max(worst_parity, std::abs(table.prob(m, n)));
                    worst_sym = std::max(worst_sym,
                                         std::abs(table.prob(m, n) - table.prob(n, m)));
                }
            for (std::size_t n = 0; n <= std::min<std::size_t>(9, cfg.n_max); ++n)
                worst_col = std::max(worst_col, std::abs(table.column_sum(n) - 1.0));
        }
        battery.add("probability-parity-exact-zero", worst_parity,
                    std::numeric_limits<double>::min());
        battery.add("probability-symmetry-exact", worst_sym,
                    std::numeric_limits<double>::min());
        battery.add("probability-column-sums", worst_col, 1e-8);
    }

    // generating function vs truncated double series
    {
        std::mt19937 rng(271828);
        std::uniform_real_distribution<double> dist(-0.7, 0.7);
        double worst = 0.0;
        for (double q : {1.0, 1.5, 2.0, 5.0}) {
            const auto qp = pm::QParameter::from_value(q);
            const auto table = pm::probability_table(qp, 60);
            for (int trial = 0; trial < 5; ++trial) {
                const double u = dist(rng), v = dist(rng);
                double series = 0.0;
                for (std::size_t n = 0; n <= 60; ++n)
                    for (std::size_t m = n % 2; m <= 60; m += 2)
                        series += std::pow(u, n) * std::pow(v, m) * table.prob(m, n);
                worst = std::max(worst,
                                 std::abs(series - pm::generating_function(qp, u, v)));
            }
        }
        battery.add("generating-function-vs-series", worst, 1e-8);
    }

    // mean quantum number closed form vs direct summation
    {
        double worst = 0.0;
        for (double q : {1.5, 2.0}) {
            const auto qp = pm::QParameter::from_value(q);
            const auto table = pm::probability_table(qp, 80);
            for (std::size_t n = 0; n <= 5; ++n)
                worst = std::max(worst, std::abs(table.mean_m()[n] -
                                                 pm::mean_quantum_number(qp, n)));
        }
        battery.add("mean-quantum-number-identity", worst, 1e-6);
    }

    // oracle vs closed forms at two interior times of the tf=0.5 ramp
    {
        const auto& s = scheds[1];
        const auto& tt = tts[1];
        double worst = 0.0;
        for (double t : {0.25, 0.4}) {
            const auto grid = pm::PositionGrid::make_default(
                std::sqrt(pm::effective_frequencies(s, 0.0).big_omega_sq),
                std::sqrt(pm::effective_frequencies(s, t).big_omega_sq));
            const auto oracle = pm::oracle_probabilities(tt, s, t, 4, grid);
            const auto table = pm::probability_table(
                pm::QParameter::from_value(pm::q_tt_simple(s, t)), 8);
            for (std::size_t m = 0; m <= 4; ++m)
                for (std::size_t n = 0; n <= 4; ++n)
                    worst = std::max(worst,
                                     std::abs(oracle.prob(m, n) - table.prob(m, n)));
        }
        // the oracle inherits the trajectory accuracy, so its bound scales too
        battery.add("oracle-vs-closed-form", worst, std::max(1e-4, 1000.0 * cfg.rel_tol));
    }

    // spectrum gap bookkeeping for the fast ramp
    {
        const auto gaps = pm::spectrum_validity_intervals(scheds[0], 4001);
        battery.add("fast-ramp-gap-count", std::abs(double(gaps.size()) - 1.0), 0.5);
        if (gaps.size() == 1) {
            const double q_lo = pm::q_tt_simple(scheds[0], gaps[0].first - 0.01);
            const double q_hi = pm::q_tt_simple(scheds[0], gaps[0].second + 0.01);
            const bool finite = std::isfinite(q_lo) && std::isfinite(q_hi);
            battery.add("fast-ramp-gap-flanks-finite", finite ? 0.0 : 1.0, 0.5);
        }
    }

    const int rc = battery.report();
    if (!cfg.out.empty()) {
        ordered_json j;
        j["command"] = "verify";
        j["rel_tol"] = cfg.rel_tol;
        j["n_max"] = cfg.n_max;
        j["negative_control"] = negative_control;
        j["checks"] = battery.to_json();
        std::ofstream out(cfg.out);
        if (!out) throw pm::DomainError("cannot open report file: " + cfg.out);
        out << j.dump(2) << '\n';
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transitionless parametric-oscillator toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    bool negative_control = false;
    std::string out_dir = "figures";

    const auto add_schedule_flags = [&](CLI::App* cmd) {
        cmd->add_option("--schedule", cfg.sched.schedule,
                        "schedule kind ('cubic', 'constant') or JSON file path");
        cmd->add_option("--t0", cfg.sched.t0, "start time");
        cmd->add_option("--tf", cfg.sched.tf, "final time");
        cmd->add_option("--omega0", cfg.sched.omega0, "initial frequency");
        cmd->add_option("--omegaf", cfg.sched.omegaf, "final frequency");
        cmd->add_option("--rel-tol", cfg.rel_tol, "ODE relative tolerance");
        cmd->add_option("--samples", cfg.samples, "number of output samples");
    };

    auto* trajectory =
        app.add_subcommand("trajectory", "integrate one oscillator pair and write CSV");
    add_schedule_flags(trajectory);
    trajectory->add_option("--variant", cfg.variant, "'tt' or 'adiabatic'");
    trajectory->add_option("--out", cfg.out, "output CSV path")->required();

    auto* qfactor = app.add_subcommand(
        "qfactor", "time-resolved Q^TT and Q* with energy ratios (CSV)");
    add_schedule_flags(qfactor);
    qfactor->add_option("--out", cfg.out, "output CSV path")->required();

    auto* probabilities = app.add_subcommand(
        "probabilities", "P00/P11 with and without the counterdiabatic term (CSV)");
    add_schedule_flags(probabilities);
    probabilities->add_option("--out", cfg.out, "output CSV path")->required();
    probabilities->add_option("--n-max", cfg.n_max, "P-table size for --table-out");
    probabilities->add_option("--table-at", cfg.table_at,
                              "time at which to emit a full P-table (default tf)");
    probabilities->add_option("--table-out", cfg.table_out,
                              "write the full P^{m,n} table (JSON + CSV twin)");

    auto* verify = app.add_subcommand("verify", "run the full cross-check battery");
    verify->add_option("--rel-tol", cfg.rel_tol, "ODE relative tolerance");
    verify->add_option("--n-max", cfg.n_max, "probability table size");
    verify->add_option("--out", cfg.out, "optional JSON report path");
    verify->add_flag("--negative-control", negative_control,
                     "deliberately compare mismatched formulas (must fail)");

    auto* figures =
        app.add_subcommand("figures", "emit the full data set behind the three figures");
    figures->add_option("--out-dir", out_dir, "output directory");
    figures->add_option("--rel-tol", cfg.rel_tol, "ODE relative tolerance");
    figures->add_option("--samples", cfg.samples, "samples per curve");

    try {
        app.parse(argc, argv);
        if (trajectory->parsed()) return cmd_trajectory(cfg);
        if (qfactor->parsed()) return cmd_qfactor(cfg);
        if (probabilities->parsed()) return cmd_probabilities(cfg);
        if (verify->parsed()) return cmd_verify(cfg, negative_control);
        if (figures->parsed()) return cmd_figures(out_dir, cfg.rel_tol, cfg.samples);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

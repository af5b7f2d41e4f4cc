#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "paramosc/adiabaticity.hpp"
#include "paramosc/cpo.hpp"
#include "paramosc/errors.hpp"
#include "paramosc/schedule.hpp"
#include "paramosc/transition.hpp"

namespace paramosc {

/// Shortest decimal representation that round-trips the double exactly
/// (byte-stable output for identical inputs).
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path), n_cols_(columns.size()) {
        if (!out_) throw DomainError("cannot open output file: " + path);
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        if (values.size() != n_cols_) throw DomainError("csv row width mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_double(values[i]);
        }
        out_ << '\n';
    }

    void row_raw(const std::vector<std::string>& values) {
        if (values.size() != n_cols_) throw DomainError("csv row width mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << values[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
    std::size_t n_cols_;
};

/// Trajectory CSV: t, mu, mu_dot, nu, nu_dot, wronskian.
inline void write_trajectory_csv(const CpoTrajectory& traj, const std::string& path) {
    CsvWriter csv(path, {"t", "mu", "mu_dot", "nu", "nu_dot", "wronskian"});
    for (std::size_t i = 0; i < traj.times().size(); ++i) {
        const double w = traj.mu_dot()[i] * traj.nu()[i] - traj.mu()[i] * traj.nu_dot()[i];
        csv.row({traj.times()[i], traj.mu()[i], traj.mu_dot()[i], traj.nu()[i],
                 traj.nu_dot()[i], w});
    }
}

/// Adiabaticity curve CSV: t, q, e_mu, e_nu, j_mu, j_nu, defined.
inline void write_curve_csv(const AdiabaticityCurve& curve, const std::string& path) {
    CsvWriter csv(path, {"t", "q", "e_mu", "e_nu", "j_mu", "j_nu", "defined"});
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        const auto& ep = curve.energies[i];
        csv.row({curve.times[i], curve.q[i], ep.e_mu, ep.e_nu, ep.j_mu, ep.j_nu,
                 static_cast<double>(curve.defined[i])});
    }
}

/// Structured document {q, n_max, probs, defined} for the transition table.
/// Hand-formatted JSON so the library itself stays dependency-free.
inline std::string transition_table_to_json(const TransitionTable& table) {
    std::string out = "{\n  \"q\": ";
    out += table.q().defined ? format_double(table.q().q) : "null";
    out += ",\n  \"n_max\": " + std::to_string(table.n_max());
    out += ",\n  \"defined\": ";
    out += table.q().defined ? "true" : "false";
    out += ",\n  \"probs\": [\n";
    for (std::size_t m = 0; m <= table.n_max(); ++m) {
        out += "    [";
        for (std::size_t n = 0; n <= table.n_max(); ++n) {
            if (n) out += ", ";
            out += format_double(table.prob(m, n));
        }
        out += m < table.n_max() ? "],\n" : "]\n";
    }
    out += "  ]\n}\n";
    return out;
}

/// Transition table CSV: one row per m, one column per n.
inline void write_transition_csv(const TransitionTable& table, const std::string& path) {
    std::vector<std::string> cols{"m"};
    for (std::size_t n = 0; n <= table.n_max(); ++n) cols.push_back("n" + std::to_string(n));
    CsvWriter csv(path, cols);
    for (std::size_t m = 0; m <= table.n_max(); ++m) {
        std::vector<std::string> row{std::to_string(m)};
        for (std::size_t n = 0; n <= table.n_max(); ++n)
            row.push_back(format_double(table.prob(m, n)));
        csv.row_raw(row);
    }
}

}  // namespace paramosc

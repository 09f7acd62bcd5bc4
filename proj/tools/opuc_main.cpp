// opuc: command-line driver for the unit-circle spectral toolkit.
//
// Subcommands: gen, evolve, prufer, tails, energy, scan, check.
// Every output embeds the resolved run configuration in its header
// (key=value lines behind '#', or a "config" object in JSON), so any output
// file can be fed back via --config to reproduce the run.  Execution details
// that cannot change results (worker count, output path) are not echoed.
//
// Exit codes: 0 success, 1 identity-suite violation, 2 validation error or
// unknown subcommand, 3 malformed config file, 4 unwritable output path.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "opuc/dimension.hpp"
#include "opuc/io.hpp"
#include "opuc/kahan.hpp"
#include "opuc/prufer.hpp"
#include "opuc/rng.hpp"
#include "opuc/szego.hpp"
#include "opuc/tails.hpp"
#include "opuc/verblunsky.hpp"

namespace {

using opuc::Config;

struct ConfigFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::set<std::string> kKnownKeys = {
    "subcommand", "seq-kind",  "amplitude", "exponent",  "gamma",   "gamma-target",
    "seed",       "explicit",  "eta",       "beta",      "n-max",   "n-trunc",
    "grid",       "threshold", "beta-samples", "s",      "epsilon", "tau",
    "kind",       "transfer",  "dyadic",    "measure",   "format",  "out",
    "workers",    "config"};

struct Resolved {
    Config values;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    std::string str(const std::string& key, const std::string& fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }

    double num(const std::string& key, double fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad numeric value for --" + key + ": " + it->second);
        }
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        try {
            return std::stoll(it->second);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad integer value for --" + key + ": " + it->second);
        }
    }
};

opuc::CoefficientSequence sequence_from(const Resolved& r) {
    Config seq_config;
    for (const auto& key : {"seq-kind", "amplitude", "exponent", "gamma-target", "seed", "explicit"})
        if (r.has(key)) seq_config[key] = r.values.at(key);
    const auto kind = opuc::sequence_kind_from_string(r.str("seq-kind", "zero"));
    if (kind == opuc::SequenceKind::RandomPhasePowerDecay && !r.has("seed"))
        throw std::invalid_argument("randomized sequences require an explicit --seed");
    return opuc::CoefficientSequence::from_config(seq_config);
}

// Header keys: the sequence spec plus whichever operation parameters the
// handler actually used.
Config base_echo(const Resolved& r, const std::string& subcommand,
                 const opuc::CoefficientSequence& seq) {
    Config echo = seq.to_config();
    echo["subcommand"] = subcommand;
    echo["format"] = r.str("format", "csv");
    return echo;
}

struct Output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Output(const Resolved& r) {
        const std::string path = r.str("out", "");
        if (!path.empty()) {
            file.open(path);
            if (!file) throw ConfigFileError("unwritable output path: " + path);
            stream = &file;
        }
    }
    std::ostream& out() { return *stream; }
};

void write_csv_header(std::ostream& out, const Config& echo) {
    opuc::write_config(out, echo, "# ");
    out << "# timestamp=" << opuc::iso8601_now() << '\n';
}

nlohmann::json json_envelope(const Config& echo) {
    nlohmann::json j;
    j["config"] = echo;
    j["timestamp"] = opuc::iso8601_now();
    return j;
}

// ---- subcommand handlers ----------------------------------------------------

int run_gen(const Resolved& r) {
    const auto seq = sequence_from(r);
    const std::int64_t n_max = r.integer("n-max", 32);
    const auto alphas = opuc::materialize(seq, n_max);

    Config echo = base_echo(r, "gen", seq);
    echo["n-max"] = std::to_string(n_max);
    Output output(r);
    if (r.str("format", "csv") == "json") {
        auto j = json_envelope(echo);
        auto rows = nlohmann::json::array();
        for (const auto& a : alphas) rows.push_back({a.real(), a.imag()});
        j["alpha"] = rows;
        output.out() << j.dump(2) << '\n';
    } else {
        write_csv_header(output.out(), echo);
        output.out() << "n,re_alpha,im_alpha\n";
        for (std::size_t n = 0; n < alphas.size(); ++n)
            output.out() << n << ',' << opuc::format_double(alphas[n].real()) << ','
                         << opuc::format_double(alphas[n].imag()) << '\n';
    }
    return 0;
}

int run_evolve(const Resolved& r) {
    const auto seq = sequence_from(r);
    const std::int64_t n_max = r.integer("n-max", 32);
    const double eta = r.num("eta", 0.0);
    const bool transfer = r.str("transfer", "0") == "1";
    const std::string kind_name = r.str("kind", "first");
    const auto kind =
        kind_name == "second" ? opuc::PolynomialKind::Second : opuc::PolynomialKind::First;
    if (kind_name != "first" && kind_name != "second")
        throw std::invalid_argument("--kind must be first or second");
    const opuc::UnitCirclePoint z(eta);

    Config echo = base_echo(r, "evolve", seq);
    echo["n-max"] = std::to_string(n_max);
    echo["eta"] = opuc::format_double(eta);
    echo["kind"] = kind_name;
    echo["transfer"] = transfer ? "1" : "0";
    Output output(r);

    if (transfer) {
        opuc::TransferEvolution evo(z);
        std::vector<std::array<double, 2>> rows;
        rows.push_back({1.0, 0.0});
        for (std::int64_t n = 0; n < n_max; ++n) {
            evo.step(seq.at(n));
            const double ln = evo.log_norm();
            rows.push_back({std::exp(ln), ln});
        }
        if (r.str("format", "csv") == "json") {
            auto j = json_envelope(echo);
            auto arr = nlohmann::json::array();
            for (const auto& row : rows) arr.push_back({row[0], row[1]});
            j["norms"] = arr;
            output.out() << j.dump(2) << '\n';
        } else {
            write_csv_header(output.out(), echo);
            output.out() << "n,norm_Tn,log_scale\n";
            for (std::size_t n = 0; n < rows.size(); ++n)
                output.out() << n << ',' << opuc::format_double(rows[n][0]) << ','
                             << opuc::format_double(rows[n][1]) << '\n';
        }
        return 0;
    }

    std::vector<opuc::PolynomialPairState> states;
    for (std::int64_t n = 0; n <= n_max; ++n) states.push_back(opuc::evolve_pair(seq, z, n, kind));
    if (r.str("format", "csv") == "json") {
        auto j = json_envelope(echo);
        auto arr = nlohmann::json::array();
        for (const auto& s : states)
            arr.push_back({s.value.real(), s.value.imag(), s.star_value.real(),
                           s.star_value.imag()});
        j["pairs"] = arr;
        output.out() << j.dump(2) << '\n';
    } else {
        write_csv_header(output.out(), echo);
        output.out() << "n,re_phi,im_phi,re_phi_star,im_phi_star\n";
        for (const auto& s : states)
            output.out() << s.n << ',' << opuc::format_double(s.value.real()) << ','
                         << opuc::format_double(s.value.imag()) << ','
                         << opuc::format_double(s.star_value.real()) << ','
                         << opuc::format_double(s.star_value.imag()) << '\n';
    }
    return 0;
}

int run_prufer(const Resolved& r) {
    const auto seq = sequence_from(r);
    const std::int64_t n_max = r.integer("n-max", 32);
    const opuc::RotationParams params(r.num("eta", 0.0), r.num("beta", 0.0));
    const auto rows = opuc::prufer_trajectory(seq, params, n_max);

    Config echo = base_echo(r, "prufer", seq);
    echo["n-max"] = std::to_string(n_max);
    echo["eta"] = opuc::format_double(params.eta);
    echo["beta"] = opuc::format_double(params.beta);
    Output output(r);
    if (r.str("format", "csv") == "json") {
        auto j = json_envelope(echo);
        auto arr = nlohmann::json::array();
        for (const auto& row : rows)
            arr.push_back({row.log_radius, row.theta, row.A.real(), row.A.imag(), row.residual});
        j["trajectory"] = arr;
        output.out() << j.dump(2) << '\n';
    } else {
        write_csv_header(output.out(), echo);
        output.out() << "n,log_R,theta,re_A,im_A,residual\n";
        for (const auto& row : rows)
            output.out() << row.n << ',' << opuc::format_double(row.log_radius) << ','
                         << opuc::format_double(row.theta) << ','
                         << opuc::format_double(row.A.real()) << ','
                         << opuc::format_double(row.A.imag()) << ','
                         << opuc::format_double(row.residual) << '\n';
    }
    return 0;
}

int run_tails(const Resolved& r) {
    const auto seq = sequence_from(r);
    const std::int64_t n_max = r.integer("n-max", 32);
    const std::int64_t n_trunc = r.integer("n-trunc", n_max);
    const double eta = r.num("eta", 0.0);
    if (n_trunc < n_max) throw std::invalid_argument("--n-trunc must be >= --n-max");
    const auto tails = opuc::suffix_tails(seq, eta, n_trunc);

    Config echo = base_echo(r, "tails", seq);
    echo["n-max"] = std::to_string(n_max);
    echo["n-trunc"] = std::to_string(n_trunc);
    echo["eta"] = opuc::format_double(eta);
    Output output(r);
    if (r.str("format", "csv") == "json") {
        auto j = json_envelope(echo);
        auto arr = nlohmann::json::array();
        for (std::int64_t n = 0; n <= n_max; ++n)
            arr.push_back({tails[static_cast<std::size_t>(n)].real(),
                           tails[static_cast<std::size_t>(n)].imag()});
        j["tails"] = arr;
        output.out() << j.dump(2) << '\n';
    } else {
        write_csv_header(output.out(), echo);
        output.out() << "n,re_tail,im_tail\n";
        for (std::int64_t n = 0; n <= n_max; ++n)
            output.out() << n << ',' << opuc::format_double(tails[static_cast<std::size_t>(n)].real())
                         << ',' << opuc::format_double(tails[static_cast<std::size_t>(n)].imag())
                         << '\n';
    }
    return 0;
}

int run_energy(const Resolved& r) {
    Output output(r);
    if (r.has("measure")) {
        std::ifstream in(r.str("measure", ""));
        if (!in) throw std::invalid_argument("cannot open measure file: " + r.str("measure", ""));
        const auto nu = opuc::load_measure_csv(in);
        const double s = r.num("s", 0.5);
        const double energy = opuc::s_energy(nu, s);

        Config echo;
        echo["subcommand"] = "energy";
        echo["measure"] = r.str("measure", "");
        echo["s"] = opuc::format_double(s);
        echo["format"] = r.str("format", "json");

        // With a seed, draw one randomized polynomial trial against the
        // measure and report the inequality ratio alongside the energy.
        bool has_ratio = false;
        double ratio = 0.0;
        std::uint64_t trial_seed = 0;
        if (r.has("seed")) {
            trial_seed = static_cast<std::uint64_t>(r.integer("seed", 0));
            std::uint64_t counter = 0;
            auto draw = [&] { return opuc::uniform_unit(trial_seed, counter++); };
            std::vector<std::complex<double>> coeffs(1 + static_cast<std::size_t>(draw() * 64.0));
            for (auto& c : coeffs) {
                const double modulus = draw();
                const double phase = 2.0 * std::numbers::pi * draw();
                c = {modulus * std::cos(phase), modulus * std::sin(phase)};
            }
            std::vector<std::int64_t> cutoffs(nu.cells.size());
            for (auto& m : cutoffs) m = static_cast<std::int64_t>(draw() * 64.0);
            ratio = opuc::sz_inequality_ratio(coeffs, cutoffs, nu, s);
            has_ratio = true;
            echo["seed"] = std::to_string(trial_seed);
        }

        if (r.str("format", "json") == "csv") {
            write_csv_header(output.out(), echo);
            output.out() << "s,energy\n"
                         << opuc::format_double(s) << ',' << opuc::format_double(energy) << '\n';
        } else {
            auto j = json_envelope(echo);
            j["s"] = s;
            j["energy"] = energy;
            if (has_ratio) {
                j["ratio"] = ratio;
                j["trial_seed"] = trial_seed;
            }
            output.out() << j.dump(2) << '\n';
        }
        return 0;
    }

    const auto seq = sequence_from(r);
    const double gamma = r.num("gamma", 0.5);
    const std::int64_t n_max = r.integer("n-max", 4096);
    Config echo = base_echo(r, "energy", seq);
    echo["gamma"] = opuc::format_double(gamma);
    echo["n-max"] = std::to_string(n_max);

    if (r.str("dyadic", "0") == "1") {
        const double epsilon = r.num("epsilon", 0.1);
        int K = 0;
        while ((std::int64_t{1} << (K + 1)) <= n_max) ++K;
        if (K < 1) throw std::invalid_argument("--n-max too small for dyadic blocks");
        const auto diag = opuc::dyadic_l1_sum(seq, gamma, epsilon, K);
        echo["epsilon"] = opuc::format_double(epsilon);
        echo["dyadic"] = "1";
        if (r.str("format", "csv") == "json") {
            auto j = json_envelope(echo);
            auto arr = nlohmann::json::array();
            for (const auto& b : diag.blocks) arr.push_back({b.k, b.l1_sum, b.majorant});
            j["blocks"] = arr;
            output.out() << j.dump(2) << '\n';
        } else {
            write_csv_header(output.out(), echo);
            output.out() << "k,block_l1,block_majorant\n";
            for (const auto& b : diag.blocks)
                output.out() << b.k << ',' << opuc::format_double(b.l1_sum) << ','
                             << opuc::format_double(b.majorant) << '\n';
        }
        return 0;
    }

    // Cumulative weighted energy at dyadic checkpoints.
    std::vector<std::pair<std::int64_t, double>> checkpoints;
    opuc::KahanSum sum;
    std::int64_t next = 1;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double a2 = std::norm(seq.at(n));
        if (a2 != 0.0) sum.add(std::pow(static_cast<double>(n), gamma) * a2);
        if (n == next || n == n_max) {
            checkpoints.emplace_back(n, sum.value());
            while (next <= n) next <<= 1;
        }
    }
    if (r.str("format", "csv") == "json") {
        auto j = json_envelope(echo);
        auto arr = nlohmann::json::array();
        for (const auto& [n, value] : checkpoints) arr.push_back({n, value});
        j["weighted-energy"] = arr;
        output.out() << j.dump(2) << '\n';
    } else {
        write_csv_header(output.out(), echo);
        output.out() << "N,weighted_energy\n";
        for (const auto& [n, value] : checkpoints)
            output.out() << n << ',' << opuc::format_double(value) << '\n';
    }
    return 0;
}

int run_scan(const Resolved& r) {
    const auto seq = sequence_from(r);
    opuc::ScanConfig cfg;
    cfg.grid_size = r.integer("grid", cfg.grid_size);
    cfg.N_max = r.integer("n-max", cfg.N_max);
    cfg.norm_threshold = r.num("threshold", cfg.norm_threshold);
    cfg.beta_samples = r.integer("beta-samples", cfg.beta_samples);
    cfg.gamma = r.num("gamma", seq.gamma_target() > 0.0 ? seq.gamma_target() : cfg.gamma);
    cfg.workers = static_cast<int>(r.integer("workers", 0));

    const auto report = opuc::scan_exceptional_set(seq, cfg);

    Config echo = base_echo(r, "scan", seq);
    echo["grid"] = std::to_string(cfg.grid_size);
    echo["n-max"] = std::to_string(cfg.N_max);
    echo["threshold"] = opuc::format_double(cfg.norm_threshold);
    echo["beta-samples"] = std::to_string(cfg.beta_samples);
    echo["gamma"] = opuc::format_double(cfg.gamma);

    Output output(r);
    if (r.str("format", "csv") == "json") {
        auto j = json_envelope(echo);
        j["report"] = nlohmann::json::parse(opuc::report_to_json(report));
        output.out() << j.dump(2) << '\n';
    } else {
        write_csv_header(output.out(), echo);
        opuc::write_report_csv(output.out(), report);
    }
    return 0;
}

int run_check(const Resolved& r) {
    const auto seq = sequence_from(r);
    const std::int64_t n_max = r.integer("n-max", 1000);
    const opuc::RotationParams params(r.num("eta", 1.0), r.num("beta", 0.0));
    const opuc::UnitCirclePoint z(params.eta);

    Config echo = base_echo(r, "check", seq);
    echo["n-max"] = std::to_string(n_max);
    echo["eta"] = opuc::format_double(params.eta);
    echo["beta"] = opuc::format_double(params.beta);
    Output output(r);
    std::ostream& out = output.out();
    write_csv_header(out, echo);

    bool all_pass = true;
    auto report = [&out, &all_pass](const std::string& name, bool ok, double value,
                                    double bound) {
        all_pass = all_pass && ok;
        out << (ok ? "PASS " : "FAIL ") << name << ": value=" << opuc::format_double(value)
            << " bound=" << opuc::format_double(bound) << '\n';
    };

    // Determinant identity |det T_n - z^n| <= 1e-9 n.
    {
        opuc::TransferEvolution evo(z);
        double worst = 0.0;
        std::complex<double> zn{1.0, 0.0};
        for (std::int64_t n = 1; n <= n_max; ++n) {
            evo.step(seq.at(n - 1));
            zn *= z.value();
            worst = std::max(worst, std::abs(evo.det() - zn) / static_cast<double>(n));
        }
        report("determinant-identity", worst <= 1e-9, worst, 1e-9);
    }

    // Prufer radius against the monic polynomial modulus, relative 1e-8.
    {
        opuc::ScaledPairEvolution monic(z, opuc::PolynomialKind::First, true);
        const std::complex<double> rot{std::cos(params.beta), std::sin(params.beta)};
        opuc::PruferState state;
        double worst = 0.0;
        for (std::int64_t n = 0; n < n_max; ++n) {
            const auto alpha = seq.at(n);
            state = opuc::prufer_step(state, alpha, params);
            monic.step(rot * alpha);
            worst = std::max(worst, std::abs(state.log_radius - monic.log_abs_value()));
        }
        report("prufer-vs-direct", worst <= 1e-8, worst, 1e-8);
    }

    // Summation-by-parts rearrangement.
    {
        const std::int64_t n = std::min<std::int64_t>(n_max, 500);
        const double residual = opuc::abel_identity_check(seq, params, n, n);
        const double bound = 1e-10 * static_cast<double>(std::max<std::int64_t>(n, 1));
        report("abel-identity", residual <= bound, residual, bound);
    }

    // Branch condition |theta_{n+1} - theta_n| < pi/2.
    {
        const auto states = opuc::evolve_prufer(seq, params, n_max);
        double worst = 0.0;
        for (std::size_t i = 1; i < states.size(); ++i)
            worst = std::max(worst, std::abs(states[i].theta - states[i - 1].theta));
        report("branch-condition", worst < std::numbers::pi / 2.0, worst,
               std::numbers::pi / 2.0);
    }

    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unit-circle spectral toolkit: Verblunsky sequences, Szego transfer "
                 "matrices, Prufer variables, tail sums, s-energies, exceptional-set scans"};
    app.require_subcommand(1);

    Config cli_values;
    std::string config_path;

    auto add_common = [&cli_values, &config_path](CLI::App* cmd) {
        for (const auto& key : kKnownKeys) {
            if (key == "subcommand" || key == "config") continue;
            const std::string name = "--" + key;
            if (key == "transfer" || key == "dyadic") {
                cmd->add_flag_callback(
                    name, [&cli_values, key] { cli_values[key] = "1"; }, "");
            } else {
                cmd->add_option_function<std::string>(
                    name, [&cli_values, key](const std::string& v) { cli_values[key] = v; }, "");
            }
        }
        cmd->add_option("--config", config_path, "flat key=value or JSON config file");
    };

    std::map<std::string, int (*)(const Resolved&)> handlers = {
        {"gen", run_gen},     {"evolve", run_evolve}, {"prufer", run_prufer},
        {"tails", run_tails}, {"energy", run_energy}, {"scan", run_scan},
        {"check", run_check}};

    for (const auto& [name, handler] : handlers) add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    Resolved resolved;
    try {
        if (!config_path.empty()) {
            resolved.values = opuc::read_config_file(config_path);
            for (const auto& [key, value] : resolved.values) {
                if (!kKnownKeys.count(key))
                    throw ConfigFileError("unknown config key: " + key);
                (void)value;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    for (const auto& [key, value] : cli_values) resolved.values[key] = value;  // flags win

    const std::string subcommand = app.get_subcommands().front()->get_name();
    try {
        return handlers.at(subcommand)(resolved);
    } catch (const ConfigFileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

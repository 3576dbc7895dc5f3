// Batch front-end: parameter sweeps, verification suites, experiments, and
// rate-region exports to CSV/JSON. Talks to the core exclusively through the
// shared-library C interface.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imlab.h"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct RunConfig {
    double snr1 = 1.0, snr2 = 1.0, a = 0.5;
    double snr_z = 2.0, snr3 = 1.0, a2 = 0.5, a3 = 0.5;
    double gamma_min = 0.0, gamma_max = 4.0;
    int steps = 101;
    std::vector<int> n_list{8, 16, 24};
    double rate_fraction = 0.95;
    long long samples = 10000;
    std::uint64_t seed = 1;
    int order = 61;
    int beta_steps = 101;
    int seeds = 20;
    int threads = 1;
    double snr = 0.1, delta = 0.05;
    double h = 1e-3, tol = 1e-3;
    int n = 4;
    double rate = std::log(8.0) / 4.0;
    std::string source = "bpsk";  // bpsk | pam4 | codebook
    std::string region = "mac";   // mac | cascade | intermediate
    std::string matrix_file;
    std::string units = "nats";
    std::string format = "csv";
    std::string out;
    std::string config_path;
};

[[noreturn]] void usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(kExitUsage);
}

int exit_code_for(int rc) {
    switch (rc) {
        case IMLAB_ERR_DOMAIN:
        case IMLAB_ERR_RANGE:
        case IMLAB_ERR_NUMERIC:
            return kExitNumeric;
        default:
            return kExitUsage;
    }
}

void check_rc(int rc) {
    if (rc == IMLAB_OK) return;
    std::cerr << "error: " << imlab_strerror(rc) << ": " << imlab_last_error() << "\n";
    std::exit(exit_code_for(rc));
}

// deterministic draws for the sampling of parameter space; self-contained so
// the CLI stays on the C interface
struct Splitmix {
    std::uint64_t state;
    explicit Splitmix(std::uint64_t seed) : state(seed) {}
    double uniform01() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<bool> nats_column;  // converted when units = bits
    std::vector<std::vector<Cell>> rows;

    void add_column(const std::string& name, bool nats = false) {
        columns.push_back(name);
        nats_column.push_back(nats);
    }
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double converted(double v, bool nats, bool to_bits) { return (nats && to_bits) ? v / std::numbers::ln2 : v; }

std::string render_csv(const Table& t, bool to_bits) {
    std::string out;
    for (size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (std::holds_alternative<double>(row[c])) {
                out += format_double(converted(std::get<double>(row[c]), t.nats_column[c], to_bits));
            } else if (std::holds_alternative<long long>(row[c])) {
                out += std::to_string(std::get<long long>(row[c]));
            } else {
                out += std::get<std::string>(row[c]);
            }
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& t, bool to_bits) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json rec;
        for (size_t c = 0; c < row.size(); ++c) {
            if (std::holds_alternative<double>(row[c])) {
                rec[t.columns[c]] = converted(std::get<double>(row[c]), t.nats_column[c], to_bits);
            } else if (std::holds_alternative<long long>(row[c])) {
                rec[t.columns[c]] = std::get<long long>(row[c]);
            } else {
                rec[t.columns[c]] = std::get<std::string>(row[c]);
            }
        }
        arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
}

void emit(const Table& t, const RunConfig& cfg) {
    const bool to_bits = cfg.units == "bits";
    const std::string body = cfg.format == "json" ? render_json(t, to_bits) : render_csv(t, to_bits);
    if (cfg.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) usage_error("cannot open output file " + cfg.out);
        f << body;
    }
}

std::vector<double> make_grid(double lo, double hi, int steps) {
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i) g[i] = lo + (hi - lo) * i / (steps - 1);
    return g;
}

// simple key=value file; flags override anything set here
void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) usage_error("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) usage_error("config line " + std::to_string(lineno) + " is not key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        auto as_double = [&](double& dst) { dst = std::stod(value); };
        auto as_int = [&](int& dst) { dst = std::stoi(value); };
        try {
            if (key == "snr1") as_double(cfg.snr1);
            else if (key == "snr2") as_double(cfg.snr2);
            else if (key == "a") as_double(cfg.a);
            else if (key == "snr-z") as_double(cfg.snr_z);
            else if (key == "snr3") as_double(cfg.snr3);
            else if (key == "a2") as_double(cfg.a2);
            else if (key == "a3") as_double(cfg.a3);
            else if (key == "gamma-min") as_double(cfg.gamma_min);
            else if (key == "gamma-max") as_double(cfg.gamma_max);
            else if (key == "steps") as_int(cfg.steps);
            else if (key == "n-list") {
                cfg.n_list.clear();
                std::stringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ',')) cfg.n_list.push_back(std::stoi(tok));
            }
            else if (key == "rate-fraction") as_double(cfg.rate_fraction);
            else if (key == "samples") cfg.samples = std::stoll(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "order") as_int(cfg.order);
            else if (key == "beta-steps") as_int(cfg.beta_steps);
            else if (key == "seeds") as_int(cfg.seeds);
            else if (key == "threads") as_int(cfg.threads);
            else if (key == "snr") as_double(cfg.snr);
            else if (key == "delta") as_double(cfg.delta);
            else if (key == "fd-step") as_double(cfg.h);
            else if (key == "tol") as_double(cfg.tol);
            else if (key == "n") as_int(cfg.n);
            else if (key == "rate") as_double(cfg.rate);
            else if (key == "source") cfg.source = value;
            else if (key == "region") cfg.region = value;
            else if (key == "matrix-file") cfg.matrix_file = value;
            else if (key == "units") cfg.units = value;
            else if (key == "format") cfg.format = value;
            else if (key == "out") cfg.out = value;
            else usage_error("unknown config key '" + key + "'");
        } catch (const std::exception&) {
            usage_error("bad value for config key '" + key + "'");
        }
    }
}

void validate_common(const RunConfig& cfg) {
    if (cfg.steps < 2) usage_error("steps must be at least 2");
    if (!(cfg.gamma_min >= 0.0) || !(cfg.gamma_min < cfg.gamma_max)) usage_error("need 0 <= gamma-min < gamma-max");
    if (cfg.samples < 100) usage_error("samples must be at least 100");
    if (!(cfg.rate_fraction > 0.0) || cfg.rate_fraction > 1.0) usage_error("rate-fraction must lie in (0, 1]");
    if (cfg.beta_steps < 2) usage_error("beta-steps must be at least 2");
    if (cfg.seeds < 1) usage_error("seeds must be at least 1");
    if (cfg.units != "nats" && cfg.units != "bits") usage_error("units must be nats or bits");
    if (cfg.format != "csv" && cfg.format != "json") usage_error("format must be csv or json");
    if (cfg.n_list.empty()) usage_error("n-list must be non-empty");
}

imlab_channel_params channel_of(const RunConfig& cfg) { return imlab_channel_params{cfg.snr1, cfg.snr2, cfg.a}; }

int cmd_sweep_mi(const RunConfig& cfg) {
    const imlab_channel_params p = channel_of(cfg);
    const auto grid = make_grid(cfg.gamma_min, cfg.gamma_max, cfg.steps);

    Table t;
    t.add_column("gamma");
    t.add_column("gamma_prime");
    t.add_column("mi", true);
    t.add_column("d_mi", true);
    t.add_column("mmse");
    t.add_column("regime");

    for (double g : grid) {
        double gp = 0, mi = 0, dmi = 0, mmse = 0;
        int regime = 0;
        check_rc(imlab_gamma_prime(&p, g, &gp));
        check_rc(imlab_mi_gaussian_interference(&p, g, &mi));
        check_rc(imlab_d_mi_gaussian_interference(&p, g, &dmi));
        check_rc(imlab_mmse_gaussian(1.0, gp, &mmse));
        check_rc(imlab_mi_regime(&p, g, &regime));
        t.rows.push_back({g, gp, mi, dmi, mmse, std::string("R") + std::to_string(regime)});
    }
    emit(t, cfg);
    return 0;
}

int cmd_verify_immse(const RunConfig& cfg) {
    const auto grid = make_grid(cfg.gamma_min, cfg.gamma_max, cfg.steps);
    std::vector<imlab_immse_row> rows(grid.size());

    if (cfg.source == "codebook") {
        imlab_codebook* cb = nullptr;
        check_rc(imlab_codebook_generate(cfg.n, cfg.rate, cfg.seed, &cb));
        check_rc(imlab_codebook_verify_immse(cb, grid.data(), static_cast<int>(grid.size()), cfg.h, cfg.tol,
                                             cfg.samples, cfg.seed, cfg.threads, rows.data()));
        imlab_codebook_free(cb);
    } else if (cfg.source == "bpsk" || cfg.source == "pam4") {
        imlab_constellation* c = nullptr;
        check_rc(cfg.source == "bpsk" ? imlab_constellation_bpsk(&c) : imlab_constellation_pam4(&c));
        check_rc(imlab_constellation_verify_immse(c, grid.data(), static_cast<int>(grid.size()), cfg.h, cfg.tol,
                                                  cfg.order, rows.data()));
        imlab_constellation_free(c);
    } else {
        usage_error("source must be bpsk, pam4 or codebook");
    }

    Table t;
    t.add_column("gamma");
    t.add_column("d_mi_fd", true);
    t.add_column("half_mmse", true);
    t.add_column("abs_diff", true);
    t.add_column("std_error", true);
    t.add_column("pass");
    bool all_pass = true;
    for (const auto& r : rows) {
        all_pass = all_pass && r.pass;
        t.rows.push_back({r.gamma, r.lhs, r.rhs, r.abs_diff, r.std_error, static_cast<long long>(r.pass)});
    }
    emit(t, cfg);
    return all_pass ? 0 : kExitVerifyFailed;
}

int cmd_incremental_check(const RunConfig& cfg, bool tol_given) {
    const imlab_channel_params p = channel_of(cfg);
    double limit = 0;
    check_rc(imlab_admissible_snr_limit(&p, &limit));
    if (!(limit > 0.0)) usage_error("a*snr2 must be positive for the incremental check");
    const double tol = tol_given ? cfg.tol : 1e-10;

    Table t;
    t.add_column("snr");
    t.add_column("delta");
    t.add_column("mi_diff", true);
    t.add_column("cond_mi", true);
    t.add_column("identity_err", true);
    t.add_column("var_nhat");
    t.add_column("var_nhat_err");
    t.add_column("pass");

    Splitmix rng(cfg.seed);
    bool all_pass = true;
    for (int i = 0; i < cfg.steps; ++i) {
        const double snr = limit * (0.01 + 0.69 * rng.uniform01());
        const double delta = (limit - snr) * (0.02 + 0.96 * rng.uniform01());
        imlab_increment_check chk{};
        imlab_increment inc{};
        check_rc(imlab_incremental_gaussian_check(&p, snr, delta, &chk));
        check_rc(imlab_incremental_decomposition(&p, snr, delta, &inc));
        const double identity_err = std::abs(chk.mi_difference - chk.conditional_mi);
        const double var_err = std::abs(inc.var_nhat - (1.0 - delta * inc.alpha));
        const bool pass = identity_err <= tol && var_err <= 1e-12;
        all_pass = all_pass && pass;
        t.rows.push_back({snr, delta, chk.mi_difference, chk.conditional_mi, identity_err, chk.var_nhat, var_err,
                          static_cast<long long>(pass ? 1 : 0)});
    }
    emit(t, cfg);
    return all_pass ? 0 : kExitVerifyFailed;
}

int cmd_codebook_eigs(const RunConfig& cfg) {
    std::vector<int> m(cfg.n_list.size());
    std::vector<double> dev(cfg.n_list.size());
    check_rc(imlab_spectral_deviation_experiment(cfg.snr1, cfg.rate_fraction, cfg.n_list.data(),
                                                 static_cast<int>(cfg.n_list.size()), cfg.seeds, cfg.seed,
                                                 m.data(), dev.data()));
    Table t;
    t.add_column("n");
    t.add_column("M");
    t.add_column("mean_spectral_deviation");
    for (size_t i = 0; i < cfg.n_list.size(); ++i)
        t.rows.push_back({static_cast<long long>(cfg.n_list[i]), static_cast<long long>(m[i]), dev[i]});
    emit(t, cfg);
    return 0;
}

int cmd_independence_bound(const RunConfig& cfg) {
    const imlab_channel_params p = channel_of(cfg);
    std::vector<int> m(cfg.n_list.size());
    std::vector<double> mi(cfg.n_list.size());
    check_rc(imlab_independence_experiment(&p, cfg.snr, cfg.delta, cfg.rate_fraction, cfg.n_list.data(),
                                           static_cast<int>(cfg.n_list.size()), cfg.seeds, cfg.seed, m.data(),
                                           mi.data()));
    Table t;
    t.add_column("n");
    t.add_column("M");
    t.add_column("surrogate_mi", true);
    for (size_t i = 0; i < cfg.n_list.size(); ++i)
        t.rows.push_back({static_cast<long long>(cfg.n_list[i]), static_cast<long long>(m[i]), mi[i]});
    emit(t, cfg);
    return 0;
}

int cmd_rate_region(const RunConfig& cfg) {
    Table t;
    if (cfg.region == "mac") {
        const imlab_mac_params p{cfg.snr1, cfg.snr2, cfg.snr_z, cfg.a};
        double threshold = 0;
        check_rc(imlab_mac_mmse_threshold(&p, &threshold));
        t.add_column("beta");
        t.add_column("r1", true);
        t.add_column("r2", true);
        t.add_column("rz", true);
        t.add_column("r1_plus_r2", true);
        t.add_column("mmse_threshold");
        for (int i = 0; i < cfg.beta_steps; ++i) {
            const double beta = static_cast<double>(i) / (cfg.beta_steps - 1);
            double r[3] = {0, 0, 0};
            check_rc(imlab_mac_weak_boundary(&p, beta, r));
            t.rows.push_back({beta, r[0], r[1], r[2], r[0] + r[1], threshold});
        }
    } else if (cfg.region == "cascade") {
        const imlab_cascade_params p{cfg.snr1, cfg.snr2, cfg.snr3};
        double bounds[3] = {0, 0, 0};
        check_rc(imlab_cascade_bounds(&p, cfg.a, bounds));
        t.add_column("beta");
        t.add_column("r1", true);
        t.add_column("r2", true);
        t.add_column("r3", true);
        t.add_column("r2_plus_r3", true);
        t.add_column("sum_bound", true);
        t.add_column("r2_bound", true);
        t.add_column("r3_bound", true);
        for (int i = 0; i < cfg.beta_steps; ++i) {
            const double beta = static_cast<double>(i) / (cfg.beta_steps - 1);
            double r[3] = {0, 0, 0};
            check_rc(imlab_cascade_boundary(&p, cfg.a, beta, r));
            t.rows.push_back({beta, r[0], r[1], r[2], r[1] + r[2], bounds[0], bounds[1], bounds[2]});
        }
    } else if (cfg.region == "intermediate") {
        const imlab_cascade_params p{cfg.snr1, cfg.snr2, cfg.snr3};
        double limit = 0;
        check_rc(imlab_intermediate_node_limit(&p, cfg.a2, cfg.a3, &limit));
        t.add_column("r2_max", true);
        t.add_column("a2");
        t.add_column("a3");
        t.rows.push_back({limit, cfg.a2, cfg.a3});
    } else {
        usage_error("region must be mac, cascade or intermediate");
    }
    emit(t, cfg);
    return 0;
}

int cmd_kl_block(const RunConfig& cfg) {
    if (cfg.matrix_file.empty()) usage_error("kl-block requires --matrix-file");
    std::ifstream f(cfg.matrix_file);
    if (!f) usage_error("cannot read matrix file " + cfg.matrix_file);
    int n = 0;
    if (!(f >> n) || n < 1) usage_error("matrix file must start with the block dimension n");
    std::vector<double> a(static_cast<size_t>(n) * n), b(a.size()), c(a.size());
    for (auto* block : {&a, &b, &c}) {
        for (double& v : *block) {
            if (!(f >> v)) usage_error("matrix file ended early; expected three n x n blocks");
        }
    }

    double blockwise = 0, direct = 0;
    check_rc(imlab_kl_block_both(n, a.data(), b.data(), c.data(), &blockwise, &direct));
    const double rel = std::abs(blockwise - direct) / std::max(std::abs(direct), 1e-15);

    Table t;
    t.add_column("n");
    t.add_column("kl_blockwise", true);
    t.add_column("kl_direct", true);
    t.add_column("rel_error");
    t.rows.push_back({static_cast<long long>(n), blockwise, direct, rel});
    emit(t, cfg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;

    // config file first, so flags can override it
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            cfg.config_path = argv[i + 1];
        } else if (arg.rfind("--config=", 0) == 0) {
            cfg.config_path = arg.substr(9);
        }
    }
    if (!cfg.config_path.empty()) apply_config_file(cfg, cfg.config_path);

    CLI::App app{"Numerical laboratory for Gaussian interference channels: "
                 "closed-form MI/MMSE sweeps, finite-blocklength estimation checks and rate regions"};
    app.require_subcommand(1);

    app.add_option("--config", cfg.config_path, "key=value config file (flags override)");
    app.add_option("--snr1", cfg.snr1, "SNR of the interfered-with user");
    app.add_option("--snr2", cfg.snr2, "SNR of the interfering user");
    app.add_option("--a", cfg.a, "interference gain");
    app.add_option("--snr-z", cfg.snr_z, "interferer SNR (MAC setting)");
    app.add_option("--snr3", cfg.snr3, "third-user SNR (cascade setting)");
    app.add_option("--a2", cfg.a2, "gain toward the first receiver (intermediate setting)");
    app.add_option("--a3", cfg.a3, "gain from the third transmitter (intermediate setting)");
    app.add_option("--gamma-min", cfg.gamma_min, "grid start");
    app.add_option("--gamma-max", cfg.gamma_max, "grid end");
    app.add_option("--steps", cfg.steps, "grid points (or random draws for incremental-check)");
    app.add_option("--n-list", cfg.n_list, "blocklengths for the experiments")->delimiter(',');
    app.add_option("--rate-fraction", cfg.rate_fraction, "codebook rate as a fraction of capacity");
    app.add_option("--samples", cfg.samples, "Monte Carlo samples");
    app.add_option("--seed", cfg.seed, "master seed");
    app.add_option("--order", cfg.order, "Gauss-Hermite quadrature order");
    app.add_option("--beta-steps", cfg.beta_steps, "points on the beta grid");
    app.add_option("--seeds", cfg.seeds, "codebooks per blocklength in the experiments");
    app.add_option("--threads", cfg.threads, "worker threads for Monte Carlo (0 = auto)");
    app.add_option("--snr", cfg.snr, "base SNR of the incremental split");
    app.add_option("--delta", cfg.delta, "SNR increment");
    auto* tol_opt = app.add_option("--tol", cfg.tol, "verification tolerance");
    app.add_option("--fd-step", cfg.h, "finite-difference base step");
    app.add_option("--n", cfg.n, "codebook blocklength (verify-immse source=codebook)");
    app.add_option("--rate", cfg.rate, "codebook rate in nats (verify-immse source=codebook)");
    app.add_option("--source", cfg.source, "verify-immse input: bpsk, pam4 or codebook");
    app.add_option("--region", cfg.region, "rate-region family: mac, cascade or intermediate");
    app.add_option("--matrix-file", cfg.matrix_file, "dense text blocks A, B, C for kl-block");
    app.add_option("--units", cfg.units, "nats or bits");
    app.add_option("--format", cfg.format, "csv or json");
    app.add_option("--out", cfg.out, "output path (stdout when omitted)");

    auto* sweep = app.add_subcommand("sweep-mi", "closed-form MI/MMSE sweep over the gamma grid");
    auto* verify = app.add_subcommand("verify-immse", "finite-difference derivative against half the MMSE");
    auto* incremental = app.add_subcommand("incremental-check", "SNR-increment identities, Gaussian instantiation");
    auto* eigs = app.add_subcommand("codebook-eigs", "codebook covariance spectral deviation by blocklength");
    auto* indep = app.add_subcommand("independence-bound", "Gaussian-surrogate MI of the cascade outputs");
    auto* region = app.add_subcommand("rate-region", "boundary rate points over the beta grid");
    auto* kl = app.add_subcommand("kl-block", "blockwise vs direct Gaussian KL divergence from a matrix file");
    for (auto* sc : {sweep, verify, incremental, eigs, indep, region, kl}) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    validate_common(cfg);

    if (app.got_subcommand(sweep)) return cmd_sweep_mi(cfg);
    if (app.got_subcommand(verify)) return cmd_verify_immse(cfg);
    if (app.got_subcommand(incremental)) return cmd_incremental_check(cfg, tol_opt->count() > 0);
    if (app.got_subcommand(eigs)) return cmd_codebook_eigs(cfg);
    if (app.got_subcommand(indep)) return cmd_independence_bound(cfg);
    if (app.got_subcommand(region)) return cmd_rate_region(cfg);
    if (app.got_subcommand(kl)) return cmd_kl_block(cfg);
    return kExitUsage;
}

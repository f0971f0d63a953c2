#include <deque>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qtomo/io.hpp"

namespace {

struct SubCtx {
    CLI::App* app = nullptr;
    std::string scenario;
    std::string config_path;
    std::string out_root = "out";
    std::vector<std::pair<std::string, std::string>> flags;  // key, raw value
};

void add_key(SubCtx& ctx, const std::string& key, const std::string& help) {
    auto cb = [&ctx, key](const std::string& v) { ctx.flags.emplace_back(key, v); };
    ctx.app->add_option_function<std::string>("--" + key, cb, help);
}

int run_ctx(const SubCtx& ctx) {
    qtomo::ConfigMap cfg;
    if (!ctx.config_path.empty()) cfg = qtomo::load_config(ctx.config_path);
    if (!ctx.scenario.empty()) cfg.set_default("scenario", ctx.scenario);
    for (const auto& [k, v] : ctx.flags) cfg.set_default(k, v);
    for (const auto& w : cfg.warnings()) std::cerr << "warning: " << w << '\n';
    qtomo::RunResult res = qtomo::run_scenario(cfg, ctx.out_root);
    std::cout << res.out_dir << '\n';
    for (const auto& p : res.products) std::cout << "  " << p.name << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tomographic analysis of continuous-variable, hybrid and spin states"};
    app.require_subcommand(1);
    std::deque<SubCtx> ctxs;

    auto make_sub = [&](const std::string& name, const std::string& desc) -> SubCtx& {
        ctxs.emplace_back();
        SubCtx& ctx = ctxs.back();
        ctx.scenario = name;
        ctx.app = app.add_subcommand(name, desc);
        ctx.app->add_option("--config", ctx.config_path, "key = value config file");
        ctx.app->add_option("--out", ctx.out_root, "output root directory")
            ->default_str("out");
        return ctx;
    };

    const std::vector<std::pair<std::string, std::string>> state_keys = {
        {"state", "single-mode recipe: coherent | pacs | fock"},
        {"alpha_re", "coherent amplitude, real part"},
        {"alpha_im", "coherent amplitude, imaginary part"},
        {"photon_added", "photon additions for pacs"},
        {"fock_n", "number-state index"},
        {"n_max", "single-mode truncation"},
    };
    const std::vector<std::pair<std::string, std::string>> bec_keys = {
        {"omega0", "two-well total-number frequency"},
        {"omega1", "two-well imbalance frequency"},
        {"U", "two-well interaction strength"},
        {"lambda", "two-well hopping strength"},
        {"alpha_a_re", "well-a amplitude, real part"},
        {"alpha_a_im", "well-a amplitude, imaginary part"},
        {"alpha_b_re", "well-b amplitude, real part"},
        {"alpha_b_im", "well-b amplitude, imaginary part"},
    };
    const std::vector<std::pair<std::string, std::string>> hq_keys = {
        {"chi_f", "field Kerr strength"},
        {"chi0", "atomic splitting"},
        {"g0", "field-atom coupling"},
        {"n_ph_dim", "photon-space dimension per field"},
        {"bell", "first atomic Bell pair: psi_plus | phi_plus"},
        {"bell2", "second atomic Bell pair (double_tc)"},
    };

    {
        SubCtx& c = make_sub("evolve", "evolve an initial state, write density.json");
        add_key(c, "system", "kerr_cubic | bec_well | nmr_spin | double_jc | double_tc");
        add_key(c, "t", "evolution time (suffixes: s, ms, us, ns, ps, fs, pi)");
        add_key(c, "chi1", "quadratic Kerr strength");
        add_key(c, "chi2", "cubic Kerr strength");
        add_key(c, "chi_s", "spin-chain coupling");
        add_key(c, "added_a", "photon additions on well a");
        add_key(c, "added_b", "photon additions on well b");
        for (const auto& [k, h] : state_keys) add_key(c, k, h);
        for (const auto& [k, h] : bec_keys) add_key(c, k, h);
        for (const auto& [k, h] : hq_keys) add_key(c, k, h);
    }
    {
        SubCtx& c = make_sub("tomogram", "render optical tomograms to CSV");
        add_key(c, "system", "kerr_cubic | bec_well");
        add_key(c, "gallery", "cubic: nine instants across one revival");
        add_key(c, "t", "evolution time");
        add_key(c, "chi1", "quadratic Kerr strength");
        add_key(c, "chi2", "cubic Kerr strength");
        add_key(c, "x_min", "quadrature grid lower edge");
        add_key(c, "x_max", "quadrature grid upper edge");
        add_key(c, "x_half", "half-width of the two-mode section grid");
        add_key(c, "n_x", "quadrature points");
        add_key(c, "n_theta", "tomogram angles");
        for (const auto& [k, h] : state_keys) add_key(c, k, h);
        for (const auto& [k, h] : bec_keys) add_key(c, k, h);
    }
    {
        SubCtx& c = make_sub("indicators", "entanglement indicator series");
        add_key(c, "system", "bec_well | double_jc | double_tc | nmr_spin");
        add_key(c, "t_list", "comma-separated instants (bec_well)");
        add_key(c, "xi_pairs", "averaging angles per quadrature");
        add_key(c, "n_instants", "series length (double_jc / double_tc)");
        add_key(c, "step_pi_units", "series step in units of pi/g0");
        add_key(c, "chi_st_max", "spin-chain series endpoint");
        add_key(c, "n_points", "spin-chain series length");
        add_key(c, "x_half", "quadrature half-width");
        add_key(c, "n_x", "quadrature points");
        add_key(c, "n_max", "per-mode truncation");
        for (const auto& [k, h] : bec_keys) add_key(c, k, h);
        for (const auto& [k, h] : hq_keys) add_key(c, k, h);
    }
    {
        SubCtx& c = make_sub("squeeze", "higher-order squeezing and entropic reports");
        add_key(c, "q_max", "highest squeezing order");
        add_key(c, "t", "Kerr evolution time before measuring");
        add_key(c, "chi1", "quadratic Kerr strength");
        add_key(c, "chi2", "cubic Kerr strength");
        add_key(c, "x_min", "quadrature grid lower edge");
        add_key(c, "x_max", "quadrature grid upper edge");
        add_key(c, "n_x", "quadrature points");
        for (const auto& [k, h] : state_keys) add_key(c, k, h);
    }
    {
        SubCtx& c = make_sub("sweep", "two-well eigenstate indicator sweep over omega1");
        add_key(c, "omega0", "total-number frequency");
        add_key(c, "U", "interaction strength");
        add_key(c, "lambda", "hopping strength");
        add_key(c, "omega1_min", "sweep start");
        add_key(c, "omega1_max", "sweep end");
        add_key(c, "omega1_step", "sweep step");
        add_key(c, "N_sector", "boson-number sector");
        add_key(c, "k_state", "eigenstate index within the sector");
        add_key(c, "xi_pairs", "averaging angles per quadrature");
        add_key(c, "x_half", "quadrature half-width");
        add_key(c, "n_x", "quadrature points");
    }
    {
        SubCtx& c = make_sub("timeseries", "delay embedding, Lyapunov estimate, spectrum");
        add_key(c, "series_file", "CSV of uniform samples (t,value)");
        add_key(c, "synth", "synthetic source: logistic");
        add_key(c, "r", "logistic parameter");
        add_key(c, "n", "sample count");
        add_key(c, "x0", "logistic seed value");
        add_key(c, "seed", "RNG seed");
        add_key(c, "d_max", "largest embedding dimension tried");
        add_key(c, "k_neighbors", "neighborhood size for local fits");
        add_key(c, "l_min", "shortest trajectory length");
        add_key(c, "l_max", "longest trajectory length");
        add_key(c, "l_step", "trajectory length step");
    }
    {
        SubCtx& c = make_sub("chrono", "frequency-comb chronocyclic tomograms");
        add_key(c, "omega_bar", "tooth spacing (rad/s; e.g. 19.2GHz_over_2pi)");
        add_key(c, "d_omega", "tooth width");
        add_key(c, "Omega_0", "pump offset");
        add_key(c, "d_Omega", "phase-matching bandwidth");
        add_key(c, "n_window", "teeth kept on each side of the pump");
        add_key(c, "t_min", "time-grid start");
        add_key(c, "t_max", "time-grid end");
        add_key(c, "n_t", "time-grid points");
    }
    {
        SubCtx& c = make_sub("ingest", "validate and re-emit a density matrix");
        add_key(c, "input", "density.json path");
    }
    {
        SubCtx& c = make_sub("run", "run whatever scenario the config file names");
        c.scenario.clear();
        c.app->get_option("--config")->required();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& ctx : ctxs)
            if (ctx.app->parsed()) return run_ctx(ctx);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

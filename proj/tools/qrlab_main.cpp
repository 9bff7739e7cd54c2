// qrlab: spectra, parity diagnostics, closed-form energies, and scaling
// curves for the quantum Rabi model with Ising-coupled auxiliary spins.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qrlab/acceptance.hpp"
#include "qrlab/displaced.hpp"
#include "qrlab/models.hpp"
#include "qrlab/scaling.hpp"
#include "qrlab/serialize.hpp"
#include "qrlab/spectra.hpp"

using namespace qrlab;

namespace {

std::vector<double> parse_doubles(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("E_USAGE", "cannot parse number '" + item + "' in " + flag);
        }
    }
    if (out.empty()) throw ValidationError("E_USAGE", flag + " needs at least one value");
    return out;
}

struct SweepSpec {
    std::string param;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    std::vector<double> grid() const {
        std::vector<double> g(count);
        for (int i = 0; i < count; ++i)
            g[i] = count == 1 ? start : start + (stop - start) * i / double(count - 1);
        return g;
    }
};

SweepSpec parse_sweep(const std::string& s) {
    // param=start:stop:count
    auto eq = s.find('=');
    if (eq == std::string::npos)
        throw ValidationError("E_USAGE", "sweep must look like lambda=0:1:51");
    SweepSpec sweep;
    sweep.param = s.substr(0, eq);
    std::string rest = s.substr(eq + 1);
    for (char& c : rest)
        if (c == ':') c = ',';
    auto parts = parse_doubles(rest, "--sweep");
    if (parts.size() != 3 || parts[2] < 1)
        throw ValidationError("E_USAGE", "sweep must look like lambda=0:1:51");
    sweep.start = parts[0];
    sweep.stop = parts[1];
    sweep.count = int(parts[2]);
    return sweep;
}

struct ModelFlags {
    std::string preset = "h2";
    int n_spins = 2;
    std::string delta = "0.01";
    std::string epsilon = "0.005";
    double eta = 0.0;
    double lambda = 0.0;
    double omega = 1.0;
    std::string axis = "xx";
    std::string cutoff = "auto";
    std::string config;
    long dim_limit = 4096;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
    cmd->add_option("--model", f.preset, "preset: h1 | h2 | h2b | star | chain");
    cmd->add_option("--n-spins", f.n_spins, "spin count for star/chain presets");
    cmd->add_option("--delta", f.delta, "tunneling, scalar or per-spin list");
    cmd->add_option("--epsilon", f.epsilon, "Ising strength, scalar or per-edge list");
    cmd->add_option("--eta", f.eta, "bias strength");
    cmd->add_option("--lambda", f.lambda, "spin-boson coupling");
    cmd->add_option("--omega", f.omega, "boson frequency (energy unit, default 1)");
    cmd->add_option("--axis", f.axis, "ising axis: xx | zz");
    cmd->add_option("--cutoff", f.cutoff, "Fock cutoff, integer or 'auto'");
    cmd->add_option("--config", f.config, "read the model from a key-value document instead");
    cmd->add_option("--dim-limit", f.dim_limit, "composite dimension guard");
}

IsingAxis parse_axis(const std::string& s) {
    if (s == "xx" || s == "XX") return IsingAxis::XX;
    if (s == "zz" || s == "ZZ") return IsingAxis::ZZ;
    throw ValidationError("E_USAGE", "--axis must be xx or zz");
}

ModelDocument make_model(const ModelFlags& f) {
    if (!f.config.empty()) return read_model_document_file(f.config);

    ModelDocument doc;
    ModelSpec& spec = doc.spec;
    const std::vector<double> deltas = parse_doubles(f.delta, "--delta");
    const std::vector<double> epsilons = parse_doubles(f.epsilon, "--epsilon");
    auto fit = [](std::vector<double> v, int n, const std::string& flag) {
        if (int(v.size()) == 1) return std::vector<double>(n, v[0]);
        if (int(v.size()) != n)
            throw ValidationError("E_USAGE", flag + " length does not match the model");
        return v;
    };

    if (f.preset == "h1") {
        spec.n_spins = 1;
        spec.bias = {f.eta};
    } else if (f.preset == "h2" || f.preset == "h2b") {
        spec.n_spins = 2;
        spec.ising_edges = {{1, 2, epsilons[0]}};
        spec.bias = {f.eta, 0.0};
    } else if (f.preset == "star") {
        spec.n_spins = f.n_spins;
        auto eps = fit(epsilons, f.n_spins - 1, "--epsilon");
        for (int k = 2; k <= f.n_spins; ++k) spec.ising_edges.push_back({1, k, eps[k - 2]});
        spec.bias.assign(f.n_spins, 0.0);
        spec.bias[0] = f.eta;
    } else if (f.preset == "chain") {
        spec.n_spins = f.n_spins;
        auto eps = fit(epsilons, f.n_spins - 1, "--epsilon");
        for (int k = 1; k < f.n_spins; ++k) spec.ising_edges.push_back({k, k + 1, eps[k - 1]});
        spec.bias.assign(f.n_spins, 0.0);
        spec.bias.back() = f.eta; // bias on the newest spin
    } else {
        throw ValidationError("E_USAGE", "unknown model preset '" + f.preset + "'");
    }
    spec.tunneling = fit(deltas, spec.n_spins, "--delta");
    spec.boson_freq = f.omega;
    spec.coupling = f.lambda;
    spec.ising_axis = parse_axis(f.axis);
    spec.validate();
    if (f.cutoff == "auto") {
        doc.cutoff = -1;
    } else {
        try {
            doc.cutoff = std::stoi(f.cutoff);
        } catch (const std::exception&) {
            throw ValidationError("E_USAGE", "--cutoff must be an integer or 'auto'");
        }
    }
    return doc;
}

void emit_text(const std::string& text, const std::string& output) {
    if (output.empty() || output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw ValidationError("E_IO", "cannot write " + output);
    out << text;
}

void emit(const Table& t, const std::string& output, const std::string& format) {
    std::ostringstream buf;
    if (format == "csv")
        write_csv(buf, t);
    else if (format == "json")
        write_json(buf, t);
    else
        throw ValidationError("E_USAGE", "--format must be csv or json");
    emit_text(buf.str(), output);
}

int pick_cutoff(const ModelSpec& spec, int requested, int k) {
    return requested >= 0 ? requested : auto_cutoff(spec, k);
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_spectrum(const ModelFlags& flags, const std::string& sweep_str, int k,
                 const std::string& output, const std::string& format) {
    ModelDocument doc = make_model(flags);
    SweepSpec sweep = parse_sweep(sweep_str);
    if (sweep.param != "lambda" && sweep.param != "eta" && sweep.param != "delta" &&
        sweep.param != "epsilon")
        throw ValidationError("E_USAGE",
                              "sweep parameter must be one of lambda, eta, delta, epsilon");
    std::vector<double> grid = sweep.grid();

    Table t;
    t.columns = {sweep.param};
    for (int i = 0; i < k; ++i) t.columns.push_back("e" + std::to_string(i));
    t.columns.push_back("cutoff");
    t.digest = doc.spec.digest() + " sweep=" + sweep_str + " k=" + std::to_string(k) +
               " cutoff=" + (doc.cutoff < 0 ? std::string("auto") : std::to_string(doc.cutoff));
    t.rows.resize(grid.size());

    BuildOptions build_opt{flags.dim_limit};
    parallel_for(grid.size(), [&](std::size_t i) {
        ModelSpec point = doc.spec;
        if (sweep.param == "lambda")
            point.coupling = grid[i];
        else if (sweep.param == "eta")
            point.bias[0] = grid[i];
        else if (sweep.param == "delta")
            point.tunneling.assign(point.n_spins, grid[i]);
        else
            for (auto& e : point.ising_edges) e.strength = grid[i];
        int cutoff = pick_cutoff(point, doc.cutoff, k);
        EigenOptions eig;
        eig.k = k;
        eig.digest = point.digest();
        Vec levels =
            eigendecompose(build_hamiltonian(point, BosonBasis{cutoff}, build_opt), eig)
                .eigenvalues;
        std::vector<double> row{grid[i]};
        for (int l = 0; l < k; ++l) row.push_back(levels[l]);
        row.push_back(double(cutoff));
        t.rows[i] = std::move(row);
    });
    emit(t, output, format);
    return 0;
}

int cmd_adiabatic(const ModelFlags& flags, const std::string& sweep_str, int m,
                  const std::string& output, const std::string& format) {
    SweepSpec sweep = parse_sweep(sweep_str);
    if (sweep.param != "lambda")
        throw ValidationError("E_USAGE", "adiabatic sweeps run over lambda");
    TwoSpinParams p;
    p.tunneling = parse_doubles(flags.delta, "--delta")[0];
    p.boson_freq = flags.omega;
    p.ising = parse_doubles(flags.epsilon, "--epsilon")[0];
    p.bias = flags.eta;

    Table t;
    t.columns = {"lambda", "e_m1_minus", "e_m1_plus", "e_m2_minus", "e_m2_plus"};
    t.digest = "adiabatic m=" + std::to_string(m) + " delta=" + fmt17(p.tunneling) +
               " epsilon=" + fmt17(p.ising) + " eta=" + fmt17(p.bias) +
               " omega=" + fmt17(p.boson_freq);
    for (double lambda : sweep.grid()) {
        p.coupling = lambda;
        auto e = adiabatic_energies(m, p);
        t.rows.push_back({lambda, e[0].energy, e[1].energy, e[2].energy, e[3].energy});
    }
    emit(t, output, format);
    return 0;
}

int cmd_parity(const ModelFlags& flags, const std::string& output) {
    ModelDocument doc = make_model(flags);
    int cutoff = pick_cutoff(doc.spec, doc.cutoff, 8);
    BosonBasis basis{cutoff};
    BuildOptions build_opt{flags.dim_limit};
    SymmetricOperator h = build_hamiltonian(doc.spec, basis, build_opt);
    SymmetricOperator p = build_parity(doc.spec.n_spins, basis);
    CommutatorNorms norms = commutator_norm(h, p);

    std::ostringstream out;
    out << "# " << doc.spec.digest() << " cutoff=" << cutoff << "\n";
    out << "h_frobenius = " << fmt17(h.frobenius()) << "\n";
    out << "commutator_frobenius = " << fmt17(norms.frobenius) << "\n";
    out << "commutator_spectral = " << fmt17(norms.spectral) << "\n";
    out << "commutator_frobenius_relative = " << fmt17(norms.frobenius / h.frobenius()) << "\n";
    if (doc.spec.parity_symmetric()) {
        EigenOptions eig;
        eig.digest = doc.spec.digest();
        Spectrum s = eigendecompose(h, eig);
        SectorReport report = parity_sectors(doc.spec, basis, s);
        out << "sector_plus = " << report.plus_count << "\n";
        out << "sector_minus = " << report.minus_count << "\n";
        out << "sector_clusters = " << report.cluster_count << "\n";
        out << "sector_min_abs_parity = " << fmt17(report.min_abs_parity) << "\n";
    }
    emit_text(out.str(), output);
    return 0;
}

int cmd_scaling(const ModelFlags& flags, double kappa, bool kappa_given,
                const std::string& beta_rel, bool analytic_only, const std::string& output,
                const std::string& format) {
    if (flags.preset == "chain")
        throw ValidationError("E_SPEC",
                              "scaling curves need a star family (no closed kappa for chains)");
    ModelFlags f = flags;
    f.lambda = 0.0;
    if (parse_axis(f.axis) != IsingAxis::XX)
        throw ValidationError("E_USAGE", "scaling curves use --axis xx");
    ModelDocument doc = make_model(f);
    if (kappa_given) {
        // bias derived from kappa = eta / (Delta - sum eps)
        doc.spec.bias.assign(doc.spec.n_spins, 0.0);
        doc.spec.bias[0] = kappa * (doc.spec.tunneling[0] - doc.spec.edge_sum());
    }
    double k = kappa_of(doc.spec);

    std::string rel = beta_rel;
    for (char& c : rel)
        if (c == ':') c = ',';
    auto parts = parse_doubles(rel, "--beta-rel");
    if (parts.size() != 3 || parts[2] < 1)
        throw ValidationError("E_USAGE", "--beta-rel must look like 0.5:1.5:41");

    ScalingOptions opt;
    opt.analytic_only = analytic_only;
    opt.force_cutoff = doc.cutoff; // -1 keeps per-row convergence
    ScalingCurve curve = scaling_curve(
        doc.spec, beta_grid_relative(beta_c_of(k), parts[0], parts[1], int(parts[2])), opt);
    emit(to_table(curve), output, format);
    return 0;
}

int cmd_converge(const ModelFlags& flags, const std::string& cutoffs_str, int k,
                 const std::string& output, const std::string& format) {
    ModelDocument doc = make_model(flags);
    std::vector<int> cutoffs;
    for (double c : parse_doubles(cutoffs_str, "--cutoffs")) cutoffs.push_back(int(c));
    ConvergenceTable table = converge_cutoff(doc.spec, cutoffs, k);

    Table t;
    t.columns = {"cutoff"};
    for (int i = 0; i < k; ++i) t.columns.push_back("e" + std::to_string(i));
    t.digest = doc.spec.digest() + " recommended=" +
               (table.recommended < 0 ? std::string("none") : std::to_string(table.recommended)) +
               (table.monotone ? "" : " NON-MONOTONE max_rise=" + fmt17(table.max_violation));
    for (std::size_t i = 0; i < table.cutoffs.size(); ++i) {
        std::vector<double> row{double(table.cutoffs[i])};
        for (int l = 0; l < k; ++l) row.push_back(table.levels[i][l]);
        t.rows.push_back(std::move(row));
    }
    emit(t, output, format);
    if (!table.monotone)
        throw NumericError("E_NONMONOTONE",
                           "levels rose with cutoff by " + fmt17(table.max_violation));
    if (table.recommended < 0)
        throw NumericError("E_NONCONVERGED", "no cutoff in the list converged");
    return 0;
}

int cmd_ion_map(const IonParams& params, const std::string& output) {
    ModelDocument doc;
    doc.spec = ion_param_map(params);
    doc.cutoff = -1;
    std::ostringstream out;
    write_model_document(out, doc);
    emit_text(out.str(), output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum Rabi model + Ising spectral laboratory"};
    app.require_subcommand(1);

    ModelFlags flags;
    std::string sweep, output, format = "csv", cutoffs_str, beta_rel = "0.5:1.5:41";
    int k = 4, adi_m = 0;
    double kappa = 0.0;
    bool analytic_only = false;

    auto* spectrum = app.add_subcommand("spectrum", "lowest-k levels over a parameter sweep");
    add_model_flags(spectrum, flags);
    spectrum->add_option("--sweep", sweep, "param=start:stop:count")->required();
    spectrum->add_option("--k", k, "levels per point");
    spectrum->add_option("--output,-o", output, "output path (default stdout)");
    spectrum->add_option("--format", format, "csv | json");

    auto* adiabatic = app.add_subcommand("adiabatic", "closed-form level quadruple vs lambda");
    add_model_flags(adiabatic, flags);
    adiabatic->add_option("--sweep", sweep, "lambda=start:stop:count")->required();
    adiabatic->add_option("--m", adi_m, "boson index of the quadruple");
    adiabatic->add_option("--output,-o", output, "output path (default stdout)");
    adiabatic->add_option("--format", format, "csv | json");

    auto* parity = app.add_subcommand("parity", "commutator norms and sector report");
    add_model_flags(parity, flags);
    parity->add_option("--output,-o", output, "output path (default stdout)");

    auto* scaling = app.add_subcommand("scaling", "ground-state magnetization scaling curve");
    add_model_flags(scaling, flags);
    auto* kappa_opt = scaling->add_option("--kappa", kappa, "target kappa (sets the bias)");
    scaling->add_option("--beta-rel", beta_rel, "beta grid relative to beta_c: r0:r1:count");
    scaling->add_flag("--analytic-only", analytic_only, "skip the numeric column");
    scaling->add_option("--output,-o", output, "output path (default stdout)");
    scaling->add_option("--format", format, "csv | json");

    auto* converge = app.add_subcommand("converge", "lowest-k levels across cutoffs");
    add_model_flags(converge, flags);
    converge->add_option("--cutoffs", cutoffs_str, "ascending cutoff list")->required();
    converge->add_option("--k", k, "levels tracked");
    converge->add_option("--output,-o", output, "output path (default stdout)");
    converge->add_option("--format", format, "csv | json");

    IonParams ion;
    auto* ion_map = app.add_subcommand("ion-map", "map trapped-ion drive parameters to a model");
    ion_map->add_option("--rabi", ion.rabi, "Rabi frequency")->required();
    ion_map->add_option("--detuning", ion.detuning, "laser detuning")->required();
    ion_map->add_option("--trap-freq", ion.trap_freq, "trap frequency")->required();
    ion_map->add_option("--lamb-dicke", ion.lamb_dicke, "Lamb-Dicke parameter")->required();
    ion_map->add_option("--splitting", ion.splitting, "auxiliary spin splitting")->required();
    ion_map->add_option("--ion-coupling", ion.ion_coupling, "spin-spin coupling")->required();
    ion_map->add_option("--output,-o", output, "output path (default stdout)");

    acceptance::Options accept;
    auto* verify = app.add_subcommand("verify", "run the full acceptance suite");
    verify->add_flag("--inject-d-sign-error", accept.inject_d_sign_error,
                     "fault hook: flip off-diagonal kernel signs");
    verify->add_option("--force-cutoff", accept.force_cutoff,
                       "fault hook: replace cutoff convergence");

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) return cmd_spectrum(flags, sweep, k, output, format);
        if (adiabatic->parsed()) return cmd_adiabatic(flags, sweep, adi_m, output, format);
        if (parity->parsed()) return cmd_parity(flags, output);
        if (scaling->parsed())
            return cmd_scaling(flags, kappa, !kappa_opt->empty(), beta_rel, analytic_only,
                               output, format);
        if (converge->parsed()) return cmd_converge(flags, cutoffs_str, k, output, format);
        if (ion_map->parsed()) return cmd_ion_map(ion, output);
        if (verify->parsed()) return acceptance::run_and_print(accept, std::cout);
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: E_INTERNAL: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

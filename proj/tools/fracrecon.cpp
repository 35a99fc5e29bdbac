#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fracrecon/bounds.hpp"
#include "fracrecon/error.hpp"
#include "fracrecon/format.hpp"
#include "fracrecon/pipeline.hpp"
#include "fracrecon/reference.hpp"
#include "fracrecon/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fracrecon;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitVerify = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Parse, "cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Parse, "cannot write '" + path.string() + "'");
    out << text;
}

struct Options {
    std::string scenario = "fip_ex82";
    double nu = 0.5;
    std::optional<double> gamma;
    double delta = 0.001;
    std::vector<std::string> noise;
    std::string obs;
    std::string out;
    std::string format;  // empty: the command's natural format
    bool four_decimals = false;
    PipelineSettings p;
    // fit
    double sigma = 1e-3;
    // table
    std::string kind = "fip";
    std::vector<double> nus;
    // bounds
    std::string ledger;
    bounds::BoundsConfig bc;
    std::string curve_out;
    double curve_eps = 0.1;
    // verify
    std::string suite = "all";
    // reference
    bool curve = false;
    // rerun
    std::string manifest;
    // list
    std::string show;
};

Scenario load(const Options& o) {
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), o.scenario) != names.end())
        return builtin(o.scenario, {o.nu, o.gamma});
    if (fs::exists(o.scenario)) return load_scenario(read_file(o.scenario));
    fail(ErrorCode::UnknownScenario, "'" + o.scenario + "' is neither a built-in name nor a readable file");
}

NoiseKind single_noise(const Options& o) {
    if (o.noise.size() > 1) fail(ErrorCode::Parse, "this command takes a single --noise value");
    return o.noise.empty() ? NoiseKind::FTN : noise_from_string(o.noise.front());
}

Observation observation(const Options& o, const Scenario& s) {
    if (!o.obs.empty()) return observation_from_csv(read_file(o.obs));
    return observe(s, uniform_times(o.p.K, o.p.tau), {single_noise(o), o.delta});
}

// Writes the primary output and, when it goes to a file, a manifest next to it.
class Emitter {
public:
    Emitter(const Options& o, std::vector<std::string> argv, std::string command)
        : out_(o.out), argv_(std::move(argv)) {
        manifest_ = {{"command", std::move(command)},
                     {"argv", argv_},
                     {"scenario", o.scenario},
                     {"nu", o.nu},
                     {"delta", o.delta},
                     {"noise", o.noise},
                     {"settings", o.p.to_json()},
                     {"determinism",
                      "no random state is used; rerunning this manifest reproduces every listed output byte for byte"},
                     {"outputs", json::array()}};
        if (o.gamma) manifest_["gamma"] = *o.gamma;
        if (!o.obs.empty()) manifest_["observation"] = o.obs;
    }

    json& manifest() { return manifest_; }

    std::string manifest_name() const { return out_.empty() ? "" : fs::path(out_).filename().string() + ".manifest.json"; }

    // Secondary outputs are only written when the primary output is a file.
    fs::path sibling(const std::string& suffix) const {
        fs::path p(out_);
        return p.parent_path() / (p.stem().string() + suffix);
    }

    bool to_file() const { return !out_.empty(); }

    void csv(const fs::path& path, const std::string& body) {
        write_file(path, "# manifest=" + manifest_name() + "\n" + body);
        manifest_["outputs"].push_back(path.string());
    }

    void json_file(const fs::path& path, json j) {
        j["manifest"] = manifest_name();
        write_file(path, j.dump(2) + "\n");
        manifest_["outputs"].push_back(path.string());
    }

    void primary_csv(const std::string& body) {
        if (!to_file()) {
            std::cout << body;
            return;
        }
        csv(out_, body);
    }

    void primary_json(json j) {
        if (!to_file()) {
            std::cout << j.dump(2) << "\n";
            return;
        }
        json_file(out_, std::move(j));
    }

    void finish() {
        if (!to_file()) return;
        const fs::path m = fs::path(out_).parent_path() / manifest_name();
        write_file(m, manifest_.dump(2) + "\n");
    }

private:
    std::string out_;
    std::vector<std::string> argv_;
    json manifest_;
};

int cmd_list(const Options& o, Emitter& e) {
    if (!o.show.empty()) {
        Options b = o;
        b.scenario = o.show;
        e.primary_json(serialize(load(b)));
        return 0;
    }
    json rows = json::array();
    std::string csv = "name,kind,default_gamma\n";
    for (const auto& n : builtin_names()) {
        const Scenario s = builtin(n, {o.nu, std::nullopt});
        const std::string kind = s.data.kind == ProblemKind::FIP ? "fip" : "sip";
        const std::string g = s.data.kernel_gamma ? shortest(*s.data.kernel_gamma) : "";
        rows.push_back({{"name", n}, {"kind", kind}, {"gamma", s.data.kernel_gamma ? json(*s.data.kernel_gamma) : json()}});
        csv += n + "," + kind + "," + g + "\n";
    }
    if (o.format == "csv")
        e.primary_csv(csv);
    else
        e.primary_json({{"scenarios", rows}});
    return 0;
}

int cmd_synth(const Options& o, Emitter& e) {
    const Scenario s = load(o);
    e.primary_csv(observation_to_csv(observation(o, s)));
    return 0;
}

int cmd_fit(const Options& o, Emitter& e) {
    const Scenario s = load(o);
    const Observation obs = observation(o, s);
    const TikhonovFit fit = tikhonov_fit(o.p.model(), obs, o.sigma);
    e.primary_json(to_json(fit));
    return 0;
}

int cmd_reconstruct(const Options& o, Emitter& e) {
    const Scenario s = load(o);
    const Observation obs = observation(o, s);
    CandidateGrid grid(o.p.K1, o.p.K2);
    const ReconstructionResult r = run_pipeline(s, obs, o.p, &grid);
    json j = to_json(r);
    j["scenario"] = s.name;
    j["truth"] = {s.truth.nu1, s.truth.second};
    if (o.format == "csv") {
        const std::string second = s.data.kind == ProblemKind::FIP ? "nu_istar" : "gamma";
        e.primary_csv("scenario,nu1," + second + ",sigma,t_bar\n" + s.name + "," + shortest(r.pair.nu1) + "," +
                      shortest(r.pair.second) + "," + shortest(r.sigma) + "," + shortest(r.t_bar) + "\n");
    } else {
        e.primary_json(j);
    }
    if (e.to_file()) e.csv(e.sibling(".grid.csv"), grid_to_csv(grid, o.p.quasiopt(s.data.kind)));
    return 0;
}

int cmd_table(const Options& o, Emitter& e) {
    const ProblemKind kind = o.kind == "sip" ? ProblemKind::SIP : ProblemKind::FIP;
    std::vector<NoiseKind> noises;
    for (const auto& n : o.noise) noises.push_back(noise_from_string(n));
    if (noises.empty()) noises = {NoiseKind::FTN, NoiseKind::STN, NoiseKind::TTN};
    std::vector<double> nus = o.nus;
    if (nus.empty()) {
        if (kind == ProblemKind::FIP)
            for (const auto& r : reference::kFip) nus.push_back(r.nu);
        else
            for (const auto& r : reference::kSip) nus.push_back(r.nu);
    }
    const auto cells = run_table(kind, o.delta, noises, nus, o.p);
    if (o.format == "csv")
        e.primary_csv(table_to_csv(kind, cells, o.four_decimals));
    else
        e.primary_json(table_to_json(kind, cells));
    return 0;
}

int cmd_bounds(const Options& o, Emitter& e) {
    const Scenario s = load(o);
    bounds::ConstantsLedger supplied;
    if (!o.ledger.empty()) supplied = bounds::ledger_from_json(json::parse(read_file(o.ledger)));
    bounds::BoundsConfig cfg = o.bc;
    cfg.lambda = o.p.lambda;
    cfg.mu = o.p.mu;
    const bounds::BoundsReport rep = bounds::compute_bounds(s, supplied, cfg);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    json j = to_json(rep);
    j["scenario"] = s.name;
    if (!o.curve_out.empty()) {
        const std::vector<double> grid = bounds::log_grid(cfg.t_star, 1e-10, 4);
        std::string csv = "which,t_a,delta,valid\n";
        const std::vector<int> which =
            s.data.kind == ProblemKind::FIP ? std::vector<int>{1, 2} : std::vector<int>{1, 3};
        for (int w : which) {
            const bounds::DeltaCurve c =
                bounds::empirical_delta(s, w, grid, w == 3 ? cfg.mu : cfg.lambda, o.curve_eps);
            for (const auto& p : c.points)
                csv += std::to_string(w) + "," + shortest(p.t_a) + "," + shortest(p.delta) + "," +
                       (p.valid ? "1" : "0") + "\n";
            j["delta_thresholds"][std::to_string(w)] = c.threshold ? json(*c.threshold) : json();
        }
        e.csv(o.curve_out, csv);
    }
    e.primary_json(j);
    return 0;
}

int cmd_verify(const Options& o, Emitter& e) {
    std::vector<std::string> suites;
    if (o.suite == "all")
        suites = verify::suite_names();
    else
        suites = {o.suite};
    json j = json::object();
    bool ok = true;
    for (const auto& name : suites) {
        const verify::SuiteResult r = verify::run(name);
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.summary << "\n";
        j[r.name] = {{"passed", r.passed}, {"summary", r.summary}, {"details", r.details}};
        ok = ok && r.passed;
    }
    j["passed"] = ok;
    e.primary_json(j);
    return ok ? 0 : kExitVerify;
}

int cmd_reference(const Options& o, Emitter& e) {
    if (o.curve) {
        e.primary_csv(verify::leading_order_curve_csv());
        return 0;
    }
    const verify::SuiteResult r = verify::leading_order_reference();
    if (o.format == "csv") {
        std::string csv = "nu1,nu1a,implied_t_a\n";
        for (const auto& row : r.details["reference"])
            csv += shortest(row["nu1"].get<double>()) + "," + shortest(row["nu1a"].get<double>()) + "," +
                   shortest(row["implied_t_a"].get<double>()) + "\n";
        e.primary_csv(csv);
    } else {
        e.primary_json(r.details);
    }
    return 0;
}

void add_scenario_opts(CLI::App* c, Options& o) {
    c->add_option("--scenario", o.scenario, "built-in name or scenario JSON path");
    c->add_option("--nu", o.nu, "order parameter of the built-in scenario");
    c->add_option("--gamma", o.gamma, "kernel exponent of the built-in scenario");
}

void add_obs_opts(CLI::App* c, Options& o) {
    c->add_option("--delta", o.delta, "noise level");
    c->add_option("--noise", o.noise, "ftn|stn|ttn|none")->delimiter(',');
    c->add_option("--K", o.p.K, "number of observation times");
    c->add_option("--tau", o.p.tau, "observation spacing");
    c->add_option("--obs", o.obs, "observation CSV instead of synthesis");
}

void add_algo_opts(CLI::App* c, Options& o) {
    c->add_option("--betas", o.p.betas, "power exponents of the regression basis")->delimiter(',');
    c->add_option("--jacobi-degree", o.p.jacobi_degree);
    c->add_option("--weight-a", o.p.weight_a);
    c->add_option("--sigma1", o.p.sigma1);
    c->add_option("--xi1", o.p.xi1);
    c->add_option("--K1", o.p.K1);
    c->add_option("--tbar1", o.p.tbar1);
    c->add_option("--xi2", o.p.xi2);
    c->add_option("--K2", o.p.K2);
    c->add_option("--upsilon", o.p.upsilon);
    c->add_option("--lambda", o.p.lambda);
    c->add_option("--mu", o.p.mu);
    c->add_option("--workers", o.p.workers, "grid evaluation threads (0: one per core)");
}

void add_out_opts(CLI::App* c, Options& o) {
    c->add_option("--out", o.out, "output file; a manifest is written next to it");
    c->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
}

int run(std::vector<std::string> args);

int cmd_rerun(const Options& o) {
    const json m = json::parse(read_file(o.manifest));
    return run(m.at("argv").get<std::vector<std::string>>());
}

int run(std::vector<std::string> args) {
    Options o;
    CLI::App app{"Fractional order reconstruction from integral observations"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "built-in scenarios");
    add_out_opts(list, o);
    list->add_option("--nu", o.nu);
    list->add_option("--gamma", o.gamma);
    list->add_option("--show", o.show, "print the JSON config of one scenario");

    auto* synth = app.add_subcommand("synth", "synthesize an observation CSV");
    add_scenario_opts(synth, o);
    add_obs_opts(synth, o);
    add_out_opts(synth, o);

    auto* fit = app.add_subcommand("fit", "Tikhonov fit for one regularization parameter");
    add_scenario_opts(fit, o);
    add_obs_opts(fit, o);
    add_algo_opts(fit, o);
    fit->add_option("--sigma", o.sigma, "regularization parameter");
    add_out_opts(fit, o);

    auto* rec = app.add_subcommand("reconstruct", "full reconstruction with quasi-optimal parameter choice");
    add_scenario_opts(rec, o);
    add_obs_opts(rec, o);
    add_algo_opts(rec, o);
    add_out_opts(rec, o);

    auto* table = app.add_subcommand("table", "reconstruct a whole table of built-in cases");
    table->add_option("--kind", o.kind)->check(CLI::IsMember({"fip", "sip"}));
    table->add_option("--delta", o.delta);
    table->add_option("--noise", o.noise)->delimiter(',');
    table->add_option("--nus", o.nus)->delimiter(',');
    table->add_option("--K", o.p.K);
    table->add_option("--tau", o.p.tau);
    add_algo_opts(table, o);
    table->add_flag("--four-decimals", o.four_decimals, "round estimates to four decimals");
    add_out_opts(table, o);

    auto* bnd = app.add_subcommand("bounds", "horizon estimates and constants ledger");
    add_scenario_opts(bnd, o);
    bnd->add_option("--ledger", o.ledger, "JSON file of supplied constants");
    bnd->add_option("--eps-I", o.bc.eps_I);
    bnd->add_option("--eps-II", o.bc.eps_II);
    bnd->add_option("--eps-III", o.bc.eps_III);
    bnd->add_option("--eps", o.bc.eps);
    bnd->add_option("--t-star", o.bc.t_star);
    bnd->add_option("--alpha", o.bc.alpha);
    bnd->add_option("--t-a", o.bc.t_a);
    bnd->add_option("--nu1a", o.bc.nu1a);
    bnd->add_option("--lambda", o.p.lambda);
    bnd->add_option("--mu", o.p.mu);
    bnd->add_option("--curve-out", o.curve_out, "write empirical pre-limit error curves to this CSV");
    bnd->add_option("--curve-eps", o.curve_eps);
    add_out_opts(bnd, o);

    auto* ver = app.add_subcommand("verify", "run verification suites");
    std::vector<std::string> suites = verify::suite_names();
    suites.push_back("all");
    ver->add_option("suite", o.suite)->check(CLI::IsMember(suites));
    add_out_opts(ver, o);

    auto* ref = app.add_subcommand("reference", "leading-order reference values for ex74");
    ref->add_flag("--curve", o.curve, "emit the closed-form curves instead");
    add_out_opts(ref, o);

    auto* rerun = app.add_subcommand("rerun", "repeat the run recorded in a manifest");
    rerun->add_option("manifest", o.manifest)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitInput;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub == rerun) return cmd_rerun(o);
    if (o.format.empty()) o.format = (sub == synth || sub == table || sub == ref) ? "csv" : "json";
    Emitter e(o, args, sub->get_name());
    int code = 0;
    if (sub == list) code = cmd_list(o, e);
    else if (sub == synth) code = cmd_synth(o, e);
    else if (sub == fit) code = cmd_fit(o, e);
    else if (sub == rec) code = cmd_reconstruct(o, e);
    else if (sub == table) code = cmd_table(o, e);
    else if (sub == bnd) code = cmd_bounds(o, e);
    else if (sub == ver) code = cmd_verify(o, e);
    else if (sub == ref) code = cmd_reference(o, e);
    e.finish();
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const json::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    }
}

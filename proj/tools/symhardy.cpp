// symhardy: command-line front end.
//
// Exit status: 0 ok, 1 analysis failure, 2 usage or input error,
// 3 numerical failure.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "symhardy/acceptance.hpp"
#include "symhardy/symhardy.hpp"

namespace sh = symhardy;
using sh::json;

namespace {

struct Options {
    std::string state;
    std::optional<int> n;
    std::optional<int> k;
    int d = 3;
    std::string functional = "hardy";
    std::string settings;
    bool json_out = false;
    std::uint64_t seed = 0;
    int restarts = 64;
    double tol_residual = sh::HardyTolerances{}.residual;
    double tol_cluster = sh::kDefaultClusterTol;
    bool identical = false;
    std::vector<int> criteria;
};

struct Input {
    sh::StateSpec spec;
    sh::SymmetricState state;
};

Input load_state(const Options& o) {
    if (o.state.empty()) {
        throw sh::ParseError("--state is required");
    }
    sh::StateSpec spec;
    if (std::filesystem::is_regular_file(o.state)) {
        spec = sh::parse_state_spec(sh::read_json_file(o.state));
    } else {
        sh::NamedSpec named{o.state, o.n, o.k};
        if (!named.n && o.state != "tetrahedron" && o.state != "d3plus") {
            throw sh::ParseError("named state '" + o.state + "' needs --n");
        }
        spec.value = named;
    }
    auto state = sh::to_state(spec);
    return {spec, state};
}

sh::BellFunctional make_functional(const Options& o, int n) {
    if (o.functional == "hardy") {
        return sh::hardy_functional(n);
    }
    if (o.functional == "persistence") {
        return sh::persistence_functional(n, o.d);
    }
    throw sh::ParseError("--functional must be hardy or persistence");
}

json functional_json(const sh::BellFunctional& f, const Options& o) {
    json terms = json::array();
    for (const auto& t : f.terms) {
        terms.push_back({{"coefficient", t.coefficient},
                         {"parties", t.parties},
                         {"settings", sh::to_string(t.settings)},
                         {"outcomes", sh::to_string(t.outcomes)}});
    }
    return {{"name", o.functional}, {"n", f.n}, {"d", o.functional == "persistence" ? json(o.d) : json()},
            {"terms", terms}};
}

json empty_report(const std::string& command, const Options& o) {
    return {{"command", command},
            {"input", nullptr},
            {"state", nullptr},
            {"spectrum", nullptr},
            {"branch", nullptr},
            {"measurements", nullptr},
            {"conditions", nullptr},
            {"bell_values", nullptr},
            {"lhv", nullptr},
            {"optimizer", nullptr},
            {"dicke_theta", nullptr},
            {"acceptance", nullptr},
            {"tool_version", sh::kVersion},
            {"seed", o.seed},
            {"tolerances", {{"residual", o.tol_residual}, {"cluster", o.tol_cluster}}}};
}

std::string angles(const sh::PureQubit& q) {
    const auto [t, p] = q.angles();
    std::ostringstream os;
    os << std::setprecision(10) << "(theta " << t << ", phi " << p << ")";
    return os.str();
}

void print_spectrum(std::ostream& os, const sh::MajoranaSpectrum& s) {
    os << "Majorana points (n = " << s.n << "):\n";
    for (const auto& c : s.clusters) {
        os << "  deg " << c.degeneracy << "  " << angles(c.point) << "\n";
    }
    os << "degeneracy profile:";
    for (int d : sh::degeneracy_profile(s)) {
        os << " " << d;
    }
    os << "\n";
}

void print_state(std::ostream& os, const sh::SymmetricState& s) {
    os << "Dicke coefficients (n = " << s.n() << "):\n" << std::setprecision(15);
    for (int k = 0; k <= s.n(); ++k) {
        os << "  c_" << k << " = " << s.coeff(k).real() << (s.coeff(k).imag() < 0 ? " - " : " + ")
           << std::abs(s.coeff(k).imag()) << "i\n";
    }
}

int cmd_majorana(const Options& o, json& rep, std::ostream& os) {
    const auto in = load_state(o);
    rep["input"] = sh::to_json(in.spec);
    rep["state"] = sh::state_json(in.state);
    const auto sp = sh::state_to_points(in.state, o.tol_cluster);
    rep["spectrum"] = sh::to_json(sp);
    print_spectrum(os, sp);
    return 0;
}

int cmd_reconstruct(const Options& o, json& rep, std::ostream& os) {
    const auto in = load_state(o);
    rep["input"] = sh::to_json(in.spec);
    rep["state"] = sh::state_json(in.state);
    print_state(os, in.state);
    return 0;
}

int cmd_hardy(const Options& o, json& rep, std::ostream& os) {
    const auto in = load_state(o);
    const int n = in.state.n();
    rep["input"] = sh::to_json(in.spec);
    rep["state"] = sh::state_json(in.state);
    rep["spectrum"] = sh::to_json(sh::state_to_points(in.state, o.tol_cluster));
    const auto m = sh::construct_hardy_measurements(in.state, {o.tol_residual, o.tol_cluster});
    const auto r = sh::check_hardy_conditions(in.state, m, o.tol_residual);
    rep["branch"] = sh::to_string(m.branch);
    rep["measurements"] = {{"setting0", sh::to_json(m.setting0)},
                           {"setting1", sh::to_json(m.setting1)},
                           {"anchor_mp", sh::to_json(m.anchor_mp)},
                           {"new_mp", sh::to_json(m.new_mp)},
                           {"theta", m.theta ? json(*m.theta) : json()}};
    rep["conditions"] = {{"p1", r.p1},
                         {"max_p2_residual", r.max_p2_residual},
                         {"p5_residual", r.p5_residual},
                         {"satisfied", r.satisfied}};
    const auto settings = m.settings(n);
    const double pv = sh::evaluate_functional(in.state, sh::hardy_functional(n), settings);
    json bv{{"hardy", pv}, {"persistence", nullptr}, {"d", nullptr}};
    if (n >= 3 && o.d >= 2 && o.d <= n - 1) {
        bv["persistence"] = sh::evaluate_functional(in.state, sh::persistence_functional(n, o.d), settings);
        bv["d"] = o.d;
    }
    rep["bell_values"] = bv;

    os << "branch: " << sh::to_string(m.branch) << "\n";
    if (m.theta) {
        os << "theta: " << std::setprecision(12) << *m.theta << "\n";
    }
    os << "setting 0: outcome 0 " << angles(m.setting0.outcome0) << "\n";
    os << "setting 1: outcome 0 " << angles(m.setting1.outcome0) << "\n";
    os << std::setprecision(6) << "p1 = " << r.p1 << ", max single-flip = " << r.max_p2_residual
       << ", all-ones = " << r.p5_residual << "\n";
    os << "Hardy conditions satisfied: " << (r.satisfied ? "yes" : "no") << "\n";
    os << "P^" << n << " = " << pv << "\n";
    return 0;
}

int cmd_bell(const Options& o, json& rep, std::ostream& os) {
    const auto in = load_state(o);
    const int n = in.state.n();
    if (o.settings.empty()) {
        throw sh::ParseError("--settings is required");
    }
    const auto settings = sh::parse_settings(sh::read_json_file(o.settings), n);
    const auto f = make_functional(o, n);
    const double v = sh::evaluate_functional(in.state, f, settings);
    rep["input"] = {{"state", sh::to_json(in.spec)}, {"functional", functional_json(f, o)}};
    rep["state"] = sh::state_json(in.state);
    rep["measurements"] = {{"parties", sh::to_json(settings)}};
    rep["bell_values"] = {{o.functional, v}, {"d", o.functional == "persistence" ? json(o.d) : json()}};
    os << o.functional << " value = " << std::setprecision(12) << v << "\n";
    return 0;
}

int cmd_lhv(const Options& o, json& rep, std::ostream& os) {
    if (!o.n) {
        throw sh::ParseError("--n is required");
    }
    const auto f = make_functional(o, *o.n);
    const auto r = sh::lhv_max(f);
    json witness = json::array();
    std::string w;
    for (int i = 0; i < f.n; ++i) {
        const std::string resp = std::to_string(r.witness.response(i, 0)) + std::to_string(r.witness.response(i, 1));
        witness.push_back({{"setting0", r.witness.response(i, 0)}, {"setting1", r.witness.response(i, 1)}});
        w += " " + resp;
    }
    rep["input"] = {{"functional", functional_json(f, o)}};
    rep["lhv"] = {{"value", r.value}, {"witness", witness}};
    os << "LHV maximum = " << r.value << "\nwitness (outcome on setting 0, setting 1 per party):" << w << "\n";
    return 0;
}

int cmd_optimize(const Options& o, json& rep, std::ostream& os) {
    const auto in = load_state(o);
    const int n = in.state.n();
    const auto f = make_functional(o, n);
    sh::OptimizationConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.identical_settings = o.identical;
    const auto r = sh::optimize_settings(in.state, f, cfg);
    json trace = json::array();
    for (const auto& t : r.trace) {
        trace.push_back(json::array({t.iteration, t.value}));
    }
    rep["input"] = {{"state", sh::to_json(in.spec)}, {"functional", functional_json(f, o)}};
    rep["state"] = sh::state_json(in.state);
    rep["measurements"] = {{"parties", sh::to_json(r.best_settings)}};
    rep["bell_values"] = {{o.functional, r.best_value}, {"d", o.functional == "persistence" ? json(o.d) : json()}};
    rep["optimizer"] = {{"best_value", r.best_value},
                        {"restarts", cfg.restarts},
                        {"identical_settings", cfg.identical_settings},
                        {"converged", r.converged},
                        {"restart_values", r.restart_values},
                        {"trace", trace}};
    const auto [lo, hi] = std::minmax_element(r.restart_values.begin(), r.restart_values.end());
    os << "best found " << o.functional << " value = " << std::setprecision(10) << r.best_value << "\n";
    os << "restart values in [" << *lo << ", " << *hi << "] over " << cfg.restarts << " restarts\n";
    os << "(a lower bound on the quantum maximum, not a certificate)\n";
    return 0;
}

int cmd_dicke_theta(const Options& o, json& rep, std::ostream& os) {
    if (!o.n || !o.k) {
        throw sh::ParseError("--n and --k are required");
    }
    const auto r = sh::dicke_theta_search(*o.n, *o.k);
    const auto roots = sh::closed_form_thetas(*o.n, *o.k);
    rep["input"] = {{"n", *o.n}, {"k", *o.k}};
    rep["dicke_theta"] = {{"theta_star", r.theta},
                          {"rescaled_value", r.value},
                          {"bell_value", r.value * sh::binomial(*o.n, *o.k)},
                          {"closed_form_thetas", roots}};
    os << std::setprecision(12) << "theta* = " << r.theta << "\nP'(n,k,theta*) = " << r.value << "\n";
    os << "closed-form roots:";
    for (double t : roots) {
        os << " " << t;
    }
    os << (roots.empty() ? " none\n" : "\n");
    return 0;
}

int cmd_reproduce(const Options& o, json& rep, std::ostream& os) {
    const auto results = sh::acceptance::run(o.criteria);
    json rows = json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        os << std::setw(2) << r.id << "  " << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "\n      "
           << r.detail << "\n";
    }
    rep["acceptance"] = rows;
    return all ? 0 : 1;
}

void add_state_flags(CLI::App* c, Options& o) {
    c->add_option("--state", o.state, "state name (ghz, w, dicke, tetrahedron, d3plus) or JSON spec path");
    c->add_option("--n", o.n, "number of qubits");
    c->add_option("--k", o.k, "excitations for dicke");
}

void add_functional_flags(CLI::App* c, Options& o) {
    c->add_option("--functional", o.functional, "hardy or persistence")
        ->check(CLI::IsMember({"hardy", "persistence"}));
    c->add_option("--d", o.d, "degeneracy for the persistence functional");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocality of permutation-symmetric qubit states"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json_out, "machine-readable output");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--tol-residual", o.tol_residual, "probability residual tolerance");
    app.add_option("--tol-cluster", o.tol_cluster, "Majorana clustering tolerance");

    struct Sub {
        const char* name;
        const char* help;
        int (*run)(const Options&, json&, std::ostream&);
    };
    const std::vector<Sub> subs{
        {"majorana", "Majorana points and degeneracy profile", cmd_majorana},
        {"reconstruct", "Dicke coefficients of a state spec", cmd_reconstruct},
        {"hardy", "construct Hardy measurements and check the conditions", cmd_hardy},
        {"bell", "evaluate a Bell functional for given settings", cmd_bell},
        {"lhv", "LHV maximum of a functional by enumeration", cmd_lhv},
        {"optimize", "search measurement settings", cmd_optimize},
        {"dicke-theta", "best theta for S(n,k) and closed-form roots", cmd_dicke_theta},
        {"reproduce", "run the reproduction suite", cmd_reproduce},
    };
    std::vector<CLI::App*> apps;
    for (const auto& s : subs) {
        CLI::App* c = app.add_subcommand(s.name, s.help);
        // global flags are also accepted after the subcommand
        c->fallthrough();
        apps.push_back(c);
    }
    for (auto* c : apps) {
        const std::string nm = c->get_name();
        if (nm != "lhv" && nm != "dicke-theta" && nm != "reproduce") {
            add_state_flags(c, o);
        } else if (nm != "reproduce") {
            c->add_option("--n", o.n, "number of qubits");
            if (nm == "dicke-theta") {
                c->add_option("--k", o.k, "excitations");
            }
        }
        if (nm == "bell" || nm == "lhv" || nm == "optimize" || nm == "hardy") {
            if (nm == "hardy") {
                c->add_option("--d", o.d, "degeneracy for the persistence functional");
            } else {
                add_functional_flags(c, o);
            }
        }
        if (nm == "bell") {
            c->add_option("--settings", o.settings, "JSON settings file");
        }
        if (nm == "optimize") {
            c->add_option("--restarts", o.restarts, "number of random starts");
            c->add_flag("--identical-settings", o.identical, "same two bases for every party");
        }
        if (nm == "reproduce") {
            c->add_option("--criterion", o.criteria, "run only these criteria (repeatable)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::size_t which = 0;
    while (!apps[which]->parsed()) {
        ++which;
    }
    json rep = empty_report(subs[which].name, o);
    std::ostringstream text;
    int status = 0;
    try {
        status = subs[which].run(o, rep, text);
    } catch (const sh::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sh::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sh::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const sh::AnalysisError& e) {
        std::cerr << "analysis: " << e.what() << "\n";
        return 1;
    } catch (const sh::ResourceError& e) {
        std::cerr << "analysis: " << e.what() << "\n";
        return 1;
    }
    if (o.json_out) {
        std::cout << rep.dump(2) << "\n";
    } else {
        std::cout << text.str();
    }
    return status;
}

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dtvmono/elliptic.hpp"
#include "dtvmono/errors.hpp"
#include "dtvmono/heun.hpp"
#include "dtvmono/hill.hpp"
#include "dtvmono/index.hpp"
#include "dtvmono/painleve.hpp"
#include "dtvmono/premodular.hpp"
#include "dtvmono/universal.hpp"

using dtv::cplx;
using dtv::DTVIndex;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------- parsing

/// Complex literal "a+bi" with optional sign on either part; plain "a" and
/// pure-imaginary "bi" (also "i", "-i") are accepted.
cplx parse_complex(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw std::invalid_argument("empty complex literal");

    auto to_double = [](const std::string& part) {
        if (part == "" || part == "+") return 1.0;
        if (part == "-") return -1.0;
        size_t used = 0;
        const double v = std::stod(part, &used);
        if (used != part.size())
            throw std::invalid_argument("trailing characters in number '" + part + "'");
        return v;
    };

    if (t.back() != 'i') return {to_double(t), 0.0};
    t.pop_back();
    size_t split = std::string::npos;
    for (size_t k = t.size(); k-- > 1;) {
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, to_double(t)};
    return {to_double(t.substr(0, split)), to_double(t.substr(split))};
}

DTVIndex parse_index(const std::string& text) {
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(std::stoi(item));
    if (parts.size() != 4)
        throw std::invalid_argument("index must be four comma-separated integers");
    return {parts[0], parts[1], parts[2], parts[3]};
}

dtv::ScanWindow parse_window(const std::string& text, double step) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
    if (parts.size() != 4)
        throw std::invalid_argument("window must be re_min:re_max:im_min:im_max");
    return {parts[0], parts[1], parts[2], parts[3], step};
}

// ---------------------------------------------------------------- output

std::string num(double v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

json cjson(cplx z) { return json{{"im", z.imag()}, {"re", z.real()}}; }

std::string iso_utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Common {
    double accuracy = 1e-12;
    std::string format = "json";
    std::string out;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--accuracy", c.accuracy, "Target accuracy for the series engine")
        ->envname("DTVMONO_ACCURACY")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", c.format, "Output format")
        ->envname("DTVMONO_FORMAT")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", c.out, "Output path (default: stdout)")->envname("DTVMONO_OUT");
}

void write_text(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + c.out + "'");
    f << text;
}

json envelope(const char* command, const Common& c, json config) {
    config["accuracy"] = c.accuracy;
    config["format"] = c.format;
    config["out"] = c.out.empty() ? "-" : c.out;
    return json{{"command", command},
                {"config", std::move(config)},
                {"timestamp", iso_utc_now()},
                {"version", kVersion}};
}

/// CSV artifacts carry the config echo as '#' comment lines; they have no
/// timestamp, so identical runs are byte-identical.
std::string csv_preamble(const char* command, const Common& c, const json& config) {
    std::string s;
    s += "# version=" + std::string(kVersion) + "\n";
    s += "# command=" + std::string(command) + "\n";
    s += "# accuracy=" + num(c.accuracy) + "\n";
    for (auto it = config.begin(); it != config.end(); ++it) {
        s += "# " + it.key() + "=";
        if (it.value().is_string())
            s += it.value().get<std::string>();
        else
            s += it.value().dump();
        s += "\n";
    }
    return s;
}

// ---------------------------------------------------------------- helpers

cplx nearest_image(cplx q, cplx anchor, cplx tau) {
    cplx best = q;
    double best_d = std::abs(q - anchor);
    for (int sign : {1, -1})
        for (int m1 = -2; m1 <= 2; ++m1)
            for (int m2 = -2; m2 <= 2; ++m2) {
                const cplx cand = double(sign) * q + double(m1) + double(m2) * tau;
                if (std::abs(cand - anchor) < best_d) {
                    best_d = std::abs(cand - anchor);
                    best = cand;
                }
            }
    return best;
}

struct SolutionKind {
    DTVIndex flow_index;  // Hamiltonian / parameter index
    DTVIndex pole_form;   // catalog form whose zeros are the tau-poles
};

SolutionKind solution_kind(const std::string& name) {
    if (name == "hitchin") return {{0, 0, 0, 0}, {1, 0, 0, 0}};
    if (name == "n1000") return {{1, 0, 0, 0}, {2, 0, 0, 0}};
    throw std::invalid_argument("unknown solution '" + name + "'");
}

cplx solution_value(const SolutionKind& kind, cplx r, cplx s, const dtv::ModularParam& mp) {
    return dtv::pvi_point(kind.flow_index, r, s, mp).wp_p;
}

// ---------------------------------------------------------------- commands

int cmd_invariants(const Common& c, const std::string& tau_text) {
    const cplx tau = parse_complex(tau_text);
    dtv::ModularParam mp(tau, c.accuracy);
    const dtv::LatticeInvariants& inv = dtv::lattice_invariants(mp);

    if (c.format == "csv") {
        const json config{{"tau", tau_text}};
        std::string s = csv_preamble("invariants", c, config);
        s += "quantity,re,im\n";
        auto row = [&](const char* name, cplx v) {
            s += std::string(name) + "," + num(v.real()) + "," + num(v.imag()) + "\n";
        };
        row("tau", tau);
        row("e1", inv.e1);
        row("e2", inv.e2);
        row("e3", inv.e3);
        row("eta1", inv.eta1);
        row("eta2", inv.eta2);
        row("eta3", inv.eta3);
        row("g2", inv.g2);
        row("g3", inv.g3);
        s += "legendre_residual," + num(inv.legendre_residual) + ",0\n";
        write_text(c, s);
        return 0;
    }

    json doc = envelope("invariants", c, json{{"tau", tau_text}});
    doc["tau"] = cjson(tau);
    doc["invariants"] = {
        {"e1", cjson(inv.e1)},       {"e2", cjson(inv.e2)},   {"e3", cjson(inv.e3)},
        {"eta1", cjson(inv.eta1)},   {"eta2", cjson(inv.eta2)}, {"eta3", cjson(inv.eta3)},
        {"g2", cjson(inv.g2)},       {"g3", cjson(inv.g3)},
        {"legendre_residual", inv.legendre_residual}};
    doc["truncation_order"] = mp.truncation_order();
    write_text(c, doc.dump(2) + "\n");
    return 0;
}

int cmd_scan_zeros(const Common& c, const std::string& n_text, const std::string& r_text,
                   const std::string& s_text, const std::string& window_text, double step) {
    const DTVIndex n = parse_index(n_text);
    const cplx r = parse_complex(r_text);
    const cplx s = parse_complex(s_text);
    const dtv::ScanWindow window = parse_window(window_text, step);
    const dtv::ZCatalogForm& form = dtv::catalog_form(n);
    const auto zeros = dtv::scan_zeros(form, r, s, window);

    const json config{{"n", to_string(n)},     {"r", r_text},       {"s", s_text},
                      {"window", window_text}, {"step", step}};
    if (c.format == "csv") {
        std::string text = csv_preamble("scan-zeros", c, config);
        text += "tau_re,tau_im,residual,derivative_magnitude,newton_iterations\n";
        for (const auto& z : zeros)
            text += num(z.tau_star.real()) + "," + num(z.tau_star.imag()) + "," +
                    num(z.residual) + "," + num(z.derivative_magnitude) + "," +
                    std::to_string(z.newton_iterations) + "\n";
        write_text(c, text);
        return 0;
    }

    json doc = envelope("scan-zeros", c, config);
    doc["n"] = to_string(n);
    doc["r"] = cjson(r);
    doc["s"] = cjson(s);
    doc["zeros"] = json::array();
    for (const auto& z : zeros)
        doc["zeros"].push_back({{"tau", cjson(z.tau_star)},
                                {"residual", z.residual},
                                {"derivative_magnitude", z.derivative_magnitude},
                                {"newton_iterations", z.newton_iterations}});
    write_text(c, doc.dump(2) + "\n");
    return 0;
}

int cmd_monodromy(const Common& c, const std::string& n_text, const std::string& b_text,
                  const std::string& tau_text) {
    const DTVIndex n = parse_index(n_text);
    const cplx B = parse_complex(b_text);
    const cplx tau = parse_complex(tau_text);
    dtv::ModularParam mp(tau, c.accuracy);

    const dtv::MonodromyPair pair = dtv::monodromy_ode(n, B, mp);
    const cplx tr1 = pair.M1[0] + pair.M1[3];
    const cplx tr2 = pair.M2[0] + pair.M2[3];
    dtv::Mat2 comm{};
    const dtv::Mat2 ab = dtv::mat_mul(pair.M1, pair.M2);
    const dtv::Mat2 ba = dtv::mat_mul(pair.M2, pair.M1);
    for (size_t k = 0; k < 4; ++k) comm[k] = ab[k] - ba[k];
    const auto extracted = dtv::extract_rs(pair);

    const json config{{"n", to_string(n)}, {"B", b_text}, {"tau", tau_text}};
    json doc = envelope("monodromy", c, config);
    doc["n"] = to_string(n);
    doc["B"] = cjson(B);
    doc["tau"] = cjson(tau);
    doc["trace1"] = cjson(tr1);
    doc["trace2"] = cjson(tr2);
    doc["residuals"] = {{"det1", std::abs(dtv::mat_det(pair.M1) - 1.0)},
                        {"det2", std::abs(dtv::mat_det(pair.M2) - 1.0)},
                        {"commutator", dtv::mat_norm(comm)}};
    if (const auto* cls = std::get_if<dtv::MonodromyClass>(&extracted)) {
        doc["reducible"] = false;
        doc["r"] = cjson(cls->r);
        doc["s"] = cjson(cls->s);
    } else {
        const auto& red = std::get<dtv::NotCompletelyReducible>(extracted);
        doc["reducible"] = true;
        doc["r"] = nullptr;
        doc["s"] = nullptr;
        doc["eps1"] = red.eps1;
        doc["eps2"] = red.eps2;
    }
    write_text(c, doc.dump(2) + "\n");
    return 0;
}

int cmd_universal_check(const Common& c, const std::string& n_text, const std::string& r_text,
                        const std::string& s_text, const std::string& tau_text, double step) {
    const DTVIndex n = parse_index(n_text);
    const cplx r = parse_complex(r_text);
    const cplx s = parse_complex(s_text);
    const cplx tau_guess = parse_complex(tau_text);

    const dtv::CorrespondencePoint point = dtv::tau_B_of_rs(n, r, s, tau_guess);
    const dtv::JacobianReport jac = dtv::jacobian_rs(n, r, s, tau_guess, step);

    const json config{{"n", to_string(n)}, {"r", r_text}, {"s", s_text},
                      {"tau", tau_text},   {"step", step}};
    json doc = envelope("universal-check", c, config);
    doc["n"] = to_string(n);
    doc["r"] = cjson(r);
    doc["s"] = cjson(s);
    doc["point"] = {{"tau_star", cjson(point.tau_star)},
                    {"B", cjson(point.B)},
                    {"residual_Z", point.residual_Z},
                    {"residual_mono", point.residual_mono}};
    doc["jacobian"] = {{"tau_r", cjson(jac.tau_r)}, {"tau_s", cjson(jac.tau_s)},
                       {"B_r", cjson(jac.B_r)},     {"B_s", cjson(jac.B_s)},
                       {"det", cjson(jac.det)},     {"law_error", jac.law_error}};
    doc["eight_pi_sq"] = 8.0 * kPi * kPi;
    write_text(c, doc.dump(2) + "\n");
    return 0;
}

int cmd_pvi_check(const Common& c, const std::string& solution, const std::string& r_text,
                  const std::string& s_text, const std::string& tau_text,
                  const std::string& window_text, double step) {
    const SolutionKind kind = solution_kind(solution);
    const cplx r = parse_complex(r_text);
    const cplx s = parse_complex(s_text);
    const cplx tau = parse_complex(tau_text);

    const json config{{"solution", solution}, {"r", r_text}, {"s", s_text},
                      {"tau", tau_text},      {"window", window_text}, {"step", step}};

    if (c.format == "csv") {
        // trajectory of the Hamiltonian flow from (re_min, im_min) to
        // (re_max, im_max), seeded from the closed form at the start point
        const dtv::ScanWindow w = parse_window(window_text, step);
        const cplx tau0(w.re_min, w.im_min);
        const cplx tau1(w.re_max, w.im_max);
        dtv::ModularParam mp0(tau0, c.accuracy);
        const cplx p0 = dtv::pvi_point(kind.flow_index, r, s, mp0).p.reduced;
        const double h = 1e-5;
        auto p_at = [&](cplx t) {
            dtv::ModularParam mp(t);
            const cplx q =
                dtv::wp_inverse(solution_value(kind, r, s, mp), mp).reduced;
            return nearest_image(q, p0, t);
        };
        const cplx pdot = (p_at(tau0 + h) - p_at(tau0 - h)) / (2.0 * h);
        const cplx A0 = 0.5 * (4.0 * kPi * cplx(0.0, 1.0) * pdot +
                               dtv::zeta(2.0 * p0, mp0) - 2.0 * p0 * mp0.eta1());
        const auto flow = dtv::hamiltonian_flow(kind.flow_index, p0, A0, tau0, tau1, 33);

        std::string text = csv_preamble("pvi-check", c, config);
        text += "tau_re,tau_im,p_re,p_im,A_re,A_im,B_re,B_im\n";
        for (const auto& sample : flow)
            text += num(sample.tau.real()) + "," + num(sample.tau.imag()) + "," +
                    num(sample.p.real()) + "," + num(sample.p.imag()) + "," +
                    num(sample.A.real()) + "," + num(sample.A.imag()) + "," +
                    num(sample.B.real()) + "," + num(sample.B.imag()) + "\n";
        write_text(c, text);
        return 0;
    }

    const double residual = dtv::epvi_residual(
        [&](cplx t) {
            dtv::ModularParam mp(t, c.accuracy);
            return solution_value(kind, r, s, mp);
        },
        dtv::epvi_params(kind.flow_index), tau, step);

    const dtv::ScanWindow w = parse_window(window_text, 0.1);
    const auto zeros = dtv::scan_zeros(dtv::catalog_form(kind.pole_form), r, s, w);

    json doc = envelope("pvi-check", c, config);
    doc["solution"] = solution;
    doc["r"] = cjson(r);
    doc["s"] = cjson(s);
    doc["tau"] = cjson(tau);
    doc["residual"] = residual;
    doc["poles_found"] = json::array();
    for (const auto& z : zeros) doc["poles_found"].push_back(cjson(z.tau_star));
    write_text(c, doc.dump(2) + "\n");
    return 0;
}

int cmd_multiplicity(const Common& c, const std::string& tau_text, const std::string& b_text,
                     double threshold) {
    const cplx tau = parse_complex(tau_text);
    dtv::ModularParam mp(tau, c.accuracy);
    const dtv::LatticeInvariants& inv = dtv::lattice_invariants(mp);

    std::vector<cplx> roots;
    if (!b_text.empty()) {
        roots.push_back(parse_complex(b_text));
    } else {
        const double emax =
            std::max({std::abs(inv.e1), std::abs(inv.e2), std::abs(inv.e3)});
        const double bs =
            1.0 + std::abs(inv.eta1) + std::sqrt(3.0 * std::abs(inv.g2)) + 3.0 * emax;
        if (std::abs(inv.g2) >= 1e-10 * bs * bs) {
            const cplx rt = std::sqrt(3.0 * inv.g2);
            roots.push_back(rt);
            roots.push_back(-rt);
        } else {
            roots.push_back(cplx(0.0, 0.0));
        }
        for (cplx e : {inv.e1, inv.e2, inv.e3}) {
            const cplx cand = -3.0 * e;
            bool dup = false;
            for (cplx have : roots)
                if (std::abs(have - cand) < 1e-8 * bs) dup = true;
            if (!dup) roots.push_back(cand);
        }
    }

    const json config{{"tau", tau_text}, {"B", b_text}, {"threshold", threshold}};
    std::vector<dtv::MultiplicityVerdict> verdicts;
    verdicts.reserve(roots.size());
    for (cplx b0 : roots) verdicts.push_back(dtv::multiplicity_n2(b0, mp, threshold));

    if (c.format == "csv") {
        std::string text = csv_preamble("multiplicity", c, config);
        text += "B0_re,B0_im,d,ord_R0,ord_Q,method\n";
        for (const auto& v : verdicts)
            text += num(v.B0.real()) + "," + num(v.B0.imag()) + "," + std::to_string(v.d) +
                    "," + std::to_string(v.ord_R0) + "," + std::to_string(v.ord_Q) + "," +
                    v.method + "\n";
        write_text(c, text);
        return 0;
    }

    json doc = envelope("multiplicity", c, config);
    doc["tau"] = cjson(tau);
    doc["roots"] = json::array();
    for (const auto& v : verdicts)
        doc["roots"].push_back({{"B0", cjson(v.B0)},
                                {"d", v.d},
                                {"method", v.method},
                                {"ord_R0", v.ord_R0},
                                {"ord_Q", v.ord_Q}});
    write_text(c, doc.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monodromy data, pre-modular forms, and spectral multiplicities "
                 "of Heun equations with Darboux-Treibich-Verdier potentials"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    int rc = 0;

    // invariants
    Common c_inv;
    std::string inv_tau;
    auto* sub_inv = app.add_subcommand("invariants", "Lattice invariants at tau");
    sub_inv->add_option("--tau", inv_tau, "Modular parameter a+bi")
        ->envname("DTVMONO_TAU")
        ->required();
    add_common(sub_inv, c_inv);
    sub_inv->callback([&] { rc = cmd_invariants(c_inv, inv_tau); });

    // scan-zeros
    Common c_scan;
    std::string scan_n = "1,0,0,0", scan_r, scan_s, scan_window = "-0.5:0.5:0.5:2.0";
    double scan_step = 0.1;
    auto* sub_scan =
        app.add_subcommand("scan-zeros", "Certified zeros of a catalog form in a tau window");
    sub_scan->add_option("--n", scan_n, "Index n0,n1,n2,n3")->envname("DTVMONO_N");
    sub_scan->add_option("--r", scan_r, "Monodromy datum r")->envname("DTVMONO_R")->required();
    sub_scan->add_option("--s", scan_s, "Monodromy datum s")->envname("DTVMONO_S")->required();
    sub_scan->add_option("--window", scan_window, "re_min:re_max:im_min:im_max")
        ->envname("DTVMONO_WINDOW");
    sub_scan->add_option("--step", scan_step, "Grid step")->envname("DTVMONO_STEP");
    add_common(sub_scan, c_scan);
    sub_scan->callback(
        [&] { rc = cmd_scan_zeros(c_scan, scan_n, scan_r, scan_s, scan_window, scan_step); });

    // monodromy
    Common c_mono;
    std::string mono_n = "1,0,0,0", mono_b, mono_tau;
    auto* sub_mono =
        app.add_subcommand("monodromy", "Cycle transfer matrices and (r,s) extraction");
    sub_mono->add_option("--n", mono_n, "Index n0,n1,n2,n3")->envname("DTVMONO_N");
    sub_mono->add_option("--B", mono_b, "Accessory parameter B")->envname("DTVMONO_B")->required();
    sub_mono->add_option("--tau", mono_tau, "Modular parameter")->envname("DTVMONO_TAU")->required();
    add_common(sub_mono, c_mono);
    sub_mono->callback([&] { rc = cmd_monodromy(c_mono, mono_n, mono_b, mono_tau); });

    // universal-check
    Common c_uni;
    std::string uni_n = "1,0,0,0", uni_r, uni_s, uni_tau;
    double uni_step = 1e-4;
    auto* sub_uni = app.add_subcommand(
        "universal-check", "Jacobian of (tau*, B) in (r,s) against the universal constant");
    sub_uni->add_option("--n", uni_n, "Index n0,n1,n2,n3")->envname("DTVMONO_N");
    sub_uni->add_option("--r", uni_r, "Monodromy datum r")->envname("DTVMONO_R")->required();
    sub_uni->add_option("--s", uni_s, "Monodromy datum s")->envname("DTVMONO_S")->required();
    sub_uni->add_option("--tau", uni_tau, "Newton starting guess for tau*")
        ->envname("DTVMONO_TAU")
        ->required();
    sub_uni->add_option("--step", uni_step, "Finite-difference step in (r,s)")
        ->envname("DTVMONO_STEP");
    add_common(sub_uni, c_uni);
    sub_uni->callback(
        [&] { rc = cmd_universal_check(c_uni, uni_n, uni_r, uni_s, uni_tau, uni_step); });

    // pvi-check
    Common c_pvi;
    std::string pvi_solution = "hitchin", pvi_r, pvi_s, pvi_tau,
                pvi_window = "-0.5:0.5:0.5:2.0";
    double pvi_step = 1e-3;
    auto* sub_pvi = app.add_subcommand(
        "pvi-check", "Residual certificate of a closed-form elliptic Painleve VI solution");
    sub_pvi->add_option("--solution", pvi_solution, "hitchin or n1000")
        ->envname("DTVMONO_SOLUTION")
        ->check(CLI::IsMember({"hitchin", "n1000"}));
    sub_pvi->add_option("--r", pvi_r, "Monodromy datum r")->envname("DTVMONO_R")->required();
    sub_pvi->add_option("--s", pvi_s, "Monodromy datum s")->envname("DTVMONO_S")->required();
    sub_pvi->add_option("--tau", pvi_tau, "Evaluation point (json) / unused (csv)")
        ->envname("DTVMONO_TAU")
        ->required();
    sub_pvi->add_option("--window", pvi_window,
                        "json: pole scan window; csv: trajectory corners re0:re1:im0:im1")
        ->envname("DTVMONO_WINDOW");
    sub_pvi->add_option("--step", pvi_step, "Stencil width for the residual")
        ->envname("DTVMONO_STEP");
    add_common(sub_pvi, c_pvi);
    sub_pvi->callback([&] {
        rc = cmd_pvi_check(c_pvi, pvi_solution, pvi_r, pvi_s, pvi_tau, pvi_window, pvi_step);
    });

    // multiplicity
    Common c_mult;
    std::string mult_tau, mult_b;
    double mult_threshold = 1e-8;
    auto* sub_mult = app.add_subcommand(
        "multiplicity", "Algebraic multiplicities of the weight-3 spectral roots");
    sub_mult->add_option("--tau", mult_tau, "Modular parameter")
        ->envname("DTVMONO_TAU")
        ->required();
    sub_mult->add_option("--B", mult_b, "Single root to classify (default: all five)")
        ->envname("DTVMONO_B");
    sub_mult->add_option("--threshold", mult_threshold,
                         "Relative cutoff for the vanishing decisions")
        ->envname("DTVMONO_THRESHOLD")
        ->check(CLI::PositiveNumber);
    add_common(sub_mult, c_mult);
    sub_mult->callback([&] { rc = cmd_multiplicity(c_mult, mult_tau, mult_b, mult_threshold); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const dtv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case dtv::ErrorKind::domain: return 2;
            case dtv::ErrorKind::convergence: return 3;
            case dtv::ErrorKind::ill_conditioned: return 4;
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}

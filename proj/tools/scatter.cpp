// scatter: command line front end. Subcommands run the completion, the
// consistency check, path-ordered products, tree enumeration, the
// tree-sum-vs-completion verification, and the sampled asymptotic sweeps.
// Exit codes: 0 pass, 1 inconsistency or verification failure, 2 input
// error, 3 budget warning under --strict.
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "scatter/jsonio.hpp"
#include "scatter/lab.hpp"
#include "scatter/svg.hpp"

namespace {

using namespace scatter;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("invalid JSON in '" + path + "': " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// builtin input: the two coordinate-axis lines with function 1 + t z^m
Diagram builtin_simple(int order) {
    return Diagram{order, {standard_line(order, {1, 0}), standard_line(order, {0, 1})}};
}

Diagram load_diagram(const std::string& path, int order, bool order_set) {
    if (path.empty()) return builtin_simple(order);
    Diagram d = diagram_from_json(read_json_file(path));
    if (order_set && order != d.order) {
        if (order > d.order)
            throw InputError("cannot raise the truncation order of a stored diagram");
        d = truncate_diagram(d, order);
    }
    return d;
}

std::pair<Wall, Wall> two_lines(const Diagram& d) {
    if (d.walls.size() != 2 || d.walls[0].support != Support::Line ||
        d.walls[1].support != Support::Line ||
        cross(d.walls[0].direction, d.walls[1].direction) == 0)
        throw InputError("input must contain exactly two transversal line walls");
    return {d.walls[0], d.walls[1]};
}

int thread_cap(size_t jobs) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("SCATTER_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 64)
            throw InputError("SCATTER_THREADS must be an integer in [1, 64]");
        cap = static_cast<int>(v);
    }
    return std::min<int>(cap, static_cast<int>(jobs));
}

std::string fmt_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

int cmd_complete(const std::string& input, int order, bool order_set,
                 const std::string& out, const std::string& svg) {
    auto [w1, w2] = two_lines(load_diagram(input, order, order_set));
    Diagram done = ks_complete(w1, w2, order_set || input.empty() ? order : w1.log_theta.order());
    std::string text = dump(diagram_to_json(done));
    if (out.empty())
        std::cout << text;
    else {
        write_text(out, text);
        std::cout << "wrote " << out << "\n";
    }
    if (!svg.empty()) write_text(svg, diagram_svg(done));
    return 0;
}

int cmd_check(const std::string& input, int order, bool order_set) {
    Diagram d = load_diagram(input, order, order_set);
    bool ok = is_consistent(d);
    std::cout << "consistent: " << (ok ? "true" : "false") << "\n";
    return ok ? 0 : 1;
}

int cmd_product(const std::string& input, int order, bool order_set,
                const std::string& out) {
    Diagram d = load_diagram(input, order, order_set);
    GroupElement p = path_ordered_product(d, crossings_of_loop(d));
    std::string text = dump(lie_to_json(p.log()));
    if (out.empty())
        std::cout << text;
    else {
        write_text(out, text);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int cmd_trees(const std::string& input, int order, bool order_set,
              const std::string& out) {
    Diagram d = load_diagram(input, order, order_set);
    auto [w1, w2] = two_lines(d);
    std::vector<LabeledTree> ts = enumerate_trees(w1, w2, d.order);
    Json list = Json::array();
    for (const LabeledTree& t : ts)
        list.push_back(Json{{"tree", t->key},
                            {"order", t->total_order},
                            {"leaves", t->leaf_count}});
    Json j{{"order", d.order}, {"count", ts.size()}, {"trees", std::move(list)}};
    std::cout << "trees: " << ts.size() << "\n";
    if (!out.empty()) write_text(out, dump(j));
    return 0;
}

int cmd_verify(const std::string& input, int order, bool order_set,
               const std::string& method, unsigned long long seed, double tol,
               bool strict, const std::string& out) {
    Diagram d = load_diagram(input, order, order_set);
    auto [w1, w2] = two_lines(d);
    AssembleOptions opt;
    opt.seed = seed;
    if (method == "quadrature")
        opt.method = MeasureMethod::Quadrature;
    else if (method == "montecarlo")
        opt.method = MeasureMethod::MonteCarlo;
    else
        throw InputError("--method must be quadrature or montecarlo");
    VerifyReport rep = verify_against_ks(w1, w2, d.order, tol, opt);

    std::cout << "ks_match: " << (rep.ks_match ? "true" : "false") << "\n";
    std::cout << "max_dev: " << fmt_sci(rep.max_dev) << "\n";
    if (!out.empty()) write_text(out, dump(report_to_json(rep)));

    bool warned = false;
    if (!rep.assembled.all_snapped) {
        std::cerr << "warning: some coefficients did not snap at the sampling budget\n";
        warned = true;
    }
    if (!rep.ks_match) return 1;
    return (strict && warned) ? 3 : 0;
}

struct SweepRow {
    double hbar;
    double hplus, hminus, order2, twowall;
};

SweepRow sweep_member(double hb) {
    LabGrid g = lab_grid_for(hb, lab_base_point());
    auto [bi, bj] = g.node_at({-1.3, 0.75});
    LieElement log = LieElement::term(2, {0, 1}, to_qvec(rot90(IVec{0, 1})), 1);
    GaugeResult res = single_wall_gauge(log, {0, 1}, hb, 2, g, {g.x(bi), g.y(bj)});
    const ScalarField& phi1 = res.phi.at({1, 1});

    SweepRow row{hb, 0.0, 0.0, 0.0, 0.0};
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            if (g.in_disc(i, j) && g.x(i) >= 0.5)
                row.hplus = std::max(row.hplus, std::abs(phi1.v[g.idx(i, j)] - 1.0));
    row.hminus = sup_over_disc(g, phi1, [](DVec p) { return p.x <= -0.7; });
    row.order2 = sup_over_disc(g, res.phi.at({2, 2}));
    row.twowall = std::abs(two_wall_first_correction(hb).value - 1.0);
    return row;
}

int cmd_asymptotics(std::vector<double> hbars, bool strict, const std::string& out,
                    const std::string& svg) {
    if (hbars.empty()) hbars = {0.2, 0.1, 0.05, 0.025};
    for (size_t i = 0; i < hbars.size(); ++i) {
        if (!(hbars[i] > 0)) throw InputError("--hbar values must be positive");
        if (i > 0 && hbars[i] >= hbars[i - 1])
            throw InputError("--hbar values must be strictly decreasing");
    }

    // sweep members are independent; run them on a small worker pool and
    // aggregate by index so output is deterministic
    std::vector<SweepRow> rows(hbars.size());
    std::vector<std::exception_ptr> errs(hbars.size());
    int workers = thread_cap(hbars.size());
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t k = next.fetch_add(1); k < hbars.size(); k = next.fetch_add(1)) {
                try {
                    rows[k] = sweep_member(hbars[k]);
                } catch (...) {
                    errs[k] = std::current_exception();
                }
            }
        });
    for (std::thread& t : pool) t.join();
    for (std::exception_ptr& e : errs)
        if (e) std::rethrow_exception(e);

    std::ostringstream csv;
    csv << "hbar,sup_error,region\n";
    for (const SweepRow& r : rows) {
        csv << fmt_sci(r.hbar) << "," << fmt_sci(r.hplus) << ",Hplus\n";
        csv << fmt_sci(r.hbar) << "," << fmt_sci(r.hminus) << ",Hminus\n";
        csv << fmt_sci(r.hbar) << "," << fmt_sci(r.order2) << ",order2\n";
        csv << fmt_sci(r.hbar) << "," << fmt_sci(r.twowall) << ",twowall\n";
    }
    if (out.empty())
        std::cout << csv.str();
    else {
        write_text(out, csv.str());
        std::cout << "wrote " << out << "\n";
    }

    if (!svg.empty()) {
        // heatmap of |phi_1| at the smallest width
        double hb = hbars.back();
        LabGrid g = lab_grid_for(hb, lab_base_point());
        auto [bi, bj] = g.node_at({-1.3, 0.75});
        LieElement log = LieElement::term(1, {0, 1}, to_qvec(rot90(IVec{0, 1})), 1);
        GaugeResult res = single_wall_gauge(log, {0, 1}, hb, 1, g, {g.x(bi), g.y(bj)});
        write_text(svg, heatmap_svg(g, res.phi.at({1, 1})));
    }

    if (hbars.size() < 3) {
        std::cerr << "warning: slope fit needs at least three hbar samples; skipped\n";
        return strict ? 3 : 0;
    }

    std::vector<std::pair<double, double>> o2, tw;
    for (const SweepRow& r : rows) {
        o2.push_back({r.hbar, r.order2});
        tw.push_back({r.hbar, r.twowall});
    }
    double slope_o2 = convergence_rate(o2);
    double slope_tw = convergence_rate(tw);
    bool o2_ok = slope_o2 >= 0.35 && slope_o2 <= 0.65;
    bool tw_ok = slope_tw >= 0.35;
    Json summary{{"slope_order2", slope_o2},
                 {"order2_window", {0.35, 0.65}},
                 {"order2_in_window", o2_ok},
                 {"slope_twowall", slope_tw},
                 {"twowall_min_slope", 0.35},
                 {"twowall_pass", tw_ok}};
    std::cout << dump(summary);
    return (o2_ok && tw_ok) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scattering diagram workbench"};
    app.require_subcommand(1);

    std::string input, out, svg, method = "quadrature";
    int order = 6;
    unsigned long long seed = 0;
    double tol = 1e-3;
    bool strict = false;
    std::vector<double> hbars;

    auto add_common = [&](CLI::App* sub, bool with_input) {
        if (with_input)
            sub->add_option("input", input, "diagram JSON (default: builtin simple pair)");
        sub->add_option("--out", out, "output file");
        return sub->add_option("--order", order, "truncation order");
    };

    CLI::App* complete = app.add_subcommand("complete", "run the order-by-order completion");
    CLI::Option* complete_order = add_common(complete, true);
    complete->add_option("--svg", svg, "also draw the diagram");

    CLI::App* check = app.add_subcommand("check", "consistency around the joint");
    CLI::Option* check_order = add_common(check, true);

    CLI::App* product = app.add_subcommand("product", "path-ordered product of the loop");
    CLI::Option* product_order = add_common(product, true);

    CLI::App* trees = app.add_subcommand("trees", "enumerate contributing trees");
    CLI::Option* trees_order = add_common(trees, true);

    CLI::App* verify = app.add_subcommand("verify", "tree-sum against completion");
    CLI::Option* verify_order = add_common(verify, true);
    verify->add_option("--method", method, "quadrature|montecarlo");
    verify->add_option("--seed", seed, "sampling seed");
    verify->add_option("--tol", tol, "match tolerance on raw coefficients");
    verify->add_flag("--strict", strict, "treat budget warnings as failures");

    CLI::App* asym = app.add_subcommand("asymptotics", "sampled sweeps over hbar");
    asym->add_option("--hbar", hbars, "decreasing widths")->delimiter(',');
    asym->add_option("--out", out, "CSV output file");
    asym->add_option("--svg", svg, "heatmap of |phi_1| at the smallest width");
    asym->add_flag("--strict", strict, "treat budget warnings as failures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (complete->parsed())
            return cmd_complete(input, order, complete_order->count() > 0, out, svg);
        if (check->parsed()) return cmd_check(input, order, check_order->count() > 0);
        if (product->parsed())
            return cmd_product(input, order, product_order->count() > 0, out);
        if (trees->parsed()) return cmd_trees(input, order, trees_order->count() > 0, out);
        if (verify->parsed())
            return cmd_verify(input, order, verify_order->count() > 0, method, seed, tol,
                              strict, out);
        if (asym->parsed()) return cmd_asymptotics(hbars, strict, out, svg);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

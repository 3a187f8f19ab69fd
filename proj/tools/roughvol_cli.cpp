#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "roughvol/fractional_kernel.hpp"
#include "roughvol/gaussian_engine.hpp"
#include "roughvol/io.hpp"
#include "roughvol/lower_bound_lab.hpp"
#include "roughvol/mc_simulator.hpp"
#include "roughvol/moment_engine.hpp"
#include "roughvol/parallel.hpp"
#include "roughvol/weak_error_lab.hpp"
#include "roughvol/word_calculus.hpp"

namespace {

using namespace roughvol;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

struct CommonOpts {
    double hurst = 0.1;
    double rho = 1.0;
    double T = 1.0;
    std::string model_str = "linear:1";
    int N = 3;
    long n = 0;
    std::vector<long> n_list;
    double tol = 1e-6;
    long paths = 100000;
    std::uint64_t seed = 42;
    std::string out;
    std::string format = "json";
    bool check = false;
    int threads = 0;
};

VolFn parse_model(const std::string& s) {
    auto bad = [&]() {
        throw CLI::ValidationError("--model", "expected linear:c1 | exp:c2,c3 | tanh, got '" + s + "'");
    };
    if (s == "tanh") return VolFn::shifted_tanh();
    auto colon = s.find(':');
    if (colon == std::string::npos) bad();
    std::string family = s.substr(0, colon);
    std::string args = s.substr(colon + 1);
    try {
        if (family == "linear") {
            std::size_t used = 0;
            double c1 = std::stod(args, &used);
            if (used != args.size()) bad();
            return VolFn::linear(c1);
        }
        if (family == "exp") {
            auto comma = args.find(',');
            if (comma == std::string::npos) bad();
            std::size_t u1 = 0, u2 = 0;
            std::string a1 = args.substr(0, comma), a2 = args.substr(comma + 1);
            double c2 = std::stod(a1, &u1);
            double c3 = std::stod(a2, &u2);
            if (u1 != a1.size() || u2 != a2.size()) bad();
            return VolFn::exponential(c2, c3);
        }
    } catch (const std::invalid_argument&) {
        bad();
    } catch (const std::out_of_range&) {
        bad();
    }
    bad();
    return VolFn::shifted_tanh(); // unreachable
}

ModelSpec make_model(const CommonOpts& o) {
    return ModelSpec{Hurst(o.hurst), o.rho, o.T, parse_model(o.model_str)};
}

void resolve_threads(const CommonOpts& o) {
    int t = o.threads;
    if (t <= 0) {
        if (const char* env = std::getenv("ROUGHVOL_THREADS")) t = std::atoi(env);
    }
    if (t > 0) thread_cap().store(static_cast<unsigned>(t));
}

int resolved_threads() {
    unsigned cap = thread_cap().load();
    if (cap != 0) return static_cast<int>(cap);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + o.out);
    f << text;
}

void write_config_json(JsonWriter& w, const std::string& command, const CommonOpts& o,
                       bool with_n, bool with_paths) {
    w.key("config");
    w.begin_object();
    w.key("command");
    w.value(command);
    w.key("hurst");
    w.value(o.hurst);
    w.key("rho");
    w.value(o.rho);
    w.key("T");
    w.value(o.T);
    w.key("model");
    w.value(o.model_str);
    w.key("N");
    w.value(o.N);
    if (with_n) {
        if (!o.n_list.empty()) {
            w.key("n_list");
            w.begin_array();
            for (long n : o.n_list) w.value(static_cast<long>(n));
            w.end_array();
        } else {
            w.key("n");
            w.value(static_cast<long>(o.n));
        }
    }
    w.key("tol");
    w.value(o.tol);
    if (with_paths) {
        w.key("paths");
        w.value(static_cast<long>(o.paths));
        w.key("seed");
        w.value(static_cast<long>(o.seed));
    }
    w.key("format");
    w.value(o.format);
    w.key("check");
    w.value(o.check);
    w.key("threads");
    w.value(resolved_threads());
    w.end_object();
}

std::string config_csv_header(const std::string& command, const CommonOpts& o, bool with_n,
                              bool with_paths) {
    std::ostringstream s;
    s << "# command=" << command << "\n";
    s << "# hurst=" << format_double(o.hurst, 12) << "\n";
    s << "# rho=" << format_double(o.rho, 12) << "\n";
    s << "# T=" << format_double(o.T, 12) << "\n";
    s << "# model=" << o.model_str << "\n";
    s << "# N=" << o.N << "\n";
    if (with_n) {
        if (!o.n_list.empty()) {
            s << "# n_list=";
            for (std::size_t i = 0; i < o.n_list.size(); ++i)
                s << (i ? "," : "") << o.n_list[i];
            s << "\n";
        } else {
            s << "# n=" << o.n << "\n";
        }
    }
    s << "# tol=" << format_double(o.tol, 12) << "\n";
    if (with_paths) {
        s << "# paths=" << o.paths << "\n";
        s << "# seed=" << o.seed << "\n";
    }
    s << "# threads=" << resolved_threads() << "\n";
    return s.str();
}

void add_model_flags(CLI::App* cmd, CommonOpts& o, bool need_n) {
    cmd->add_option("--hurst", o.hurst, "Hurst parameter in (0, 1/2]")->required();
    cmd->add_option("--rho", o.rho, "correlation in [-1, 1]");
    cmd->add_option("--T", o.T, "time horizon");
    cmd->add_option("--model", o.model_str, "volatility: linear:c1 | exp:c2,c3 | tanh");
    cmd->add_option("--N", o.N, "moment order");
    if (need_n) {
        cmd->add_option("--n", o.n, "grid resolution");
        cmd->add_option("--n-list", o.n_list, "comma separated grid resolutions")
            ->delimiter(',');
    }
    cmd->add_option("--tol", o.tol, "quadrature tolerance");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--check", o.check, "acceptance mode: nonzero exit on failed window");
    cmd->add_option("--threads", o.threads, "worker cap (fallback: ROUGHVOL_THREADS)");
}

void append_terms_json(JsonWriter& w, const std::vector<WordContribution>& terms) {
    w.begin_array();
    for (const WordContribution& t : terms) {
        w.begin_object();
        w.key("word");
        w.value(t.word);
        w.key("value");
        w.value(t.value);
        w.key("error_estimate");
        w.value(t.error);
        w.end_object();
    }
    w.end_array();
}

int run_moment(const CommonOpts& o, bool discrete, const std::string& method_str) {
    ModelSpec model = make_model(o);
    MomentReport rep;
    std::string command = discrete ? "discrete-moment" : "moment";
    if (discrete) {
        if (o.n <= 0) throw CLI::ValidationError("--n", "discrete-moment needs --n > 0");
        bool use_wick = method_str == "wick" ||
                        (method_str == "auto" && wick_budget_ok(model, o.N, o.n));
        rep = use_wick ? discrete_moment_wick(model, o.N, o.n)
                       : discrete_moment_quadrature(model, o.N, o.n, o.tol);
    } else {
        rep = continuous_moment(model, o.N, o.tol);
    }

    if (o.format == "json") {
        JsonWriter w;
        w.begin_object();
        write_config_json(w, command, o, discrete, false);
        w.key("value");
        w.value(rep.value);
        w.key("error_estimate");
        w.value(rep.error_estimate);
        w.key("method");
        w.value(rep.method == MomentMethod::wick_oracle ? "wick" : "quadrature");
        w.key("terms");
        append_terms_json(w, rep.terms);
        w.end_object();
        emit(o, w.str() + "\n");
    } else {
        std::ostringstream s;
        s << config_csv_header(command, o, discrete, false);
        s << "word,value,error_estimate\n";
        for (const WordContribution& t : rep.terms)
            s << csv_join({t.word, format_double(t.value, 12), format_double(t.error, 12)})
              << "\n";
        s << csv_join({"TOTAL", format_double(rep.value, 12),
                       format_double(rep.error_estimate, 12)})
          << "\n";
        emit(o, s.str());
    }
    return kExitOk;
}

int run_weak_error(const CommonOpts& o) {
    if (o.n <= 0) throw CLI::ValidationError("--n", "weak-error needs --n > 0");
    ModelSpec model = make_model(o);
    WeakErrorReport r = weak_error(model, o.N, o.n, o.tol);

    if (o.format == "json") {
        JsonWriter w;
        w.begin_object();
        write_config_json(w, "weak-error", o, true, false);
        w.key("continuous");
        w.value(r.continuous.value);
        w.key("discrete");
        w.value(r.discrete.value);
        w.key("discrete_method");
        w.value(r.discrete.method == MomentMethod::wick_oracle ? "wick" : "quadrature");
        w.key("error");
        w.value(r.value);
        w.key("error_estimate");
        w.value(r.error_estimate);
        w.key("word_differences");
        append_terms_json(w, r.word_differences);
        w.end_object();
        emit(o, w.str() + "\n");
    } else {
        std::ostringstream s;
        s << config_csv_header("weak-error", o, true, false);
        s << "n,continuous,discrete,error,error_estimate\n";
        s << csv_join({std::to_string(o.n), format_double(r.continuous.value, 12),
                       format_double(r.discrete.value, 12), format_double(r.value, 12),
                       format_double(r.error_estimate, 12)})
          << "\n";
        emit(o, s.str());
    }
    return kExitOk;
}

int run_rate(const CommonOpts& o, double window) {
    if (o.n_list.size() < 3)
        throw CLI::ValidationError("--n-list", "rate needs at least 3 grid resolutions");
    ModelSpec model = make_model(o);
    WeakErrorCurve curve = sweep(model, o.N, o.n_list, o.tol);
    PredictedRate pred = predicted_rate(o.hurst, o.rho);
    bool pass = !curve.degenerate_fit && std::fabs(curve.slope - pred.rate) <= window;

    if (o.format == "json") {
        JsonWriter w;
        w.begin_object();
        write_config_json(w, "rate", o, true, false);
        w.key("points");
        w.begin_array();
        for (const SweepPoint& p : curve.points) {
            w.begin_object();
            w.key("n");
            w.value(static_cast<long>(p.n));
            w.key("error");
            w.value(p.error);
            w.key("error_estimate");
            w.value(p.error_estimate);
            w.key("used_in_fit");
            w.value(p.used_in_fit);
            w.end_object();
        }
        w.end_array();
        w.key("slope");
        w.value(curve.slope);
        w.key("slope_stderr");
        w.value(curve.slope_stderr);
        w.key("degenerate_fit");
        w.value(curve.degenerate_fit);
        w.key("power_rss");
        w.value(curve.power_rss);
        w.key("logmodel_rss");
        w.value(curve.logmodel_rss);
        w.key("predicted_rate");
        w.value(pred.rate);
        w.key("log_correction");
        w.value(pred.log_correction);
        if (o.check) {
            w.key("check_window");
            w.value(window);
            w.key("check_passed");
            w.value(pass);
        }
        w.end_object();
        emit(o, w.str() + "\n");
    } else {
        std::ostringstream s;
        s << config_csv_header("rate", o, true, false);
        s << "# slope=" << format_double(curve.slope, 12) << "\n";
        s << "# slope_stderr=" << format_double(curve.slope_stderr, 12) << "\n";
        s << "# predicted_rate=" << format_double(pred.rate, 12) << "\n";
        s << "# log_correction=" << (pred.log_correction ? "true" : "false") << "\n";
        s << "n,error,error_estimate,used_in_fit\n";
        for (const SweepPoint& p : curve.points)
            s << csv_join({std::to_string(p.n), format_double(p.error, 12),
                           format_double(p.error_estimate, 12),
                           p.used_in_fit ? "1" : "0"})
              << "\n";
        emit(o, s.str());
    }
    if (o.check && !pass) return kExitCheckFailed;
    return kExitOk;
}

int run_simulate(const CommonOpts& o) {
    if (o.n <= 0) throw CLI::ValidationError("--n", "simulate needs --n > 0");
    ModelSpec model = make_model(o);
    McEstimate est = estimate_moment(model, o.N, o.n, o.paths, o.seed);

    bool have_oracle = wick_budget_ok(model, o.N, o.n);
    double oracle = 0.0, gap_se = 0.0;
    if (have_oracle) {
        oracle = discrete_moment_wick(model, o.N, o.n).value;
        gap_se = est.std_error > 0.0 ? std::fabs(est.mean - oracle) / est.std_error : 0.0;
    }
    bool pass = !have_oracle || gap_se <= 4.0;

    if (o.format == "json") {
        JsonWriter w;
        w.begin_object();
        write_config_json(w, "simulate", o, true, true);
        w.key("mean");
        w.value(est.mean);
        w.key("std_error");
        w.value(est.std_error);
        w.key("paths_used");
        w.value(static_cast<long>(est.paths));
        if (have_oracle) {
            w.key("oracle");
            w.value(oracle);
            w.key("gap_in_se");
            w.value(gap_se);
        }
        if (o.check) {
            w.key("check_passed");
            w.value(pass);
        }
        w.end_object();
        emit(o, w.str() + "\n");
    } else {
        std::ostringstream s;
        s << config_csv_header("simulate", o, true, true);
        s << "n,N,paths,seed,mean,std_error,oracle,gap_in_se\n";
        s << csv_join({std::to_string(o.n), std::to_string(o.N), std::to_string(est.paths),
                       std::to_string(o.seed), format_double(est.mean, 12),
                       format_double(est.std_error, 12),
                       have_oracle ? format_double(oracle, 12) : "",
                       have_oracle ? format_double(gap_se, 12) : ""})
          << "\n";
        emit(o, s.str());
    }
    if (o.check && !pass) return kExitCheckFailed;
    return kExitOk;
}

int run_lower_bound(const CommonOpts& o, const std::string& sweep_str) {
    if (!sweep_str.empty()) {
        double h0 = 0.0, h1 = 0.0;
        int count = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(sweep_str);
        in >> h0 >> c1 >> h1 >> c2 >> count;
        if (!in || c1 != ':' || c2 != ':' || count < 1)
            throw CLI::ValidationError("--sweep", "expected start:end:count");
        std::vector<ConstantsRow> rows = constants_sweep(h0, h1, count);
        bool pass = true;
        for (const ConstantsRow& r : rows)
            if (!(r.c2 - r.c3 > 0.0)) pass = false;

        if (o.format == "json") {
            JsonWriter w;
            w.begin_object();
            write_config_json(w, "lower-bound", o, false, false);
            w.key("sweep");
            w.value(sweep_str);
            w.key("rows");
            w.begin_array();
            for (const ConstantsRow& r : rows) {
                w.begin_object();
                w.key("H");
                w.value(r.H);
                w.key("B1");
                w.value(r.b1);
                w.key("B2");
                w.value(r.b2);
                w.key("B3");
                w.value(r.b3);
                w.key("C2");
                w.value(r.c2);
                w.key("C3");
                w.value(r.c3);
                w.key("C2_minus_C3");
                w.value(r.c2 - r.c3);
                w.end_object();
            }
            w.end_array();
            if (o.check) {
                w.key("check_passed");
                w.value(pass);
            }
            w.end_object();
            emit(o, w.str() + "\n");
        } else {
            std::ostringstream s;
            s << config_csv_header("lower-bound", o, false, false);
            s << "# sweep=" << sweep_str << "\n";
            s << "H,B1,B2,B3,C2,C3,C2_minus_C3\n";
            for (const ConstantsRow& r : rows)
                s << csv_join({format_double(r.H, 12), format_double(r.b1, 12),
                               format_double(r.b2, 12), format_double(r.b3, 12),
                               format_double(r.c2, 12), format_double(r.c3, 12),
                               format_double(r.c2 - r.c3, 12)})
                  << "\n";
            emit(o, s.str());
        }
        if (o.check && !pass) return kExitCheckFailed;
        return kExitOk;
    }

    // single-H mode: constants through both routes, optional empirical curve
    BConstants bi = b_constants_integral(o.hurst, std::min(o.tol, 1e-9));
    BConstants bb = b_constants_beta(o.hurst);
    C2C3 c = c2_c3(o.hurst);
    LowerBoundCurve curve;
    bool have_curve = !o.n_list.empty();
    if (have_curve) curve = empirical_lower_bound(o.hurst, o.n_list, o.tol);

    if (o.format == "json") {
        JsonWriter w;
        w.begin_object();
        write_config_json(w, "lower-bound", o, have_curve, false);
        w.key("B_integral");
        w.begin_array();
        w.value(bi.b1);
        w.value(bi.b2);
        w.value(bi.b3);
        w.end_array();
        w.key("B_beta");
        w.begin_array();
        w.value(bb.b1);
        w.value(bb.b2);
        w.value(bb.b3);
        w.end_array();
        w.key("C2");
        w.value(c.c2);
        w.key("C3");
        w.value(c.c3);
        w.key("C2_minus_C3");
        w.value(c.c2 - c.c3);
        if (have_curve) {
            w.key("rescaled_errors");
            w.begin_array();
            for (const LowerBoundPoint& p : curve.points) {
                w.begin_object();
                w.key("n");
                w.value(static_cast<long>(p.n));
                w.key("error");
                w.value(p.error);
                w.key("error_estimate");
                w.value(p.error_estimate);
                w.key("rescaled");
                w.value(p.rescaled);
                w.end_object();
            }
            w.end_array();
            w.key("min_rescaled_tail");
            w.value(curve.min_rescaled_tail);
            w.key("median_rescaled");
            w.value(curve.median_rescaled);
        }
        w.end_object();
        emit(o, w.str() + "\n");
    } else {
        std::ostringstream s;
        s << config_csv_header("lower-bound", o, have_curve, false);
        s << "# B_integral=" << format_double(bi.b1, 12) << "," << format_double(bi.b2, 12)
          << "," << format_double(bi.b3, 12) << "\n";
        s << "# B_beta=" << format_double(bb.b1, 12) << "," << format_double(bb.b2, 12)
          << "," << format_double(bb.b3, 12) << "\n";
        s << "# C2=" << format_double(c.c2, 12) << " C3=" << format_double(c.c3, 12)
          << "\n";
        if (have_curve) {
            s << "n,error,error_estimate,rescaled\n";
            for (const LowerBoundPoint& p : curve.points)
                s << csv_join({std::to_string(p.n), format_double(p.error, 12),
                               format_double(p.error_estimate, 12),
                               format_double(p.rescaled, 12)})
                  << "\n";
        }
        emit(o, s.str());
    }
    return kExitOk;
}

struct SelfCheck {
    std::string name;
    bool passed;
};

int run_selfcheck(const CommonOpts& o) {
    std::vector<SelfCheck> checks;
    auto add = [&](const std::string& name, bool ok) { checks.push_back({name, ok}); };

    // word combinatorics: Fibonacci counts and the trivial-word rule
    {
        std::vector<std::size_t> counts;
        for (int N = 1; N <= 10; ++N) counts.push_back(enumerate_words(N).size());
        bool fib = counts[0] == 1 && counts[1] == 2;
        for (std::size_t i = 2; i < counts.size(); ++i)
            fib = fib && counts[i] == counts[i - 1] + counts[i - 2];
        add("word_count_fibonacci", fib);
        bool triv = true;
        for (const Word& w : enumerate_words(6))
            triv = triv && (is_trivial(w) == (w.letters.empty() || w.letters.back() == 'I'));
        add("trivial_iff_last_letter_I", triv);
    }

    // kernel identities
    {
        bool ok = true;
        const double H = 0.3;
        ok = ok && std::fabs(covariance_C(1.0, 1.0, H) - 1.0 / (2.0 * H)) < 1e-8;
        ok = ok && std::fabs(covariance_C(2.0, 1.0, H) - covariance_fast(2.0, 1.0, H)) < 1e-9;
        double ik = integrated_K(1.0, 0.0, 1.0, H);
        ok = ok && std::fabs(ik - 1.0 / (H + 0.5)) < 1e-12;
        add("covariance_identities", ok);
    }

    // Gaussian engine: Wick vs Hermite on a small exponential case
    {
        Eigen::MatrixXd sigma(2, 2);
        sigma << 1.0, 0.3, 0.3, 0.5;
        GaussianLaw law(sigma);
        ElementaryPsi psi{{{0, 1}, {0}}};
        VolFn f = VolFn::exponential(1.0, 0.5);
        double a = expect_psi(psi, law, f, ExpectMethod::analytic);
        double h = expect_psi(psi, law, f, ExpectMethod::hermite);
        add("analytic_vs_hermite", std::fabs(a - h) < 1e-8);
    }

    // oracle triangulation at one small configuration
    {
        ModelSpec model{Hurst(0.3), 0.7, 1.0, VolFn::linear(1.0)};
        MomentReport q = discrete_moment_quadrature(model, 3, 4, 1e-8);
        MomentReport wk = discrete_moment_wick(model, 3, 4);
        add("oracle_triangulation",
            std::fabs(q.value - wk.value) <= std::max(1e-6, 3.0 * q.error_estimate));
    }

    // Beta vs integral constants
    {
        BConstants bi = b_constants_integral(0.1, 1e-10);
        BConstants bb = b_constants_beta(0.1);
        bool ok = std::fabs(bi.b1 - bb.b1) < 1e-8 && std::fabs(bi.b2 - bb.b2) < 1e-8 &&
                  std::fabs(bi.b3 - bb.b3) < 1e-8;
        add("beta_vs_integral", ok);
    }

    bool all = true;
    std::ostringstream s;
    for (const SelfCheck& c : checks) {
        all = all && c.passed;
        s << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "\n";
    }
    s << (all ? "selfcheck OK" : "selfcheck FAILED") << "\n";
    emit(o, s.str());
    return all ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak-error laboratory for rough volatility driven by Liouville fBm"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string method_str = "auto";
    std::string sweep_str;
    double window = 0.07;

    CLI::App* moment = app.add_subcommand("moment", "continuous moment E[X_T^N]");
    add_model_flags(moment, o, false);

    CLI::App* dmoment =
        app.add_subcommand("discrete-moment", "scheme moment E[(X_T^n)^N]");
    add_model_flags(dmoment, o, true);
    dmoment->add_option("--method", method_str, "auto | quadrature | wick")
        ->check(CLI::IsMember({"auto", "quadrature", "wick"}));

    CLI::App* werr = app.add_subcommand("weak-error", "E[X_T^N] - E[(X_T^n)^N] at one n");
    add_model_flags(werr, o, true);

    CLI::App* rate = app.add_subcommand("rate", "slope fit of the weak error over n");
    add_model_flags(rate, o, true);
    rate->add_option("--window", window, "allowed |slope - predicted| in --check mode");

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo moment of the scheme");
    add_model_flags(sim, o, true);
    sim->add_option("--paths", o.paths, "number of Monte Carlo paths");
    sim->add_option("--seed", o.seed, "RNG seed");

    CLI::App* lb = app.add_subcommand("lower-bound", "cubic lower-bound constants");
    lb->add_option("--hurst", o.hurst, "Hurst parameter in (0, 1/6) for single-H mode");
    lb->add_option("--sweep", sweep_str, "H sweep start:end:count");
    lb->add_option("--n-list", o.n_list, "grid resolutions for the rescaled error curve")
        ->delimiter(',');
    lb->add_option("--tol", o.tol, "quadrature tolerance");
    lb->add_option("--out", o.out, "output file (default stdout)");
    lb->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    lb->add_flag("--check", o.check, "acceptance mode");
    lb->add_option("--threads", o.threads, "worker cap");

    CLI::App* self = app.add_subcommand("selfcheck", "fast internal property suite");
    self->add_option("--out", o.out, "output file (default stdout)");
    self->add_option("--threads", o.threads, "worker cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        resolve_threads(o);
        if (moment->parsed()) return run_moment(o, false, method_str);
        if (dmoment->parsed()) return run_moment(o, true, method_str);
        if (werr->parsed()) return run_weak_error(o);
        if (rate->parsed()) return run_rate(o, window);
        if (sim->parsed()) return run_simulate(o);
        if (lb->parsed()) return run_lower_bound(o, sweep_str);
        if (self->parsed()) return run_selfcheck(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

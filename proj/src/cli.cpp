#include "fracdyn/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "fracdyn/expr.hpp"
#include "fracdyn/frac_core.hpp"
#include "fracdyn/kamke.hpp"
#include "fracdyn/mnc.hpp"
#include "fracdyn/plap.hpp"
#include "fracdyn/volterra.hpp"

namespace fracdyn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

std::size_t steps_for(double length, double h) {
    auto n = static_cast<std::size_t>(std::llround(length / h));
    if (n > 1 && h * static_cast<double>(n) > length * (1.0 + 1e-12)) --n;
    return n < 1 ? 1 : n;
}

plap::PLapProblem build_problem(const RunConfig& c) {
    plap::PLapProblem pb;
    pb.p = c.p;
    pb.alpha = FracOrder(c.alpha);
    pb.T = c.T;
    pb.N = c.N;
    pb.beta = c.beta;
    pb.r = expr::parse(c.r);
    pb.F = expr::parse(c.F);
    pb.phi = expr::parse(c.phi);
    pb.psi = expr::parse(c.psi);
    return pb;
}

json certificate_json(const plap::Certificate& cert) {
    // Field set is part of the file format; the psi note goes to stderr only.
    json j;
    j["lambda"] = cert.lambda;
    j["P"] = cert.P;
    j["Q"] = cert.Q;
    j["M"] = cert.M;
    j["delta"] = cert.delta;
    j["C1"] = cert.C1;
    j["C2"] = cert.C2;
    j["k_rule"] = cert.k_rule;
    return j;
}

json report_json(const volterra::SolveReport& rep) {
    json j;
    j["iterations"] = rep.iterations;
    j["final_increment"] = rep.final_increment;
    j["observed_ratio"] = rep.observed_ratio;
    j["residual"] = rep.residual;
    j["ball_escape"] = rep.ball_escape;
    j["warnings"] = rep.warnings;
    return j;
}

std::string trajectory_csv(const SampledPath& u) {
    std::string csv = "t";
    for (std::size_t c = 1; c <= u.dim(); ++c) csv += ",u_" + std::to_string(c);
    csv += "\n";
    for (std::size_t j = 0; j < u.n_nodes(); ++j) {
        csv += format_double(u.grid().node(j));
        for (std::size_t c = 0; c < u.dim(); ++c) csv += "," + format_double(u.value(j)[c]);
        csv += "\n";
    }
    return csv;
}

// All content is assembled in memory before anything touches the disk, so a
// failed command leaves no partial artifacts; a failed write cleans up.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) {
        files_.emplace_back(name, std::move(content));
    }

    void commit() {
        fs::create_directories(dir_);
        std::vector<fs::path> written;
        try {
            for (const auto& [name, content] : files_) {
                const fs::path p = dir_ / name;
                std::ofstream out(p, std::ios::binary | std::ios::trunc);
                if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
                out << content;
                if (!out) throw std::runtime_error("write failed for " + p.string());
                written.push_back(p);
                std::cout << "wrote " << p.string() << "\n";
            }
        } catch (...) {
            for (const fs::path& p : written) {
                std::error_code ec;
                fs::remove(p, ec);
            }
            throw;
        }
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

int cmd_certify(const RunConfig& c, OutputSet& out) {
    const plap::Certificate cert = plap::certify(build_problem(c));
    if (!cert.psi_zero) std::cerr << "warning: " << cert.note << "\n";
    out.add("certificate.json", certificate_json(cert).dump(2) + "\n");
    out.commit();
    return 0;
}

int cmd_solve(const RunConfig& c, OutputSet& out) {
    const plap::PLapProblem pb = build_problem(c);
    double horizon = c.T;
    try {
        horizon = std::min(horizon, plap::certify(pb).delta);
    } catch (const expr::BoundUnsupported&) {
        // solve-only mode; solve_semidiscrete records the warning
    }
    const TimeGrid grid(0.0, c.h, steps_for(horizon, c.h));
    const volterra::SolveReport rep = plap::solve_semidiscrete(pb, grid, c.tol, c.max_iter);
    for (const std::string& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    out.add("trajectory.csv", trajectory_csv(rep.solution));
    out.add("solve_report.json", report_json(rep).dump(2) + "\n");
    out.commit();
    return 0;
}

int cmd_sweep(const RunConfig& c, OutputSet& out) {
    const plap::PLapProblem pb = build_problem(c);
    double horizon = c.T;
    try {
        horizon = std::min(horizon, plap::certify(pb).delta);
    } catch (const expr::BoundUnsupported&) {
    }

    std::string csv = "study,param_prev,param_next,sup_diff\n";
    const TimeGrid grid(0.0, c.h, steps_for(horizon, c.h));
    for (const plap::TruncationRow& row : plap::truncation_study(pb, c.N_list, grid, c.tol))
        csv += "truncation," + std::to_string(row.n_prev) + "," + std::to_string(row.n_next) +
               "," + format_double(row.sup_diff) + "\n";

    // Step-size refinement at fixed N: compare solutions on shared nodes.
    const double hs[] = {c.h, c.h / 2.0, c.h / 4.0};
    std::vector<SampledPath> sols;
    for (double h : hs) {
        const TimeGrid g(0.0, h, steps_for(horizon, c.h) * steps_for(c.h, h));
        sols.push_back(plap::solve_semidiscrete(pb, g, c.tol, c.max_iter).solution);
    }
    for (std::size_t i = 1; i < sols.size(); ++i) {
        const SampledPath& coarse = sols[i - 1];
        const SampledPath& fine = sols[i];
        double diff = 0.0;
        for (std::size_t j = 0; j < coarse.n_nodes(); ++j)
            diff = std::max(diff, (coarse.value(j) - fine.value(2 * j)).sup_norm());
        csv += "step," + format_double(hs[i - 1]) + "," + format_double(hs[i]) + "," +
               format_double(diff) + "\n";
    }
    out.add("sweep.csv", csv);
    out.commit();
    return 0;
}

json axiom_json(const mnc::AxiomReport& rep) {
    json checks = json::array();
    for (const mnc::AxiomCheck& c : rep.checks) {
        json jc;
        jc["axiom"] = c.axiom;
        jc["pass"] = c.pass;
        if (!c.witness.empty()) jc["witness"] = c.witness;
        checks.push_back(jc);
    }
    return checks;
}

int cmd_mnc(const RunConfig& c, OutputSet& out) {
    const std::vector<mnc::SetFamily> fams = mnc::stock_families();
    json j;
    j["hausdorff_axioms"] = axiom_json(mnc::axiom_suite(mnc::Measure::hausdorff, fams));
    j["sup_norm_axioms"] = axiom_json(mnc::axiom_suite(mnc::Measure::sup_norm, fams));

    json values = json::array();
    for (const mnc::SetFamily& f : fams) {
        const mnc::MeasureValue chi = mnc::hausdorff_c0(f);
        const mnc::MeasureValue mu = mnc::sup_norm_measure(f);
        json v;
        v["family"] = f.describe();
        v["hausdorff"] = chi.value;
        v["hausdorff_upper_bound"] = chi.upper_bound;
        v["sup_norm"] = mu.value;
        values.push_back(v);
    }
    j["values"] = values;

    const double alphas[] = {0.25, 0.5, 0.75, 1.0};
    json kernel = json::array();
    const TimeGrid grid(0.0, c.h, steps_for(1.0, c.h));
    for (const mnc::KernelCorpusEntry& entry : mnc::kernel_corpus())
        for (double a : alphas) {
            const auto g = SampledPath::sample_scalar(grid, entry.g);
            const auto fam = mnc::PathFamily::parametric(
                g, mnc::scaled_basis(mnc::BasisCoef::constant(1.0)));
            const mnc::KernelCheck chk =
                mnc::kernel_integral_check(fam, FracOrder(a), grid.n_steps());
            json k;
            k["g"] = entry.name;
            k["alpha"] = a;
            k["lhs"] = chk.lhs;
            k["rhs"] = chk.rhs;
            k["holds"] = chk.holds;
            kernel.push_back(k);
        }
    j["kernel_inequality"] = kernel;

    out.add("mnc_report.json", j.dump(2) + "\n");
    out.commit();
    return 0;
}

int cmd_kamke(const RunConfig& c, OutputSet& out) {
    kamke::KamkeSpec spec;
    spec.H = c.H;
    spec.lambda = c.lambda;
    spec.alpha = FracOrder(c.alpha);
    spec.a = 0.0;
    spec.b = c.T;
    const TimeGrid grid(0.0, c.h, steps_for(c.T, c.h));
    const kamke::StabilityScan scan =
        kamke::stability_scan(spec, c.eps_list, grid, c.tol, c.max_iter);

    json j;
    j["eps"] = c.eps_list;
    j["ratios"] = scan.ratios;
    j["A_hat"] = scan.A_hat;
    j["solved_delta"] = scan.solved_delta;
    j["interval_shrunk"] = scan.interval_shrunk;
    out.add("kamke_report.json", j.dump(2) + "\n");
    out.commit();
    return 0;
}

}  // namespace

int print_acceptance(const std::vector<CriterionResult>& results) {
    bool all = true;
    for (const CriterionResult& r : results) {
        all = all && r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << " C" << r.id << " " << r.name;
        if (!r.detail.empty()) std::cout << " [" << r.detail << "]";
        char buf[32];
        std::snprintf(buf, sizeof(buf), " (%.2fs)", r.seconds);
        std::cout << buf << "\n";
    }
    std::cout << (all ? "selftest: all criteria passed" : "selftest: FAILURES present") << "\n";
    return all ? 0 : 1;
}

int run(const std::string& command, const RunConfig& config, const std::string& out_dir) {
    OutputSet out{fs::path(out_dir)};
    if (command == "certify") return cmd_certify(config, out);
    if (command == "solve") return cmd_solve(config, out);
    if (command == "sweep") return cmd_sweep(config, out);
    if (command == "mnc") return cmd_mnc(config, out);
    if (command == "kamke") return cmd_kamke(config, out);
    if (command == "selftest") return print_acceptance(run_acceptance());
    throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace fracdyn::cli

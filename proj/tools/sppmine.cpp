// SPDX-License-Identifier: Apache-2.0
//
// sppmine — sparse pattern mining via Elastic-Net coordinate descent with
// safe screening and safe subtree pruning over the pattern-enumeration tree.
//
// Subcommands:
//   fit   solve a single (lambda, kappa) cell
//   path  sweep the full 2-D regularization grid
//   cv    cross-validate lambda at a fixed kappa and report the selection
//
// Outputs are CSV files in --out. Verbosity is controlled by the SPP_LOG
// environment variable (quiet|warn|info|debug). Exit codes: 0 success,
// 1 runtime failure (bad data, non-convergence), 2 usage errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spp/log.hpp"
#include "spp/path.hpp"
#include "spp/report.hpp"

namespace {

struct CommonOptions {
    std::string input;
    std::string out_dir = ".";
    std::string structure = "itemset";
    std::string loss = "squared";
    int max_len = 4;
    double eps = spp::Hyperparams{}.epsilon;
    int dense_cycles = spp::Hyperparams{}.dense_cycles;
    int multi_budget = spp::Hyperparams{}.multi_budget;
    long max_epochs = spp::Hyperparams{}.max_epochs;
    long seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--input", opt.input, "dataset file (one instance per line: label ids...)")
        ->required();
    cmd->add_option("--structure", opt.structure, "instance structure: itemset|sequence")
        ->check(CLI::IsMember({"itemset", "sequence"}));
    cmd->add_option("--loss", opt.loss, "loss: squared|logistic")
        ->check(CLI::IsMember({"squared", "logistic"}));
    cmd->add_option("--max-len", opt.max_len, "longest pattern considered")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--eps", opt.eps, "duality-gap tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--dense-T", opt.dense_cycles, "dynamic-screening warmup cadence")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--dyn-M", opt.multi_budget,
                    "epochs both warm-start references stay live")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-epochs", opt.max_epochs, "epoch budget per cell")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed,
                    "recorded for provenance; solving is deterministic and ignores it");
    cmd->add_option("--out", opt.out_dir, "output directory (created if missing)");
}

std::vector<double> parse_kappa_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw CLI::ValidationError("--kappa", "empty entry in kappa list");
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size())
            throw CLI::ValidationError("--kappa", "'" + tok + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError("--kappa", "empty kappa list");
    return out;
}

struct Inputs {
    spp::Dataset data;
    spp::Loss loss{spp::LossKind::squared};
};

Inputs load_inputs(const CommonOptions& opt) {
    Inputs in;
    in.data = spp::load_dataset_file(opt.input, spp::structure_from_string(opt.structure));
    in.loss = spp::Loss(spp::loss_from_string(opt.loss));
    if (in.loss.kind() == spp::LossKind::logistic) spp::require_binary_labels(in.data);
    return in;
}

spp::Hyperparams hyperparams_of(const CommonOptions& opt) {
    spp::Hyperparams hp;
    hp.epsilon = opt.eps;
    hp.dense_cycles = opt.dense_cycles;
    hp.multi_budget = opt.multi_budget;
    hp.max_epochs = opt.max_epochs;
    return hp;
}

std::ofstream open_output(const CommonOptions& opt, const std::string& name) {
    std::filesystem::create_directories(opt.out_dir);
    std::filesystem::path p = std::filesystem::path(opt.out_dir) / name;
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
    return out;
}

double positive_lambda_max(const spp::Dataset& data, const spp::PatternTree& tree,
                           const spp::Loss& loss) {
    double lmax = spp::lambda_max(data, tree, loss);
    if (!(lmax > 0.0))
        throw std::runtime_error(
            "the largest useful penalty is 0 (degenerate labels); nothing to fit");
    spp::log_line(spp::LogLevel::info, "lambda_max = " + spp::format_real(lmax));
    return lmax;
}

int run_fit(const CommonOptions& opt, double lambda_ratio, const std::string& kappa_text) {
    Inputs in = load_inputs(opt);
    std::vector<double> kappas = parse_kappa_list(kappa_text);
    spp::PatternTree tree(in.data, opt.max_len);
    double lmax = positive_lambda_max(in.data, tree, in.loss);
    double lambda = lambda_ratio * lmax;
    double kappa = kappas.front();

    spp::FitResult r = spp::fit(in.data, tree, in.loss, lambda, kappa, {}, hyperparams_of(opt));
    spp::PathCell cell;
    cell.lambda_index = 1;
    cell.kappa_index = 1;
    cell.lambda = lambda;
    cell.kappa = kappa;
    cell.reference_count = r.stats.reference_count;
    cell.solution = std::move(r.solution);
    cell.stats = std::move(r.stats);
    std::vector<spp::PathCell> cells;
    cells.push_back(std::move(cell));

    auto coef = open_output(opt, "coefficients.csv");
    spp::write_coefficients_csv(coef, cells);
    auto rep = open_output(opt, "path_report.csv");
    spp::write_path_report_csv(rep, cells);
    std::cout << "fit: lambda " << spp::format_real(lambda) << ", kappa "
              << spp::format_real(kappa) << ", " << cells[0].solution.beta.size()
              << " active patterns, gap " << spp::format_real(cells[0].solution.gap) << "\n"
              << "wrote coefficients.csv and path_report.csv under " << opt.out_dir << "\n";
    return 0;
}

int run_path(const CommonOptions& opt, int lambda_count, double lambda_ratio,
             const std::string& kappa_text) {
    Inputs in = load_inputs(opt);
    std::vector<double> kappas = parse_kappa_list(kappa_text);
    spp::PatternTree tree(in.data, opt.max_len);
    double lmax = positive_lambda_max(in.data, tree, in.loss);
    spp::PathGrid grid = spp::make_grid(lmax, lambda_count, lambda_ratio, std::move(kappas));

    std::vector<spp::PathCell> cells = spp::path_2d(in.data, tree, in.loss, grid, hyperparams_of(opt));

    auto coef = open_output(opt, "coefficients.csv");
    spp::write_coefficients_csv(coef, cells);
    auto rep = open_output(opt, "path_report.csv");
    spp::write_path_report_csv(rep, cells);
    std::cout << "path: " << grid.lambdas.size() << " x " << grid.kappas.size()
              << " cells solved\n"
              << "wrote coefficients.csv and path_report.csv under " << opt.out_dir << "\n";
    return 0;
}

int run_cv(const CommonOptions& opt, int lambda_count, double lambda_ratio,
           const std::string& kappa_text, const std::string& folds_text, int threads) {
    Inputs in = load_inputs(opt);
    std::vector<double> kappas = parse_kappa_list(kappa_text);
    double kappa = kappas.front();
    spp::PatternTree tree(in.data, opt.max_len);
    double lmax = positive_lambda_max(in.data, tree, in.loss);
    std::vector<double> lambdas =
        spp::make_grid(lmax, lambda_count, lambda_ratio, {0.0}).lambdas;

    spp::FoldPlan plan;
    if (folds_text == "loo") {
        plan = spp::make_loocv_plan(in.data.size());
    } else {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(folds_text, &used);
            if (used != folds_text.size()) throw std::invalid_argument(folds_text);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--folds", "expected 'loo' or a fold count");
        }
        plan = spp::make_kfold_plan(in.data.size(), k);
    }

    std::vector<spp::CvCell> cells =
        spp::cv_path(in.data, in.loss, plan, lambdas, kappa, hyperparams_of(opt), opt.max_len,
                     threads);
    spp::Selection sel = spp::select_hyperparams(cells, lambdas);

    auto rep = open_output(opt, "cv_report.csv");
    spp::write_cv_report_csv(rep, cells, sel, kappa);

    // The fold-1 cells are full-data fits along the grid; publish their
    // coefficients so the selected model is directly available.
    std::vector<spp::PathCell> full_cells;
    for (const spp::CvCell& c : cells) {
        if (c.fold != 1) continue;
        spp::PathCell pc;
        pc.lambda_index = c.lambda_index;
        pc.kappa_index = 1;
        pc.lambda = c.lambda;
        pc.kappa = kappa;
        pc.reference_count = c.reference_count;
        pc.solution = c.solution;
        full_cells.push_back(std::move(pc));
    }
    auto coef = open_output(opt, "coefficients.csv");
    spp::write_coefficients_csv(coef, full_cells);

    std::cout << "cv: selected lambda " << spp::format_real(sel.lambda) << " (index "
              << sel.lambda_index << ") with mean validation error "
              << spp::format_real(sel.mean_validation) << "\n"
              << "wrote cv_report.csv and coefficients.csv under " << opt.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse pattern mining with safe screening and subtree pruning"};
    app.require_subcommand(1);

    CommonOptions fit_opt, path_opt, cv_opt;
    double fit_ratio = 0.01, path_ratio = 0.01, cv_ratio = 0.01;
    int path_count = 10, cv_count = 10, cv_threads = 1;
    std::string fit_kappa = "0", path_kappa = "0,0.01,0.1,1,10,100", cv_kappa = "0";
    std::string cv_folds = "5";

    CLI::App* fit_cmd = app.add_subcommand("fit", "solve one (lambda, kappa) cell");
    add_common(fit_cmd, fit_opt);
    fit_cmd->add_option("--lambda-ratio", fit_ratio, "lambda as a fraction of lambda_max")
        ->check(CLI::Range(1e-12, 1.0));
    fit_cmd->add_option("--kappa", fit_kappa, "kappa (first entry of a comma list is used)");

    CLI::App* path_cmd = app.add_subcommand("path", "sweep the 2-D regularization grid");
    add_common(path_cmd, path_opt);
    path_cmd->add_option("--lambda-count", path_count, "lambda grid size")
        ->check(CLI::PositiveNumber);
    path_cmd->add_option("--lambda-ratio", path_ratio, "smallest lambda / lambda_max")
        ->check(CLI::Range(1e-12, 1.0));
    path_cmd->add_option("--kappa", path_kappa, "comma list of kappas (ascending)");

    CLI::App* cv_cmd = app.add_subcommand("cv", "cross-validate lambda at fixed kappa");
    add_common(cv_cmd, cv_opt);
    cv_cmd->add_option("--lambda-count", cv_count, "lambda grid size")
        ->check(CLI::PositiveNumber);
    cv_cmd->add_option("--lambda-ratio", cv_ratio, "smallest lambda / lambda_max")
        ->check(CLI::Range(1e-12, 1.0));
    cv_cmd->add_option("--kappa", cv_kappa, "kappa (first entry of a comma list is used)");
    cv_cmd->add_option("--folds", cv_folds, "'loo' or a fold count (round-robin folds)");
    cv_cmd->add_option("--threads", cv_threads, "worker threads for validation folds")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fit_cmd->parsed()) return run_fit(fit_opt, fit_ratio, fit_kappa);
        if (path_cmd->parsed()) return run_path(path_opt, path_count, path_ratio, path_kappa);
        return run_cv(cv_opt, cv_count, cv_ratio, cv_kappa, cv_folds, cv_threads);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const spp::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

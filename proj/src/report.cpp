// SPDX-License-Identifier: Apache-2.0
#include "spp/report.hpp"

#include <array>
#include <charconv>
#include <ctime>
#include <ostream>

#include "spp/pattern.hpp"

namespace spp {

std::string format_real(double v) {
    std::array<char, 32> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

void write_coefficients_csv(std::ostream& out, const std::vector<PathCell>& cells) {
    out << timestamp_header() << '\n';
    out << "lambda_index,kappa_index,lambda,kappa,pattern,coefficient\n";
    for (const PathCell& cell : cells) {
        for (const auto& [pattern, coef] : cell.solution.beta) {
            out << cell.lambda_index << ',' << cell.kappa_index << ','
                << format_real(cell.lambda) << ',' << format_real(cell.kappa) << ",\""
                << format_pattern(pattern) << "\"," << format_real(coef) << '\n';
        }
    }
}

void write_path_report_csv(std::ostream& out, const std::vector<PathCell>& cells) {
    out << timestamp_header() << '\n';
    out << "lambda_index,kappa_index,lambda,kappa,gap,active_size,nodes_visited,nodes_pruned,"
           "epochs,beta0,wall_ms\n";
    for (const PathCell& cell : cells) {
        out << cell.lambda_index << ',' << cell.kappa_index << ',' << format_real(cell.lambda)
            << ',' << format_real(cell.kappa) << ',' << format_real(cell.solution.gap) << ','
            << cell.solution.beta.size() << ',' << cell.stats.traverse.nodes_visited << ','
            << cell.stats.traverse.nodes_pruned << ',' << cell.stats.epochs << ','
            << format_real(cell.solution.beta0) << ',' << format_real(cell.stats.wall_ms)
            << '\n';
    }
}

void write_cv_report_csv(std::ostream& out, const std::vector<CvCell>& cells,
                         const Selection& selection, double kappa) {
    out << timestamp_header() << '\n';
    out << "# kappa " << format_real(kappa) << '\n';
    out << "fold,lambda_index,lambda,validation\n";
    for (const CvCell& cell : cells) {
        out << cell.fold << ',' << cell.lambda_index << ',' << format_real(cell.lambda) << ','
            << format_real(cell.validation) << '\n';
    }
    out << "selected," << selection.lambda_index << ',' << format_real(selection.lambda) << ','
        << format_real(selection.mean_validation) << '\n';
}

std::string timestamp_header() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 64> buf;
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string("# generated ") + buf.data();
}

}  // namespace spp

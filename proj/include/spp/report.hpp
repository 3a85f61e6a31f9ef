// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

#include "spp/path.hpp"

namespace spp {

/// Render a double as the shortest decimal string that round-trips exactly.
std::string format_real(double v);

/// coefficients.csv: one row per nonzero coefficient per cell, patterns in
/// canonical order within a cell. Columns:
///   lambda_index,kappa_index,lambda,kappa,pattern,coefficient
void write_coefficients_csv(std::ostream& out, const std::vector<PathCell>& cells);

/// path_report.csv: one row per cell. Columns:
///   lambda_index,kappa_index,lambda,kappa,gap,active_size,nodes_visited,
///   nodes_pruned,epochs,beta0,wall_ms
void write_path_report_csv(std::ostream& out, const std::vector<PathCell>& cells);

/// cv_report.csv: one row per (fold, lambda) cell in visit order (fold 1
/// first), then a trailing "selected" row with the chosen hyperparameters.
/// Columns: fold,lambda_index,lambda,validation
void write_cv_report_csv(std::ostream& out, const std::vector<CvCell>& cells,
                         const Selection& selection, double kappa);

/// Leading comment line carrying the generation timestamp; every report file
/// starts with it. Below it the content is deterministic except for wall-clock
/// columns (wall_ms).
std::string timestamp_header();

}  // namespace spp

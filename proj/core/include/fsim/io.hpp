#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fsim/curves.hpp"
#include "fsim/forecast.hpp"
#include "fsim/mcmc.hpp"

namespace fsim {

// Curve CSV: first row = grid abscissae; each later row = one curve's values
// on that grid; empty cells mark unobserved (sparse) points. Throws io_error
// naming the path and the 1-based row/column of the first malformed cell.
CurveSet read_curves_csv(const std::string& path);
void write_curves_csv(const std::string& path, const CurveSet& curves);

// Response CSV: one float per line; a single optional non-numeric header
// line is skipped.
Eigen::VectorXd read_response_csv(const std::string& path);
void write_response_csv(const std::string& path, const Eigen::VectorXd& y);

// Chain dump CSV with header h2,b2,rho1..rhop and one kept draw per row.
void write_chain_csv(const std::string& path, const ChainSummary& chain);
Eigen::MatrixXd read_chain_csv(const std::string& path,
                               std::vector<std::string>* names = nullptr);

// Interval CSV: index,point,lo,hi plus y_true,covered when truth is given
// (y_true.size() == 0 means absent).
void write_intervals_csv(const std::string& path,
                         const std::vector<Interval>& intervals,
                         const Eigen::VectorXd& y_true);

// Plot TSV: index, point, lo, hi (+ y_true column when available).
void write_plot_tsv(const std::string& path,
                    const std::vector<Interval>& intervals,
                    const Eigen::VectorXd& y_true);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);  // io_error if unreadable

// Shortest round-trip decimal formatting (what all writers use).
std::string format_double(double v);

}  // namespace fsim

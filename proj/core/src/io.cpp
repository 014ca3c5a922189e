#include "fsim/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fsim/errors.hpp"

namespace fsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool parse_double(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

[[noreturn]] void cell_error(const std::string& path, int row, int col,
                             const std::string& what) {
  throw io_error(path + ": row " + std::to_string(row) + ", column " +
                 std::to_string(col) + ": " + what);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path + ": cannot open for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

CurveSet read_curves_csv(const std::string& path) {
  const std::vector<std::string> raw = read_lines(path);
  std::vector<std::pair<int, std::string>> rows;  // (1-based line no, text)
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!trim(raw[i]).empty()) rows.emplace_back(static_cast<int>(i) + 1, raw[i]);
  if (rows.size() < 2)
    throw io_error(path + ": needs a grid row and at least one curve row");

  const std::vector<std::string> grid_cells = split(rows[0].second, ',');
  const int t = static_cast<int>(grid_cells.size());
  if (t < 2) throw io_error(path + ": grid row needs >= 2 points");

  CurveSet out;
  out.grid.resize(t);
  for (int j = 0; j < t; ++j) {
    if (grid_cells[j].empty())
      cell_error(path, rows[0].first, j + 1, "grid value may not be empty");
    double v;
    if (!parse_double(grid_cells[j], v))
      cell_error(path, rows[0].first, j + 1,
                 "not a number: \"" + grid_cells[j] + "\"");
    if (!std::isfinite(v))
      cell_error(path, rows[0].first, j + 1, "grid value must be finite");
    out.grid[j] = v;
  }
  for (int j = 1; j < t; ++j)
    if (!(out.grid[j] > out.grid[j - 1]))
      cell_error(path, rows[0].first, j + 1, "grid must be strictly increasing");

  const int n = static_cast<int>(rows.size()) - 1;
  out.values.setZero(n, t);
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask(n, t);
  mask.setConstant(true);
  bool any_missing = false;
  for (int i = 0; i < n; ++i) {
    const auto& [line_no, text] = rows[i + 1];
    const std::vector<std::string> cells = split(text, ',');
    if (static_cast<int>(cells.size()) != t)
      cell_error(path, line_no, static_cast<int>(cells.size()),
                 "expected " + std::to_string(t) + " cells, found " +
                     std::to_string(cells.size()));
    for (int j = 0; j < t; ++j) {
      if (cells[j].empty()) {
        mask(i, j) = false;
        any_missing = true;
        continue;
      }
      double v;
      if (!parse_double(cells[j], v))
        cell_error(path, line_no, j + 1, "not a number: \"" + cells[j] + "\"");
      if (!std::isfinite(v))
        cell_error(path, line_no, j + 1, "curve value must be finite");
      out.values(i, j) = v;
    }
  }
  if (any_missing) out.mask = mask;
  out.validate();
  return out;
}

void write_curves_csv(const std::string& path, const CurveSet& curves) {
  curves.validate();
  std::ofstream outf(path);
  if (!outf) throw io_error(path + ": cannot open for writing");
  for (int j = 0; j < curves.t(); ++j)
    outf << (j ? "," : "") << format_double(curves.grid[j]);
  outf << "\n";
  for (int i = 0; i < curves.n(); ++i) {
    for (int j = 0; j < curves.t(); ++j) {
      if (j) outf << ",";
      if (!curves.sparse() || curves.mask(i, j))
        outf << format_double(curves.values(i, j));
    }
    outf << "\n";
  }
  if (!outf) throw io_error(path + ": write failed");
}

Eigen::VectorXd read_response_csv(const std::string& path) {
  const std::vector<std::string> raw = read_lines(path);
  std::vector<double> values;
  bool first_content = true;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::string cell = trim(raw[i]);
    if (cell.empty()) continue;
    double v;
    if (!parse_double(cell, v)) {
      if (first_content) {  // a single optional header line
        first_content = false;
        continue;
      }
      cell_error(path, static_cast<int>(i) + 1, 1, "not a number: \"" + cell + "\"");
    }
    if (!std::isfinite(v))
      cell_error(path, static_cast<int>(i) + 1, 1, "response must be finite");
    first_content = false;
    values.push_back(v);
  }
  if (values.empty()) throw io_error(path + ": no response values found");
  Eigen::VectorXd y(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) y[static_cast<int>(i)] = values[i];
  return y;
}

void write_response_csv(const std::string& path, const Eigen::VectorXd& y) {
  std::ofstream outf(path);
  if (!outf) throw io_error(path + ": cannot open for writing");
  outf << "y\n";
  for (int i = 0; i < y.size(); ++i) outf << format_double(y[i]) << "\n";
  if (!outf) throw io_error(path + ": write failed");
}

void write_chain_csv(const std::string& path, const ChainSummary& chain) {
  std::ofstream outf(path);
  if (!outf) throw io_error(path + ": cannot open for writing");
  for (std::size_t c = 0; c < chain.names.size(); ++c)
    outf << (c ? "," : "") << chain.names[c];
  outf << "\n";
  for (int i = 0; i < chain.draws.rows(); ++i) {
    for (int c = 0; c < chain.draws.cols(); ++c)
      outf << (c ? "," : "") << format_double(chain.draws(i, c));
    outf << "\n";
  }
  if (!outf) throw io_error(path + ": write failed");
}

Eigen::MatrixXd read_chain_csv(const std::string& path,
                               std::vector<std::string>* names) {
  const std::vector<std::string> raw = read_lines(path);
  std::vector<std::pair<int, std::string>> rows;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!trim(raw[i]).empty()) rows.emplace_back(static_cast<int>(i) + 1, raw[i]);
  if (rows.size() < 2) throw io_error(path + ": needs a header and draws");

  const std::vector<std::string> header = split(rows[0].second, ',');
  const int d = static_cast<int>(header.size());
  if (d < 2 || header[0] != "h2" || header[1] != "b2")
    throw io_error(path + ": header must start with h2,b2");
  for (int c = 2; c < d; ++c)
    if (header[c] != "rho" + std::to_string(c - 1))
      throw io_error(path + ": unexpected header column \"" + header[c] + "\"");

  Eigen::MatrixXd draws(rows.size() - 1, d);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::vector<std::string> cells = split(rows[i].second, ',');
    if (static_cast<int>(cells.size()) != d)
      cell_error(path, rows[i].first, static_cast<int>(cells.size()),
                 "expected " + std::to_string(d) + " cells");
    for (int c = 0; c < d; ++c) {
      double v;
      if (!parse_double(cells[c], v))
        cell_error(path, rows[i].first, c + 1, "not a number: \"" + cells[c] + "\"");
      draws(static_cast<int>(i) - 1, c) = v;
    }
  }
  if (names) *names = header;
  return draws;
}

void write_intervals_csv(const std::string& path,
                         const std::vector<Interval>& intervals,
                         const Eigen::VectorXd& y_true) {
  const bool with_truth = y_true.size() > 0;
  if (with_truth && y_true.size() != static_cast<int>(intervals.size()))
    throw std::invalid_argument("write_intervals_csv: y_true size mismatch");
  std::ofstream outf(path);
  if (!outf) throw io_error(path + ": cannot open for writing");
  outf << "index,point,lo,hi";
  if (with_truth) outf << ",y_true,covered";
  outf << "\n";
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const Interval& iv = intervals[i];
    outf << i << "," << format_double(iv.point) << "," << format_double(iv.lo)
         << "," << format_double(iv.hi);
    if (with_truth) {
      const double y = y_true[static_cast<int>(i)];
      outf << "," << format_double(y) << ","
           << ((y >= iv.lo && y <= iv.hi) ? 1 : 0);
    }
    outf << "\n";
  }
  if (!outf) throw io_error(path + ": write failed");
}

void write_plot_tsv(const std::string& path,
                    const std::vector<Interval>& intervals,
                    const Eigen::VectorXd& y_true) {
  const bool with_truth = y_true.size() > 0;
  if (with_truth && y_true.size() != static_cast<int>(intervals.size()))
    throw std::invalid_argument("write_plot_tsv: y_true size mismatch");
  std::ofstream outf(path);
  if (!outf) throw io_error(path + ": cannot open for writing");
  outf << "# index\tpoint\tlo\thi" << (with_truth ? "\ty_true" : "") << "\n";
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const Interval& iv = intervals[i];
    outf << i << "\t" << format_double(iv.point) << "\t" << format_double(iv.lo)
         << "\t" << format_double(iv.hi);
    if (with_truth) outf << "\t" << format_double(y_true[static_cast<int>(i)]);
    outf << "\n";
  }
  if (!outf) throw io_error(path + ": write failed");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream outf(path);
  if (!outf) throw io_error(path + ": cannot open for writing");
  outf << content;
  if (!outf) throw io_error(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fsim

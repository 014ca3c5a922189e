#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fsim/errors.hpp"
#include "fsim/io.hpp"
#include "fsim/model.hpp"
#include "fsim/simulation.hpp"

using namespace fsim;

namespace {

void put_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

// message of the io_error thrown by fn, or "" when nothing was thrown
template <typename Fn>
std::string io_message(Fn fn) {
  try {
    fn();
  } catch (const io_error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round-trips through strtod") {
  for (double v : {0.0, -0.0, 0.1, 1.0 / 3.0, 1e-300, -2.5e300, 42.0,
                   12345.678901234567, 5e-324, 1.7976931348623157e308,
                   -1.2345678912345678e-7}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(42.0) == "42");
}

TEST_CASE("dense curve csv round-trips bit-exactly") {
  CurveSet curves;
  curves.grid.resize(3);
  curves.grid << 0.0, 0.5, 1.0;
  curves.values.resize(2, 3);
  curves.values << 1.0 / 3.0, 1e-17, -2.5e300, 0.1, -4.0, 7.25;
  const std::string path = "io_rt_dense.csv";
  write_curves_csv(path, curves);
  const CurveSet back = read_curves_csv(path);
  CHECK_FALSE(back.sparse());
  CHECK((back.grid - curves.grid).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((back.values - curves.values).lpNorm<Eigen::Infinity>() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("sparse curve csv keeps the mask and observed values") {
  CurveSet curves;
  curves.grid.resize(4);
  curves.grid << 0.0, 1.0, 2.0, 3.0;
  curves.values.resize(2, 4);
  curves.values << 1.5, 0.0, 2.5, 3.5, 4.5, 5.5, 0.0, 6.5;
  curves.mask.resize(2, 4);
  curves.mask << true, false, true, true, true, true, false, true;
  const std::string path = "io_rt_sparse.csv";
  write_curves_csv(path, curves);
  const CurveSet back = read_curves_csv(path);
  REQUIRE(back.sparse());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(back.mask(i, j) == curves.mask(i, j));
      if (curves.mask(i, j)) CHECK(back.values(i, j) == curves.values(i, j));
    }
  std::remove(path.c_str());
}

TEST_CASE("curve csv errors carry the path and 1-based cell position") {
  const std::string path = "io_bad_curves.csv";

  put_file(path, "0,1\n2,zz\n");
  std::string msg = io_message([&] { read_curves_csv(path); });
  CHECK(msg.find(path) != std::string::npos);
  CHECK(msg.find("row 2, column 2") != std::string::npos);
  CHECK(msg.find("not a number") != std::string::npos);

  put_file(path, "0,1\n3\n");
  msg = io_message([&] { read_curves_csv(path); });
  CHECK(msg.find("expected 2 cells") != std::string::npos);

  put_file(path, "1,0\n1,2\n");
  msg = io_message([&] { read_curves_csv(path); });
  CHECK(msg.find("strictly increasing") != std::string::npos);

  put_file(path, "0,1\n");
  msg = io_message([&] { read_curves_csv(path); });
  CHECK(msg.find("at least one curve row") != std::string::npos);

  CHECK_THROWS_AS(read_curves_csv("io_no_such_file.csv"), io_error);
  std::remove(path.c_str());
}

TEST_CASE("response csv round-trips and skips one header line") {
  Eigen::VectorXd y(3);
  y << 1.0 / 7.0, -2.5, 1e-12;
  const std::string path = "io_rt_resp.csv";
  write_response_csv(path, y);
  const Eigen::VectorXd back = read_response_csv(path);
  CHECK((back - y).lpNorm<Eigen::Infinity>() == 0.0);

  put_file(path, "response\n1.5\n\n2\n");
  const Eigen::VectorXd two = read_response_csv(path);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == 1.5);
  CHECK(two[1] == 2.0);

  put_file(path, "1.5\nabc\n");
  const std::string msg = io_message([&] { read_response_csv(path); });
  CHECK(msg.find("row 2, column 1") != std::string::npos);

  put_file(path, "header only\n");
  CHECK_THROWS_AS(read_response_csv(path), io_error);
  std::remove(path.c_str());
}

TEST_CASE("chain csv round-trips draws and parameter names") {
  ChainSummary chain;
  chain.names = {"h2", "b2", "rho1"};
  chain.draws.resize(4, 3);
  chain.draws << 0.1, 0.2, 0.3, 0.4, 0.5, -0.6, 1e-8, 2.0, 0.99, 1.0 / 3.0, 7.0,
      -0.25;
  const std::string path = "io_rt_chain.csv";
  write_chain_csv(path, chain);
  std::vector<std::string> names;
  const Eigen::MatrixXd back = read_chain_csv(path, &names);
  CHECK(names == chain.names);
  CHECK((back - chain.draws).lpNorm<Eigen::Infinity>() == 0.0);

  put_file(path, "a,b\n1,2\n");
  std::string msg = io_message([&] { read_chain_csv(path); });
  CHECK(msg.find("header must start with h2,b2") != std::string::npos);

  put_file(path, "h2,b2,rho7\n1,2,3\n");
  msg = io_message([&] { read_chain_csv(path); });
  CHECK(msg.find("rho7") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("interval csv layout with and without the truth") {
  std::vector<Interval> ivs = {{1.0, 0.5, 1.5}, {2.0, 1.0, 3.0}};
  Eigen::VectorXd y(2);
  y << 0.5, 4.0;  // on the lower boundary (covered), outside (not)
  const std::string path = "io_rt_intervals.csv";

  write_intervals_csv(path, ivs, y);
  std::string text = read_text_file(path);
  CHECK(text.find("index,point,lo,hi,y_true,covered\n") == 0);
  CHECK(text.find("0,1,0.5,1.5,0.5,1\n") != std::string::npos);
  CHECK(text.find("1,2,1,3,4,0\n") != std::string::npos);

  write_intervals_csv(path, ivs, Eigen::VectorXd());
  text = read_text_file(path);
  CHECK(text.find("index,point,lo,hi\n") == 0);
  CHECK(text.find("covered") == std::string::npos);

  CHECK_THROWS_AS(write_intervals_csv(path, ivs, y.head(1)),
                  std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("plot tsv layout with and without the truth") {
  std::vector<Interval> ivs = {{1.0, 0.5, 1.5}};
  Eigen::VectorXd y(1);
  y << 0.75;
  const std::string path = "io_rt_plot.tsv";

  write_plot_tsv(path, ivs, y);
  std::string text = read_text_file(path);
  CHECK(text.find("# index\tpoint\tlo\thi\ty_true\n") == 0);
  CHECK(text.find("0\t1\t0.5\t1.5\t0.75\n") != std::string::npos);

  write_plot_tsv(path, ivs, Eigen::VectorXd());
  text = read_text_file(path);
  CHECK(text.find("# index\tpoint\tlo\thi\n") == 0);
  CHECK(text.find("y_true") == std::string::npos);

  CHECK_THROWS_AS(write_plot_tsv(path, ivs, Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("text files round-trip and report unreadable paths") {
  const std::string path = "io_rt_text.txt";
  const std::string content = "line one\nline two\n\ttabbed\n";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  CHECK_THROWS_AS(read_text_file("io_no_such_file.txt"), io_error);
  std::remove(path.c_str());
}

TEST_CASE("model json round-trips bit-exactly and predicts identically") {
  Rng rng(71);
  const CurveSet curves = gen_curves(14, CurveKind::smooth, rng);
  const ResponseSample resp =
      gen_response(curves, ErrorStructure::iid, 0.1, 0.0, rng);
  FitOptions fo;
  fo.ar_order = 1;
  fo.mcmc.burn_in = 30;
  fo.mcmc.keep = 50;
  fo.mcmc.seed = 11;
  const FsimModel model = fit_fsim(curves, resp.y, fo);

  const std::string s = model_to_json(model);
  const FsimModel back = model_from_json(s);
  CHECK(model_to_json(back) == s);

  const CurveSet probe = gen_curves(3, CurveKind::smooth, rng);
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd c = probe.values.row(i).transpose();
    CHECK(back.predict_point(c) == model.predict_point(c));
    const Interval a = model.predict_interval(c, 0.95);
    const Interval b = back.predict_interval(c, 0.95);
    CHECK(a.point == b.point);
    CHECK(a.lo == b.lo);
    CHECK(a.hi == b.hi);
  }

  CHECK(back.h == model.h);
  CHECK(back.b == model.b);
  CHECK((back.rho - model.rho).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((back.innovations - model.innovations).lpNorm<Eigen::Infinity>() == 0.0);

  CHECK_THROWS_AS(model_from_json("not json at all"), io_error);
}

}  // TEST_SUITE

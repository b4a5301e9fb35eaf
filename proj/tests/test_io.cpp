#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pdwave/error.hpp"
#include "pdwave/io.hpp"

using namespace pdwave;
using io::Json;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("discrete coupling round trip") {
  const Json j = Json::parse(R"({"coupling": "discrete", "bonds": [
      {"xi": 1, "potential": {"name": "poly26", "params": {"c2": 0.5, "c6": 0.25}}},
      {"xi": 2, "potential": {"name": "hertz", "params": {"p": 3}, "reflected": true}}]})");
  const Coupling c = io::coupling_from_json(j);
  REQUIRE(c.terms().size() == 2);
  CHECK(c.terms()[0].phi.value(1.0) == doctest::Approx(0.75));
  CHECK(c.terms()[1].phi.is_reflected());
  const Json out = io::to_json(c);
  const Coupling again = io::coupling_from_json(out);
  CHECK(io::to_json(again) == out);
}

TEST_CASE("continuous and shorthand couplings") {
  const Json j = Json::parse(R"({"coupling": "continuous",
      "alpha": {"name": "gaussian", "params": {"scale": 1, "length": 1}},
      "beta": {"name": "constant", "params": {"value": 1}},
      "potential": {"name": "harmonic", "params": {"c": 0.5}},
      "xi_max": 3, "xi_step": 0.5})");
  const Coupling c = io::coupling_from_json(j);
  CHECK(c.terms().size() == 6);
  CHECK(io::coupling_from_json(io::to_json(c)).terms().size() == 6);

  const Coupling s = io::coupling_from_json(Json::parse(R"({"coupling": "silling", "horizon": 1, "xi_step": 0.25})"));
  CHECK(s.terms().size() == 4);
  const Coupling s2 = io::coupling_from_json(io::to_json(s));
  CHECK(s2.terms()[2].weight == doctest::Approx(s.terms()[2].weight));
  CHECK(s2.terms()[2].scale == doctest::Approx(s.terms()[2].scale));
}

TEST_CASE("strict parsing") {
  CHECK(code_of([] { (void)io::coupling_from_json(Json::parse(R"({"coupling": "magic"})")); }) == ErrorCode::Config);
  CHECK(code_of([] {
          (void)io::coupling_from_json(Json::parse(R"({"coupling": "discrete", "bonds": [], "extra": 1})"));
        }) == ErrorCode::Config);
  CHECK(code_of([] { (void)io::grid_from_json(Json::parse(R"({"L": 1, "N": 64, "M": 2})")); }) == ErrorCode::Config);
  CHECK(code_of([] { (void)io::grid_from_json(Json::parse(R"({"L": "one", "N": 64})")); }) == ErrorCode::Config);
  CHECK(code_of([] { (void)io::solve_options_from_json(Json::parse(R"({"initial": "sawtooth"})")); }) ==
        ErrorCode::Config);
  CHECK(code_of([] { (void)io::solve_options_from_json(Json::parse(R"({"tol_residual": -1})")); }) ==
        ErrorCode::Config);
}

TEST_CASE("solve options round trip") {
  const SolveOptions o = io::solve_options_from_json(Json::parse(
      R"({"max_iterations": 12, "sign": "reflected", "initial": "indicator", "convolution": "direct"})"));
  CHECK(o.max_iterations == 12);
  CHECK(o.sign == ConeSign::Reflected);
  CHECK(o.initial == InitialKind::Indicator);
  CHECK(o.convolution == Convolution::Direct);
  const SolveOptions back = io::solve_options_from_json(io::to_json(o));
  CHECK(io::to_json(back) == io::to_json(o));
  const SweepOptions s = io::sweep_options_from_json(Json::parse(R"({"warm_start": false, "max_iterations": 3})"));
  CHECK_FALSE(s.warm_start);
  CHECK(s.solve.max_iterations == 3);
}

TEST_CASE("profile serialization") {
  const Grid g(1.0, 8);
  const Profile w = Profile::from_function(g, [](double x) { return 1.0 / 3.0 + x; });
  const Json j = io::to_json(w);
  CHECK(j["grid"]["L"] == 1.0);
  CHECK(j["grid"]["N"] == 8);
  const Profile back = io::profile_from_json(j);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(back[i] == w[i]);

  const std::string csv = io::profile_csv(w);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,value");
  std::getline(in, line);
  const double x = std::stod(line.substr(0, line.find(',')));
  const double v = std::stod(line.substr(line.find(',') + 1));
  CHECK(x == -1.0);
  CHECK(v == w[0]);  // full precision survives the round trip
}

TEST_CASE("csv quoting and number formatting") {
  CHECK(io::csv_field("plain") == "plain");
  CHECK(io::csv_field("a,b") == "\"a,b\"");
  CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(std::nan("")) == "nan");
  CHECK(io::format_double(-INFINITY) == "-inf");
}

TEST_CASE("sweep rows and thresholds round trip") {
  SweepRow r;
  r.K = 0.3;
  r.ratio = 2.5;
  r.status = SolveStatus::Converged;
  const auto rows = io::sweep_rows_from_json(Json::array({io::to_json(r)}));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].K == 0.3);
  CHECK(rows[0].status == SolveStatus::Converged);

  ThresholdResult t;
  t.found = true;
  t.K_low = 0.2;
  t.K_high = 0.3;
  t.K_estimate = 0.25;
  const ThresholdResult back = io::threshold_from_json(io::to_json(t));
  CHECK(back.found);
  CHECK(back.K_high == 0.3);
}

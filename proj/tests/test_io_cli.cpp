#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "test_support.hpp"
#include "urec/json_io.hpp"

using namespace urec;
using nlohmann::json;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string("urec_test_") + name;
}

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args, const std::string& stdout_path) {
  const std::string cmd = std::string(URECCLI_PATH) + " " + args + " > " + stdout_path + " 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("measure json round trip") {
  std::mt19937_64 rng(2);
  const auto m = testing::random_mixed_measure(rng, 3, 0.7);
  const auto j = io::measure_to_json(m);
  const auto back = io::measure_from_json(j);
  for (Complex z : {Complex{0.3, 0.2}, Complex{-0.4, 0.5}})
    CHECK(std::abs(stieltjes(m, z) - stieltjes(back, z)) < 1e-14);

  CHECK_THROWS_AS(io::measure_from_json(json{{"atoms", json::array()}, {"bogus", 1}}),
                  ValidationError);
  CHECK_THROWS_AS(
      io::measure_from_json(json::parse(
          R"({"ac_fourier":[{"n":-1,"re":0.1,"im":0.0},{"n":0,"re":1.0,"im":0.0}]})")),
      ValidationError);
}

TEST_CASE("chain json round trip") {
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  const auto c = MarkovChain::validated(p);
  const auto back = io::chain_from_json(io::chain_to_json(c));
  CHECK((Eigen::MatrixXd(back.P) - p).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(io::chain_from_json(json{{"P", {{0.5, 0.5}, {0.5, 0.5}}}, {"extra", true}}),
                  ValidationError);
}

TEST_CASE("schur representation json round trip across all variants") {
  std::vector<SchurRepresentation> reps;
  reps.push_back(RationalSchur{{Complex{0.7}, Complex{-1.0}}, {Complex{1.0}, Complex{-0.7}}});
  reps.push_back(BlaschkeSchur{{Complex{0.2, 0.4}, Complex{-0.5, 0.0}}, unit(1.2)});
  reps.push_back(TaylorSchur{{Complex{0.1, 0.2}, Complex{0.05, -0.02}}});
  reps.push_back(VerblunskySchur{{Complex{0.5, 0.0}, Complex{0.0, 0.0}}, 2});
  for (const auto& rep : reps) {
    const auto back = io::schur_from_json(io::schur_to_json(rep));
    for (Complex z : {Complex{0.25, 0.3}, Complex{-0.6, 0.1}})
      CHECK(std::abs(schur_eval(rep, z) - schur_eval(back, z)) < 1e-14);
  }
  CHECK_THROWS_AS(io::schur_from_json(json{{"rational", {{"num", json::array()}, {"den", json::array()}}},
                                           {"taylor", {{"coeffs", json::array()}}}}),
                  ValidationError);
}

TEST_CASE("walk json round trip") {
  CoinedWalkSpec w;
  w.coin_gamma = {Complex{0.3, 0.1}};
  w.tail_gamma = Complex{0.5, -0.2};
  const auto back = io::walk_from_json(io::walk_to_json(w));
  CHECK(back.coin_gamma.size() == 1);
  CHECK(std::abs(*back.tail_gamma - *w.tail_gamma) < 1e-15);
  CHECK_THROWS_AS(io::walk_from_json(json{{"domain", "circle"}}), ValidationError);
}

TEST_CASE("momentum symbol from trigonometric-polynomial entries") {
  // the coin symbol written out as offset/coefficient lists
  const double g = 0.5, rho = std::sqrt(1.0 - g * g);
  const json j = {
      {"lattice_dim", 1},
      {"fiber_dim", 2},
      {"entries",
       {{{"row", 0}, {"col", 0}, {"terms", {{{"offset", {1}}, {"re", rho}, {"im", 0.0}}}}},
        {{"row", 0}, {"col", 1}, {"terms", {{{"offset", {1}}, {"re", -g}, {"im", 0.0}}}}},
        {{"row", 1}, {"col", 0}, {"terms", {{{"offset", {-1}}, {"re", g}, {"im", 0.0}}}}},
        {{"row", 1}, {"col", 1}, {"terms", {{{"offset", {-1}}, {"re", rho}, {"im", 0.0}}}}}}}};
  const auto sym = io::symbol_from_json(j);
  const auto ref = coin_symbol({g, 0.0});
  Eigen::VectorXd p(1);
  for (double pv : {0.3, -1.2, 2.9}) {
    p(0) = pv;
    CHECK((sym.at(p) - ref.at(p)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("csv formatting") {
  CHECK(io::format_sig17(0.5) == "0.5");
  CHECK(io::format_sig17(1.0 / 3.0) == "0.33333333333333331");
  ArrivalRecord rec;
  rec.truncation = 2;
  rec.a = {Complex{0.0}, Complex{0.5, -0.25}, Complex{0.1, 0.0}};
  rec.s = {1.0, 0.6875, 0.6775};
  rec.r_partial = 0.3225;
  const auto csv = io::monitored_csv(rec);
  CHECK(csv.substr(0, 20) == "n,a_re,a_im,a_abs2,s");
  CHECK(csv.find("1,0.5,-0.25,0.3125,0.6875") != std::string::npos);
}

TEST_CASE("cli: simulate on the quarter-turn measure") {
  const auto mpath = tmp_path("rotation.json");
  write(mpath,
        R"({"atoms":[{"angle":0.7853981633974483,"weight":0.5},)"
        R"({"angle":-0.7853981633974483,"weight":0.5}]})");
  const auto out = tmp_path("sim.json");
  REQUIRE(run_cli("simulate --measure " + mpath + " --N 100 --out-json " + out, tmp_path("sim.log")) == 0);
  const auto j = json::parse(slurp(out));
  CHECK(j.at("tau_int_candidate").get<int>() == 2);
  CHECK(std::abs(j.at("tau_lower").get<double>() - 2.0) < 1e-6);
  CHECK(std::abs(j.at("var").get<double>() - 2.0) < 1e-6);
  CHECK(j.at("R_lower").get<double>() >= 1.0 - 1e-8);
}

TEST_CASE("cli: constant-coin walk value") {
  const auto out = tmp_path("cc.json");
  REQUIRE(run_cli("walk constant-coin --gamma 0.70710678 --domain half-line --out-json " + out,
                  tmp_path("cc.log")) == 0);
  const auto j = json::parse(slurp(out));
  CHECK(std::abs(j.at("R_closed_form").get<double>() - 0.636620) < 1e-6);
  CHECK(j.at("quadrature_deviation").get<double>() < 1e-8);
}

TEST_CASE("cli: two-state chain classical return time") {
  const auto cpath = tmp_path("twostate.json");
  write(cpath, R"({"P":[[0.5,0.5],[0.5,0.5]],"origin":0,"pi":[0.5,0.5]})");
  const auto out = tmp_path("markov.json");
  REQUIRE(run_cli("markov --chain " + cpath + " --N 400 --out-json " + out, tmp_path("mk.log")) ==
          0);
  const auto j = json::parse(slurp(out));
  CHECK(std::abs(j.at("tau_classical").get<double>() - 2.0) < 1e-10);
  CHECK(std::abs(j.at("tau_from_q").get<double>() - 2.0) < 1e-10);
}

TEST_CASE("cli: exit codes and determinism") {
  const auto bad = tmp_path("bad.json");
  write(bad, R"({"atoms":[{"angle":0.0,"weight":0.7}]})");  // mass != 1
  CHECK(run_cli("simulate --measure " + bad + " --N 10", tmp_path("bad.log")) != 0);

  const auto mpath = tmp_path("pm.json");
  write(mpath, R"({"atoms":[{"angle":1.0,"weight":1.0}]})");
  const auto o1 = tmp_path("d1.json"), o2 = tmp_path("d2.json");
  const auto c1 = tmp_path("d1.csv"), c2 = tmp_path("d2.csv");
  REQUIRE(run_cli("simulate --measure " + mpath + " --N 50 --out-json " + o1 + " --out-csv " + c1,
                  tmp_path("h1.log")) == 0);
  REQUIRE(run_cli("simulate --measure " + mpath + " --N 50 --out-json " + o2 + " --out-csv " + c2,
                  tmp_path("h2.log")) == 0);
  CHECK(slurp(o1) == slurp(o2));  // byte-identical reruns
  CHECK(slurp(c1) == slurp(c2));
}

TEST_CASE("cli: measure analyze reports transforms and radial atom masses") {
  const auto mpath = tmp_path("rot2.json");
  write(mpath,
        R"({"atoms":[{"angle":0.7853981633974483,"weight":0.5},)"
        R"({"angle":-0.7853981633974483,"weight":0.5}]})");
  const auto out = tmp_path("analyze.json");
  REQUIRE(run_cli("measure analyze --measure " + mpath + " --N 16 --out-json " + out,
                  tmp_path("an.log")) == 0);
  const auto j = json::parse(slurp(out));
  CHECK(j.at("classification") == "recurrent");
  CHECK(j.at("sjk_classification") == "sjk_recurrent");
  const double c = std::cos(kPi / 4), z = 0.5;
  const double want_schur = (c - z) / (1.0 - c * z);
  CHECK(std::abs(j.at("transforms_at_z").at("schur").at("re").get<double>() - want_schur) < 1e-12);
  for (const auto& e : j.at("atom_mass_estimates"))
    CHECK(std::abs(e.at("radial_estimate").get<double>() - 0.5) < 1e-3);
}

TEST_CASE("cli: walk simulate runs a windowed monitored evolution") {
  const auto wpath = tmp_path("walk.json");
  write(wpath, R"({"domain":"half-line","coins":[],"constant_tail":)"
               R"({"gamma_re":0.70710678118654752,"gamma_im":0.0}})");
  const auto out = tmp_path("wsim.json");
  REQUIRE(run_cli("walk simulate --walk " + wpath + " --N 200 --out-json " + out,
                  tmp_path("ws.log")) == 0);
  const auto j = json::parse(slurp(out));
  const double want = 2.0 / kPi;
  CHECK(j.at("R_lower").get<double>() <= want);
  CHECK(j.at("R_upper").get<double>() >= want);
  CHECK(j.at("tau_status") == "lower_bound");
}

TEST_CASE("cli: schur subcommand reports zeros, winding and variance") {
  const auto spath = tmp_path("schur.json");
  write(spath,
        R"({"rational":{"num":[{"re":0.70710678118654752,"im":0},{"re":-1,"im":0}],)"
        R"("den":[{"re":1,"im":0},{"re":-0.70710678118654752,"im":0}]}})");
  const auto out = tmp_path("schur_out.json");
  REQUIRE(run_cli("schur --schur " + spath + " --out-json " + out, tmp_path("sc.log")) == 0);
  const auto j = json::parse(slurp(out));
  CHECK(j.at("winding").get<int>() == 2);
  CHECK(std::abs(j.at("variance_from_zeros").get<double>() - 2.0) < 1e-10);
  CHECK(j.at("zeros").size() == 1);
}

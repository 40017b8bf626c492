// urec: spectral recurrence toolkit for monitored unitary evolutions.
// Subcommands parse JSON inputs, dispatch to the library, and emit CSV series
// plus schema-versioned JSON summaries. Exit codes: 0 ok, 1 invalid input,
// 2 numerical non-convergence.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "urec/classical.hpp"
#include "urec/cmv.hpp"
#include "urec/fourier.hpp"
#include "urec/json_io.hpp"
#include "urec/measure.hpp"
#include "urec/monitored.hpp"
#include "urec/schur.hpp"

using urec::Complex;
using ojson = nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::size_t n = 0;  // 0: per-command default (simulate: max(100, 20 d))
  double tol = 0.0;   // 0: library defaults
  std::string out_csv, out_json;
  std::string grid;        // quadrature/scan grid size
  std::string r_schedule;  // "kmin:kmax"

  std::size_t n_or(std::size_t fallback) const { return n ? n : fallback; }
};

urec::Tolerances tolerances_of(const CommonOpts& c) {
  urec::Tolerances t;
  if (c.tol > 0.0) {
    t.algebraic = c.tol;
    t.psd = c.tol;
  }
  return t;
}

Complex parse_complex(const std::string& s) {
  const auto sep = s.find(',');
  if (sep == std::string::npos) return {std::stod(s), 0.0};
  return {std::stod(s.substr(0, sep)), std::stod(s.substr(sep + 1))};
}

urec::RadialSchedule radial_schedule_of(const CommonOpts& c) {
  urec::RadialSchedule s;
  if (!c.r_schedule.empty()) {
    const auto sep = c.r_schedule.find(':');
    if (sep == std::string::npos)
      throw urec::ValidationError("--r-schedule expects kmin:kmax");
    s.k_min = std::stoi(c.r_schedule.substr(0, sep));
    s.k_max = std::stoi(c.r_schedule.substr(sep + 1));
  }
  return s;
}

void emit(const CommonOpts& c, const ojson& summary, const std::string& csv = "") {
  if (!c.out_json.empty())
    urec::io::write_text(c.out_json, summary.dump(2) + "\n");
  else
    std::cout << summary.dump(2) << "\n";
  if (!c.out_csv.empty() && !csv.empty()) urec::io::write_text(c.out_csv, csv);
}

void add_common(CLI::App* app, CommonOpts& c) {
  app->add_option("--N", c.n, "truncation length");
  app->add_option("--tol", c.tol, "override the algebraic tolerance");
  app->add_option("--out-csv", c.out_csv, "CSV series output path");
  app->add_option("--out-json", c.out_json, "JSON summary output path (default: stdout)");
  app->add_option("--grid", c.grid, "grid size for scans/quadrature");
  app->add_option("--r-schedule", c.r_schedule, "radial schedule kmin:kmax (r_k = 1-2^-k)");
}

ojson monitored_summary(const urec::ArrivalRecord& rec, const urec::Tolerances& tol) {
  const auto r = urec::return_probability(rec);
  const auto tau = urec::expected_return_time(rec);
  const auto var = urec::return_time_variance(rec);
  ojson j;
  j["schema"] = "urec-monitored-1";
  j["R_lower"] = r.lower;
  j["R_upper"] = r.upper;
  j["tau_lower"] = tau.tau;
  j["tau_int_candidate"] = static_cast<long>(std::llround(tau.tau));
  j["tau_status"] = tau.status == urec::ReturnTimeResult::Status::ok ? "converged"
                    : tau.status == urec::ReturnTimeResult::Status::lower_bound
                        ? "lower_bound"
                        : "undefined, system transient";
  j["var"] = var.variance;
  j["N"] = rec.truncation;
  j["s_N"] = rec.s.back();
  j["tol_algebraic"] = tol.algebraic;
  return j;
}

int cmd_measure_analyze(const std::string& path, const std::string& z_str, const CommonOpts& c) {
  const auto tol = tolerances_of(c);
  const auto m = urec::io::measure_from_json(urec::io::load_file(path), tol);
  const std::size_t n = c.n_or(100);
  const auto mom = urec::moments(m, n);
  const auto cls = urec::classify_recurrence(m, tol);
  const auto sjk = urec::sjk_classify(urec::moments(m, std::max<std::size_t>(n, 512)));
  ojson j;
  j["schema"] = "urec-measure-1";
  j["n_atoms"] = m.atoms().size();
  j["atom_mass"] = m.atom_mass();
  j["ac_mass"] = m.ac_mass();
  j["classification"] = cls.recurrent ? "recurrent" : "transient";
  j["sjk_classification"] = sjk.verdict == urec::SjkClass::recurrent    ? "sjk_recurrent"
                            : sjk.verdict == urec::SjkClass::transient ? "sjk_transient"
                                                                       : "inconclusive";
  j["sjk_partial_sum"] = sjk.partial_sum;
  j["sjk_wiener"] = sjk.wiener;
  {
    const Complex z = z_str.empty() ? Complex{0.5, 0.0} : parse_complex(z_str);
    const Complex mh = urec::stieltjes(m, z);
    const Complex f = urec::caratheodory(m, z);
    const Complex s = urec::schur_from_measure(m, z, tol);
    j["transforms_at_z"] = {{"z", {{"re", z.real()}, {"im", z.imag()}}},
                            {"stieltjes", {{"re", mh.real()}, {"im", mh.imag()}}},
                            {"caratheodory", {{"re", f.real()}, {"im", f.imag()}}},
                            {"schur", {{"re", s.real()}, {"im", s.imag()}}}};
  }
  {
    const auto sched = radial_schedule_of(c);
    ojson masses = ojson::array();
    for (std::size_t i = 0; i < m.atoms().size(); ++i)
      masses.push_back({{"angle", m.atoms()[i].angle},
                        {"weight", m.atoms()[i].weight},
                        {"radial_estimate", urec::atom_mass_at(m, m.atom_position(i), sched, tol)}});
    j["atom_mass_estimates"] = masses;
  }
  j["N"] = n;
  j["tol_algebraic"] = tol.algebraic;
  std::ostringstream csv;
  csv << "n,mu_re,mu_im\n";
  for (std::size_t n = 0; n < mom.mu.size(); ++n)
    csv << n << "," << urec::io::format_sig17(mom.mu[n].real()) << ","
        << urec::io::format_sig17(mom.mu[n].imag()) << "\n";
  emit(c, j, csv.str());
  return 0;
}

int cmd_simulate(const std::string& measure_path, const std::string& walk_path, std::size_t state,
                 const CommonOpts& c) {
  const auto tol = tolerances_of(c);
  urec::ArrivalRecord rec;
  if (!measure_path.empty()) {
    const auto m = urec::io::measure_from_json(urec::io::load_file(measure_path), tol);
    const auto sys = urec::system_from_atoms(m);
    const std::size_t n = c.n_or(std::max<std::size_t>(100, 20 * std::size_t(sys.op->dim())));
    rec = urec::monitored_run(sys, n, tol);
  } else if (!walk_path.empty()) {
    const auto walk = urec::io::walk_from_json(urec::io::load_file(walk_path));
    const std::size_t n = c.n_or(100);
    rec = urec::monitored_run(urec::walk_monitored_system(walk, n, state), n, tol);
  } else {
    throw urec::ValidationError("simulate: provide --measure or --walk");
  }
  emit(c, monitored_summary(rec, tol), urec::io::monitored_csv(rec));
  return 0;
}

int cmd_schur(const std::string& schur_path, const std::string& feas_path, std::size_t k_max,
              const CommonOpts& c) {
  const auto tol = tolerances_of(c);
  ojson j;
  j["schema"] = "urec-schur-1";
  if (!feas_path.empty()) {
    const auto spec = urec::io::load_file(feas_path);
    std::vector<Complex> a;
    for (const auto& e : spec.at("amplitudes"))
      a.push_back({e.at("re").get<double>(), e.at("im").get<double>()});
    const auto f = urec::toeplitz_feasibility(a, k_max ? k_max : a.size(), tol);
    j["feasible"] = f.feasible;
    j["first_failing_order"] = f.first_failing_order;
    j["min_eigenvalues"] = f.min_eigenvalue;
    j["tol_psd"] = tol.psd;
    emit(c, j);
    return 0;
  }
  const auto rep = urec::io::schur_from_json(urec::io::load_file(schur_path));
  const bool rational_like = std::holds_alternative<urec::RationalSchur>(rep) ||
                             std::holds_alternative<urec::BlaschkeSchur>(rep);
  if (rational_like) {
    const urec::RationalSchur rat = std::holds_alternative<urec::RationalSchur>(rep)
                                        ? std::get<urec::RationalSchur>(rep)
                                        : urec::rational_from_blaschke(
                                              std::get<urec::BlaschkeSchur>(rep));
    const auto zeros = urec::blaschke_zeros(rat, tol);
    ojson zl = ojson::array();
    for (const auto& z : zeros) zl.push_back({{"re", z.real()}, {"im", z.imag()}});
    j["zeros"] = zl;
    j["winding"] = urec::winding_number(rep, 256, tol);
    j["variance_from_zeros"] = urec::variance_from_zeros(zeros);
  }
  const auto sched = radial_schedule_of(c).radii();
  const auto taus = urec::tau_radial_estimate(rep, sched, {}, tol);
  j["tau_radial_lower_bounds"] = taus;
  j["r_schedule"] = sched;
  j["tol_inner"] = tol.inner;
  emit(c, j);
  return 0;
}

int cmd_markov(const std::string& chain_path, const std::string& sjk_measure_path,
               const CommonOpts& c) {
  const auto tol = tolerances_of(c);
  ojson j;
  j["schema"] = "urec-markov-1";
  std::string csv;
  if (!chain_path.empty()) {
    const auto spec = urec::io::load_file(chain_path);
    const auto chain = urec::io::chain_from_json(spec, tol);
    const auto rs = urec::return_sequence(chain, c.n_or(1000), tol);
    const auto q = urec::first_return_from_return(rs.p);
    const auto pol = urec::polya_classify(rs.p);
    double tau_q = 0.0;
    for (std::size_t n = 0; n < q.size(); ++n) tau_q += double(n) * q[n];
    j["polya"] = pol.verdict == urec::PolyaClass::recurrent    ? "recurrent"
                 : pol.verdict == urec::PolyaClass::transient ? "transient"
                                                              : "inconclusive";
    j["partial_sum_p"] = pol.partial_sum;
    if (pol.r_classical) j["R_classical"] = *pol.r_classical;
    j["tau_from_q"] = tau_q;
    j["leakage"] = rs.leakage;
    if (spec.contains("pi")) {
      Eigen::VectorXd pi(static_cast<Eigen::Index>(spec.at("pi").size()));
      for (Eigen::Index i = 0; i < pi.size(); ++i)
        pi(i) = spec.at("pi")[static_cast<std::size_t>(i)].get<double>();
      const auto sp = urec::reversible_spectral(chain, pi, tol);
      j["mass_at_one"] = sp.mass_at_one;
      if (sp.tau_classical) j["tau_classical"] = *sp.tau_classical;
    }
    const auto sj = urec::sjk_quantities(std::span<const double>(rs.p).subspan(1));
    j["R_sjk"] = sj.r_sjk;
    j["tau_sjk"] = sj.tau_sjk;
    csv = urec::io::renewal_csv(rs.p, q, sj.q_sjk);
  } else if (!sjk_measure_path.empty()) {
    const auto m = urec::io::measure_from_json(urec::io::load_file(sjk_measure_path), tol);
    const std::size_t len = c.n_or(1000);
    const auto mom = urec::moments(m, len);
    std::vector<double> p(len);
    for (std::size_t n = 1; n <= len; ++n) p[n - 1] = std::norm(mom.mu[n]);
    std::vector<double> weights;
    for (const auto& a : m.atoms()) weights.push_back(a.weight);
    const auto sj = urec::sjk_quantities(p, weights);
    j["R_sjk"] = sj.r_sjk;
    j["R_sjk_tail"] = sj.r_sjk_tail;
    j["tau_sjk"] = sj.tau_sjk;
    j["tau_sjk_lower_bound_only"] = sj.tau_lower_bound_only;
    if (sj.tau_tilde) j["tau_tilde"] = *sj.tau_tilde;
    std::vector<double> pfull(p.size() + 1, 0.0);
    pfull[0] = 1.0;
    std::copy(p.begin(), p.end(), pfull.begin() + 1);
    csv = urec::io::renewal_csv(pfull, urec::first_return_from_return(pfull), sj.q_sjk);
  } else {
    throw urec::ValidationError("markov: provide --chain or --sjk-measure");
  }
  j["N"] = c.n_or(1000);
  j["tol_algebraic"] = tol.algebraic;
  emit(c, j, csv);
  return 0;
}

int cmd_walk_constant_coin(const std::string& gamma_str, const std::string& domain,
                           const CommonOpts& c) {
  const Complex gamma = parse_complex(gamma_str);
  const auto dom = domain == "line" ? urec::CoinedWalkSpec::Domain::line
                                    : urec::CoinedWalkSpec::Domain::half_line;
  const double r_closed = urec::constant_coin_return(gamma, dom);
  const auto bps = urec::constant_coin_breakpoints(gamma);
  const double r_quad = urec::circle_mean_abs_power(
      [&](Complex z) { return urec::constant_coin_schur(gamma, z); },
      dom == urec::CoinedWalkSpec::Domain::half_line ? 2 : 4, bps);
  ojson j;
  j["schema"] = "urec-walk-1";
  j["gamma"] = {{"re", gamma.real()}, {"im", gamma.imag()}};
  j["domain"] = domain.empty() ? "half-line" : domain;
  j["R_closed_form"] = r_closed;
  j["R_quadrature"] = r_quad;
  j["quadrature_deviation"] = std::abs(r_closed - r_quad);
  std::string csv;
  if (dom == urec::CoinedWalkSpec::Domain::half_line) {
    const auto a = urec::constant_coin_amplitudes(gamma, c.n_or(1000));
    double partial = 0.0;
    std::ostringstream os;
    os << "n,a_re,a_im,a_abs2\n";
    for (std::size_t n = 1; n < a.size(); ++n) {
      partial += std::norm(a[n]);
      os << n << "," << urec::io::format_sig17(a[n].real()) << ","
         << urec::io::format_sig17(a[n].imag()) << "," << urec::io::format_sig17(std::norm(a[n]))
         << "\n";
    }
    csv = os.str();
    j["R_amplitude_partial_sum"] = partial;
  }
  j["N"] = c.n_or(1000);
  emit(c, j, csv);
  return 0;
}

int cmd_walk_khrushchev(const std::string& walk_path, std::size_t state, const CommonOpts& c) {
  const auto walk = urec::io::walk_from_json(urec::io::load_file(walk_path));
  ojson j;
  j["schema"] = "urec-walk-1";
  j["state"] = state;
  j["R"] = urec::khrushchev_return(walk, state);
  emit(c, j);
  return 0;
}

int cmd_walk_phase_scan(const std::string& gamma_str, const CommonOpts& c) {
  const Complex gamma = parse_complex(gamma_str);
  const std::size_t grid = c.grid.empty() ? 32 : std::stoul(c.grid);
  const auto sym = urec::coin_symbol(gamma);
  const auto pts = urec::phase_scan(sym, grid, c.n_or(512));
  ojson j;
  j["schema"] = "urec-phase-scan-1";
  j["gamma"] = {{"re", gamma.real()}, {"im", gamma.imag()}};
  j["grid"] = grid;
  j["N"] = c.n_or(512);
  double rmin = 1.0, rmax = 0.0;
  for (const auto& pt : pts) {
    rmin = std::min(rmin, pt.r);
    rmax = std::max(rmax, pt.r);
  }
  j["R_min"] = rmin;
  j["R_max"] = rmax;
  emit(c, j, urec::io::phase_scan_csv(pts));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("UREC_THREADS")) {
    const int t = std::atoi(threads);
    if (t > 0) Eigen::setNbThreads(t);
  }
  CLI::App app{"urec: recurrence statistics of monitored unitary evolutions"};
  app.require_subcommand(1);

  // measure analyze
  auto* measure = app.add_subcommand("measure", "spectral-measure operations");
  measure->require_subcommand(1);
  auto* analyze = measure->add_subcommand("analyze", "moments, transforms, classification");
  std::string measure_path, analyze_z;
  CommonOpts mo;
  analyze->add_option("--measure", measure_path, "measure JSON")->required();
  analyze->add_option("--z", analyze_z, "transform evaluation point re[,im] (default 0.5)");
  add_common(analyze, mo);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "monitored first-return run");
  std::string sim_measure, sim_walk;
  std::size_t sim_state = 0;
  CommonOpts so;
  simulate->add_option("--measure", sim_measure, "finite-atom measure JSON");
  simulate->add_option("--walk", sim_walk, "coined walk JSON (CMV window simulation)");
  simulate->add_option("--state", sim_state, "starting basis index for walks");
  add_common(simulate, so);

  // schur
  auto* schur = app.add_subcommand("schur", "zeros, winding, variance, feasibility");
  std::string schur_path, feas_path;
  std::size_t k_max = 0;
  CommonOpts co;
  schur->add_option("--schur", schur_path, "Schur representation JSON");
  schur->add_option("--feasibility", feas_path, "JSON with {\"amplitudes\":[{re,im}...]}");
  schur->add_option("--k-max", k_max, "feasibility order cap");
  add_common(schur, co);

  // markov
  auto* markov = app.add_subcommand("markov", "classical renewal and SJK quantities");
  std::string chain_path, sjk_measure;
  CommonOpts ko;
  markov->add_option("--chain", chain_path, "chain JSON");
  markov->add_option("--sjk-measure", sjk_measure, "measure JSON: SJK quantities of p_n=|mu_n|^2");
  add_common(markov, ko);

  // walk
  auto* walk = app.add_subcommand("walk", "CMV and Fourier walk computations");
  walk->require_subcommand(1);
  auto* wcc = walk->add_subcommand("constant-coin", "closed-form return probabilities");
  std::string gamma_str = "0.70710678118654752", wcc_domain = "half-line";
  CommonOpts wo;
  wcc->add_option("--gamma", gamma_str, "coin parameter re[,im]");
  wcc->add_option("--domain", wcc_domain, "half-line or line")
      ->check(CLI::IsMember({"half-line", "line"}));
  add_common(wcc, wo);
  auto* wsim = walk->add_subcommand("simulate", "windowed monitored run of a walk");
  std::string wsim_path;
  std::size_t wsim_state = 0;
  CommonOpts wso;
  wsim->add_option("--walk", wsim_path, "walk JSON")->required();
  wsim->add_option("--state", wsim_state, "starting basis index");
  add_common(wsim, wso);
  auto* wkh = walk->add_subcommand("khrushchev", "return probability from a basis state");
  std::string wkh_path;
  std::size_t wkh_state = 0;
  CommonOpts who;
  wkh->add_option("--walk", wkh_path, "walk JSON")->required();
  wkh->add_option("--state", wkh_state, "basis index k");
  add_common(wkh, who);
  auto* wps = walk->add_subcommand("phase-scan", "R vs relative phase of (1,e^{i theta})/sqrt(2)");
  std::string wps_gamma = "0.70710678118654752";
  CommonOpts wpo;
  wps->add_option("--gamma", wps_gamma, "coin parameter re[,im]");
  add_common(wps, wpo);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_measure_analyze(measure_path, analyze_z, mo);
    if (simulate->parsed()) return cmd_simulate(sim_measure, sim_walk, sim_state, so);
    if (schur->parsed()) return cmd_schur(schur_path, feas_path, k_max, co);
    if (markov->parsed()) return cmd_markov(chain_path, sjk_measure, ko);
    if (wcc->parsed()) return cmd_walk_constant_coin(gamma_str, wcc_domain, wo);
    if (wsim->parsed()) return cmd_simulate("", wsim_path, wsim_state, wso);
    if (wkh->parsed()) return cmd_walk_khrushchev(wkh_path, wkh_state, who);
    if (wps->parsed()) return cmd_walk_phase_scan(wps_gamma, wpo);
  } catch (const urec::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const urec::ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

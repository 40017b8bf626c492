#include "urec/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace urec::io {

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (key == k) ok = true;
    if (!ok) throw ValidationError(context + ": unknown key '" + key + "'");
  }
}

Complex complex_from(const json& j, const char* re_key = "re", const char* im_key = "im") {
  return {j.at(re_key).get<double>(), j.at(im_key).get<double>()};
}

json complex_to(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

std::vector<Complex> complex_list_from(const json& j) {
  std::vector<Complex> out;
  for (const auto& e : j) out.push_back(complex_from(e));
  return out;
}

json complex_list_to(std::span<const Complex> v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(complex_to(c));
  return out;
}

}  // namespace

json measure_to_json(const UnitCircleMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"angle", a.angle}, {"weight", a.weight}});
  json j{{"atoms", atoms}};
  if (m.ac_part()) {
    json ac = json::array();
    const auto& f = m.ac_part()->fourier;
    for (std::size_t n = 0; n < f.size(); ++n)
      ac.push_back({{"n", n}, {"re", f[n].real()}, {"im", f[n].imag()}});
    j["ac_fourier"] = ac;
  }
  return j;
}

UnitCircleMeasure measure_from_json(const json& j, const Tolerances& tol) {
  check_keys(j, {"atoms", "ac_fourier"}, "measure");
  std::vector<MeasureAtom> atoms;
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms")) {
      check_keys(a, {"angle", "weight"}, "measure.atoms[]");
      atoms.push_back({a.at("angle").get<double>(), a.at("weight").get<double>()});
    }
  std::optional<AbsContDensity> ac;
  if (j.contains("ac_fourier") && !j.at("ac_fourier").empty()) {
    AbsContDensity d;
    for (const auto& e : j.at("ac_fourier")) {
      check_keys(e, {"n", "re", "im"}, "measure.ac_fourier[]");
      const long n = e.at("n").get<long>();
      if (n < 0)
        throw ValidationError(
            "measure.ac_fourier: provide n >= 0 only (negative indices follow by conjugation)");
      if (d.fourier.size() <= static_cast<std::size_t>(n))
        d.fourier.resize(static_cast<std::size_t>(n) + 1, Complex{0.0});
      d.fourier[static_cast<std::size_t>(n)] = complex_from(e);
    }
    ac = std::move(d);
  }
  return UnitCircleMeasure(std::move(atoms), std::move(ac), tol);
}

json chain_to_json(const MarkovChain& c) {
  const Eigen::MatrixXd p = Eigen::MatrixXd(c.P);
  json rows = json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < p.cols(); ++k) row.push_back(p(i, k));
    rows.push_back(row);
  }
  return json{{"P", rows}, {"origin", c.origin}, {"boundary_truncated", c.boundary_truncated}};
}

MarkovChain chain_from_json(const json& j, const Tolerances& tol) {
  check_keys(j, {"P", "origin", "pi", "boundary_truncated"}, "chain");
  const auto& rows = j.at("P");
  const Eigen::Index d = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd p(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != d)
      throw ValidationError("chain: P must be square");
    for (Eigen::Index k = 0; k < d; ++k)
      p(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
  }
  const int origin = j.value("origin", 0);
  const bool trunc = j.value("boundary_truncated", false);
  return MarkovChain::validated(std::move(p), origin, trunc, tol);
}

json schur_to_json(const SchurRepresentation& f) {
  return std::visit(
      [](const auto& rep) -> json {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, RationalSchur>) {
          return json{{"rational",
                       {{"num", complex_list_to(rep.num)}, {"den", complex_list_to(rep.den)}}}};
        } else if constexpr (std::is_same_v<T, BlaschkeSchur>) {
          return json{{"blaschke",
                       {{"zeros", complex_list_to(rep.zeros)}, {"beta", complex_to(rep.beta)}}}};
        } else if constexpr (std::is_same_v<T, TaylorSchur>) {
          return json{{"taylor", {{"coeffs", complex_list_to(rep.coeffs)}}}};
        } else {
          json v{{"gamma", complex_list_to(rep.gamma)}};
          if (rep.period) v["period"] = *rep.period;
          return json{{"verblunsky", v}};
        }
      },
      f);
}

SchurRepresentation schur_from_json(const json& j) {
  check_keys(j, {"rational", "blaschke", "taylor", "verblunsky"}, "schur");
  if (j.size() != 1)
    throw ValidationError("schur: expected exactly one variant key");
  if (j.contains("rational")) {
    const auto& r = j.at("rational");
    check_keys(r, {"num", "den"}, "schur.rational");
    return RationalSchur{complex_list_from(r.at("num")), complex_list_from(r.at("den"))};
  }
  if (j.contains("blaschke")) {
    const auto& b = j.at("blaschke");
    check_keys(b, {"zeros", "beta"}, "schur.blaschke");
    return BlaschkeSchur{complex_list_from(b.at("zeros")), complex_from(b.at("beta"))};
  }
  if (j.contains("taylor")) {
    const auto& t = j.at("taylor");
    check_keys(t, {"coeffs"}, "schur.taylor");
    return TaylorSchur{complex_list_from(t.at("coeffs"))};
  }
  const auto& v = j.at("verblunsky");
  check_keys(v, {"gamma", "period"}, "schur.verblunsky");
  VerblunskySchur rep{complex_list_from(v.at("gamma")), std::nullopt};
  if (v.contains("period")) rep.period = v.at("period").get<std::size_t>();
  return rep;
}

json walk_to_json(const CoinedWalkSpec& w) {
  json coins = json::array();
  for (const auto& g : w.coin_gamma)
    coins.push_back({{"gamma_re", g.real()}, {"gamma_im", g.imag()}});
  json j{{"domain", w.domain == CoinedWalkSpec::Domain::half_line ? "half-line" : "line"},
         {"coins", coins}};
  if (w.tail_gamma)
    j["constant_tail"] = {{"gamma_re", w.tail_gamma->real()}, {"gamma_im", w.tail_gamma->imag()}};
  return j;
}

CoinedWalkSpec walk_from_json(const json& j) {
  check_keys(j, {"domain", "coins", "constant_tail"}, "walk");
  CoinedWalkSpec w;
  const std::string dom = j.value("domain", "half-line");
  if (dom == "half-line") {
    w.domain = CoinedWalkSpec::Domain::half_line;
  } else if (dom == "line") {
    w.domain = CoinedWalkSpec::Domain::line;
  } else {
    throw ValidationError("walk: domain must be 'half-line' or 'line'");
  }
  if (j.contains("coins"))
    for (const auto& c : j.at("coins")) {
      check_keys(c, {"gamma_re", "gamma_im"}, "walk.coins[]");
      w.coin_gamma.push_back(complex_from(c, "gamma_re", "gamma_im"));
    }
  if (j.contains("constant_tail")) {
    check_keys(j.at("constant_tail"), {"gamma_re", "gamma_im"}, "walk.constant_tail");
    w.tail_gamma = complex_from(j.at("constant_tail"), "gamma_re", "gamma_im");
  }
  w.validate();
  return w;
}

MomentumSymbol symbol_from_json(const json& j, const Tolerances& tol) {
  check_keys(j, {"lattice_dim", "fiber_dim", "entries"}, "symbol");
  MomentumSymbol sym;
  sym.lattice_dim = j.value("lattice_dim", 1);
  sym.fiber_dim = j.at("fiber_dim").get<int>();
  struct Term {
    std::vector<double> offset;
    Complex coeff;
  };
  struct Entry {
    int row, col;
    std::vector<Term> terms;
  };
  auto entries = std::make_shared<std::vector<Entry>>();
  int max_band = 0;
  for (const auto& e : j.at("entries")) {
    check_keys(e, {"row", "col", "terms"}, "symbol.entries[]");
    Entry en{e.at("row").get<int>(), e.at("col").get<int>(), {}};
    for (const auto& t : e.at("terms")) {
      check_keys(t, {"offset", "re", "im"}, "symbol.entries[].terms[]");
      Term term;
      for (const auto& o : t.at("offset")) term.offset.push_back(o.get<double>());
      if (term.offset.size() != static_cast<std::size_t>(sym.lattice_dim))
        throw ValidationError("symbol: offset length must equal lattice_dim");
      for (const double o : term.offset) max_band = std::max(max_band, int(std::abs(o) + 0.5));
      term.coeff = complex_from(t);
      en.terms.push_back(std::move(term));
    }
    entries->push_back(std::move(en));
  }
  const int k = sym.fiber_dim;
  sym.finite_propagation = true;
  sym.bandwidth = std::max(1, max_band);
  sym.at = [entries, k](const Eigen::VectorXd& p) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(k, k);
    for (const auto& en : *entries) {
      Complex v{0.0};
      for (const auto& t : en.terms) {
        double phase = 0.0;
        for (std::size_t d = 0; d < t.offset.size(); ++d)
          phase += t.offset[d] * p(static_cast<Eigen::Index>(d));
        v += t.coeff * unit(phase);
      }
      u(en.row, en.col) = v;
    }
    return u;
  };
  sym.validate_unitary(tol);
  return sym;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file: " + path);
  json j;
  in >> j;
  return j;
}

void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

std::string format_sig17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string monitored_csv(const ArrivalRecord& rec) {
  std::ostringstream os;
  os << "n,a_re,a_im,a_abs2,s_n\n";
  for (std::size_t n = 1; n <= rec.truncation; ++n)
    os << n << "," << format_sig17(rec.a[n].real()) << "," << format_sig17(rec.a[n].imag()) << ","
       << format_sig17(std::norm(rec.a[n])) << "," << format_sig17(rec.s[n]) << "\n";
  return os.str();
}

std::string renewal_csv(std::span<const double> p, std::span<const double> q,
                        std::span<const double> q_sjk) {
  std::ostringstream os;
  os << "n,p_n,q_n,q_sjk_n\n";
  for (std::size_t n = 0; n < p.size(); ++n) {
    os << n << "," << format_sig17(p[n]) << "," << format_sig17(n < q.size() ? q[n] : 0.0) << ","
       << format_sig17(n < q_sjk.size() ? q_sjk[n] : 0.0) << "\n";
  }
  return os.str();
}

std::string phase_scan_csv(std::span<const PhaseScanPoint> pts) {
  std::ostringstream os;
  os << "theta,R\n";
  for (const auto& pt : pts)
    os << format_sig17(pt.theta) << "," << format_sig17(pt.r) << "\n";
  return os.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << content;
}

}  // namespace urec::io

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <seplab/seplab.hpp>

using namespace seplab;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "seplab 1.0.0";

enum Exit { ok = 0, invalid_config = 2, non_convergence = 3, registry_mismatch = 4 };

// Counts such as 1e7 arrive as text.
std::uint64_t parse_count(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidConfig(std::string(what) + " is not a number: " + s);
  }
  if (used != s.size() || !(v >= 1) || v != std::floor(v) || v > 1.8e19)
    throw InvalidConfig(std::string(what) + " must be a positive integer, got " + s);
  return static_cast<std::uint64_t>(v);
}

Field parse_field(const std::string& s) {
  if (s == "R") return Field::R;
  if (s == "C") return Field::C;
  if (s == "H") return Field::H;
  throw InvalidConfig("field must be R, C or H, got " + s);
}

std::pair<int, int> parse_dims(const std::string& s) {
  int a = 0, b = 0;
  char x = 0, extra = 0;
  if (std::sscanf(s.c_str(), "%d%c%d%c", &a, &x, &b, &extra) != 3 || (x != 'x' && x != 'X') || a < 1 || b < 1)
    throw InvalidConfig("dims must look like 2x3, got " + s);
  return {a, b};
}

Family parse_measure(const std::string& s) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  try {
    if (head == "hs" && arg.empty()) return Family::HS();
    if (head == "bures" && arg.empty()) return Family::Bures();
    if (head == "induced") return Family::Induced(arg.empty() ? 0 : std::stoi(arg));
    if (head == "interpolated" && !arg.empty()) return Family::Interpolated(std::stod(arg));
  } catch (const std::invalid_argument&) {
  }
  throw InvalidConfig("measure must be hs, bures, induced:k or interpolated:x, got " + s);
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << std::endl;
    return;
  }
  std::ofstream os(path);
  if (!os) throw InvalidConfig("cannot write " + path);
  os << j.dump(2) << '\n';
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---- estimate ----

struct EstimateArgs {
  std::string field = "C", dims = "2x2", measure = "hs", samples = "1e6", stream = "pseudo";
  std::string out, trace;
  bool x_states = false, assert_registry = false;
  std::uint64_t seed = 1;
  unsigned threads = default_threads();
  double alpha0 = 0.5;
  std::string stride = "5e6";
};

int cmd_estimate(const EstimateArgs& a) {
  RunOptions opt;
  auto [ma, mb] = parse_dims(a.dims);
  opt.spec = MeasureSpec{parse_field(a.field), std::size_t(ma), std::size_t(mb), parse_measure(a.measure)};
  opt.x_states = a.x_states;
  opt.samples = parse_count(a.samples, "samples");
  opt.seed = a.seed;
  opt.threads = std::max(1u, a.threads);
  opt.alpha0 = a.alpha0;
  opt.stride = parse_count(a.stride, "stride");
  if (a.stream != "pseudo" && a.stream != "quasi") throw InvalidConfig("stream must be pseudo or quasi");
  opt.stream = a.stream == "quasi" ? StreamKind::quasi : StreamKind::pseudo;

  EstimatorState st = run_estimate(opt);
  auto ci = st.ci();
  json report;
  report["config"] = {{"command", "estimate"},  {"field", a.field},       {"dims", a.dims},
                      {"measure", opt.spec.family.name()}, {"x_states", a.x_states}, {"samples", opt.samples},
                      {"seed", opt.seed},       {"threads", opt.threads}, {"stream", a.stream},
                      {"alpha0", opt.alpha0},   {"stride", opt.stride}};
  report["p_hat"] = st.p_hat();
  report["ci"] = {ci.lo, ci.hi};
  report["n"] = st.trials;
  report["hits"] = st.hits;
  report["splits"] = {{"det_greater", st.det_split()}, {"spectrum", st.spectrum_fraction()}};
  report["registry"] = nullptr;
  double z = 0.0;
  if (auto rec = lookup(opt.spec.field, ma, mb, opt.spec.family, opt.x_states)) {
    const double p = rec->numeric();
    z = (st.p_hat() - p) / std::sqrt(p * (1 - p) / st.trials);
    report["registry"] = {{"value", rec->value.to_string()},
                          {"numeric", p},
                          {"status", to_string(rec->status)},
                          {"z", z}};
  }
  json notes = json::array();
  if (!opt.x_states && opt.spec.family.kind == Family::induced && opt.spec.ginibre_cols() < opt.spec.n())
    notes.push_back("Ginibre factor has fewer columns than rows: every draw is rank deficient and lies on the boundary, "
                    "where the PPT test uses a relative tolerance of 1e-10, so a small nonzero p_hat is a tolerance "
                    "effect rather than separable volume.");
  if (!notes.empty()) report["notes"] = notes;
  report["version"] = kVersion;
  report["timestamp"] = utc_timestamp();
  emit(report, a.out);
  if (!a.trace.empty()) {
    std::ofstream os(a.trace);
    if (!os) throw InvalidConfig("cannot write " + a.trace);
    write_trace_csv(os, st.trace);
  }
  if (a.assert_registry && std::fabs(z) > 5) return registry_mismatch;
  return ok;
}

// ---- prob ----

struct ProbArgs {
  int d = 2, k = 0;
  std::string rule = "induced";
  bool exact_only = false;
};

// Known closed forms for the square-root exponent rule.
std::string sqrtx_reference(int d, int k, double& value) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  if (d == 2 && k == 0) return value = 1 - 256 / (27 * pi2), "1 - 256/(27 pi^2)";
  if (d == 2 && k == 1) return value = 4427 - 131072 / (3 * pi2), "4427 - 131072/(3 pi^2)";
  if (d == 2 && k == 2) return value = -1713917.0 / 3 + 26642219008.0 / (4725 * pi2), "-1713917/3 + 26642219008/(4725 pi^2)";
  if (d == 4 && k == 1) return value = 27637.0 / 168 - 50 * pi2 / 3, "27637/168 - 50 pi^2/3";
  return "";
}

int cmd_prob(ProbArgs a) {
  const auto colon = a.rule.find(':');
  std::string rule = a.rule.substr(0, colon);
  if (colon != std::string::npos) a.k = std::stoi(a.rule.substr(colon + 1));
  if (rule != "induced" && rule != "sqrtx") throw InvalidConfig("rule must be induced[:k] or sqrtx[:k]");
  if (a.d < 1 || a.k < 0) throw InvalidConfig("need d >= 1 and k >= 0");
  const bool even = a.d % 2 == 0;
  const ExponentRule er = rule == "induced" ? ExponentRule::Induced(a.k) : ExponentRule::OpMonotoneSqrt(a.k);
  std::cout << std::setprecision(15);
  std::cout << "d=" << a.d << " k=" << a.k << " rule=" << rule << "\n";
  if (a.exact_only && (!even || rule != "induced"))
    throw Unsupported("exact pipeline needs even d and the induced rule");
  std::optional<Rational> exact;
  if (even && rule == "induced") {
    exact = sep_prob_exact(a.d / 2, a.k);
    std::cout << "exact: " << to_string(*exact) << " = " << to_double(*exact) << "\n";
  }
  if (a.exact_only) return ok;
  double q;
  if (even) {
    q = sep_prob_quadrature(chi_general(a.d / 2, a.k), er);
  } else {
    if (a.k != 0) throw Unsupported("odd d is supported for k = 0 only");
    const double d = a.d;
    q = sep_prob_quadrature([d](double z, double) { return master_chi_z(d, z); }, d, er);
  }
  std::cout << "quadrature: " << q << "\n";
  if (exact) std::cout << "difference: " << std::fabs(q - to_double(*exact)) << "\n";
  double ref = 0.0;
  if (rule == "sqrtx") {
    std::string form = sqrtx_reference(a.d, a.k, ref);
    if (!form.empty()) std::cout << "closed form: " << form << " = " << ref << "\ndifference: " << std::fabs(q - ref) << "\n";
  }
  return ok;
}

// ---- chi ----

struct ChiArgs {
  int d = 2, k = 0;
  bool check = false;
  std::string csv;
  int points = 101;
};

std::string poly_string(const Poly& p) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    Rational c = p[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (c < 0) c = -c;
    first = false;
    const bool unit = c == 1 && i > 0;
    if (!unit) os << to_string(c);
    if (i > 0) os << (unit ? "" : " ") << "z" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return first ? "0" : os.str();
}

int cmd_chi(const ChiArgs& a) {
  if (a.d < 2 || a.d % 2) throw Unsupported("chi polynomials exist for even d only, got d=" + std::to_string(a.d));
  if (a.k < 0) throw InvalidConfig("need k >= 0");
  ChiPoly c = chi_general(a.d / 2, a.k);
  Poly full = c.full();
  std::cout << "chi_{" << a.d << "," << a.k << "}(z) = " << poly_string(full) << "\n";
  std::cout << "p(z) = " << poly_string(c.p) << "   [chi = 1 + (1-z)^" << a.k + 1 << " p(z)]\n";
  std::cout << "coefficients:\n";
  for (std::size_t i = 0; i < full.size(); ++i)
    if (full[i] != 0) std::cout << "  z^" << i << ": " << to_string(full[i]) << "\n";
  if (a.check) {
    bool closed_ok = true, sum_ok = true, closed_available = a.d <= 6;
    std::optional<ChiPoly> closed;
    if (closed_available) {
      closed = chi_closed(a.d, a.k);
      closed_ok = closed->full() == full;
    }
    for (int i = 0; i <= 19; ++i) {
      Rational z = make_rational(i, 19);
      sum_ok &= chi_double_sum(a.d, a.k, z) == c(z);
      if (closed) closed_ok &= (*closed)(z) == c(z);
    }
    std::cout << "check general vs double sum (20 points): " << (sum_ok ? "exact" : "MISMATCH") << "\n";
    if (closed_available) std::cout << "check general vs closed form: " << (closed_ok ? "exact" : "MISMATCH") << "\n";
    if (!sum_ok || !closed_ok) return non_convergence;
  }
  if (!a.csv.empty()) {
    std::ofstream os(a.csv);
    if (!os) throw InvalidConfig("cannot write " + a.csv);
    os << "eps,z,chi\n" << std::setprecision(15);
    const int n = std::max(2, a.points);
    for (int i = 0; i < n; ++i) {
      double eps = static_cast<double>(i) / (n - 1), z = eps * eps;
      os << eps << ',' << z << ',' << c.eval(z) << '\n';
    }
  }
  return ok;
}

// ---- volumes ----

void volume_row(const std::string& label, const PiRational& v) {
  PiRational unit = v;
  unit.coeff = 1;
  std::cout << "  " << std::left << std::setw(24) << label << v.to_string() << "\n"
            << "  " << std::setw(24) << "" << "= " << factorization_string(v.factorization())
            << (unit.pi_twice || unit.surd != 1 ? " *" + unit.to_string().substr(1) : "") << "\n";
}

int cmd_volumes(const std::vector<int>& ns) {
  for (int N : ns) {
    if (N < 2) throw InvalidConfig("N must be at least 2");
    std::cout << "N = " << N << "\n";
    volume_row("Lebesgue C", vol_lebesgue_complex(N));
    if (N % 2 == 0) volume_row("Lebesgue R (l=" + std::to_string(N / 2) + ")", vol_lebesgue_real(N / 2));
    volume_row("Lebesgue H", vol_lebesgue_quaternionic(N));
    volume_row("Hilbert-Schmidt C", vol_hs_complex(N));
    volume_row("Hilbert-Schmidt R", vol_hs_real(N));
    for (const auto& rec : registry()) {
      if (rec.x_states || rec.family.kind != Family::hs || rec.m_a * rec.m_b != N) continue;
      if (rec.field == Field::R && N % 2) continue;
      PiRational sep = separable_volume(rec.field, rec.m_a, rec.m_b, rec);
      volume_row("separable " + rec.system_name(), sep);
      std::cout << "  " << std::setw(24) << "" << "(probability " << to_string(rec.value.coeff) << ", "
                << to_string(rec.status) << ")\n";
    }
    std::cout << "\n";
  }
  return ok;
}

// ---- qrtest ----

struct QrArgs {
  int s = 2;
  std::string points = "1e5", field = "C", trace;
  bool bures = false;
  unsigned threads = default_threads();
};

int cmd_qrtest(const QrArgs& a) {
  std::cout << std::setprecision(12);
  const std::uint64_t n = parse_count(a.points, "points");
  if (!a.bures) {
    if (a.s < 1) throw InvalidConfig("s must be positive");
    std::cout << "phi_" << a.s << " = " << std::fixed << std::setprecision(10) << solve_phi(a.s) << std::defaultfloat
              << std::setprecision(6) << "\n";
    // Discrepancy proxy over random anchored boxes: worst |count/n - volume|.
    QrState st(a.s, 0.5);
    CounterRng rng(2024, 0), boxes(99, 0);
    const int nboxes = 64;
    std::vector<std::vector<double>> corner(nboxes, std::vector<double>(a.s));
    std::vector<double> vol(nboxes, 1.0);
    for (int b = 0; b < nboxes; ++b)
      for (int j = 0; j < a.s; ++j) vol[b] *= corner[b][j] = boxes.uniform();
    std::vector<std::uint64_t> qc(nboxes), pc(nboxes);
    std::vector<double> r(a.s);
    for (std::uint64_t i = 0; i < n; ++i) {
      auto p = next_point(st);
      for (int j = 0; j < a.s; ++j) r[j] = rng.uniform();
      for (int b = 0; b < nboxes; ++b) {
        bool inq = true, inp = true;
        for (int j = 0; j < a.s; ++j) {
          inq &= p[j] < corner[b][j];
          inp &= r[j] < corner[b][j];
        }
        qc[b] += inq;
        pc[b] += inp;
      }
    }
    double dq = 0, dp = 0;
    for (int b = 0; b < nboxes; ++b) {
      dq = std::max(dq, std::fabs(static_cast<double>(qc[b]) / n - vol[b]));
      dp = std::max(dp, std::fabs(static_cast<double>(pc[b]) / n - vol[b]));
    }
    std::cout << "box discrepancy (" << nboxes << " anchored boxes, n=" << n << "): quasi " << dq << ", pseudo " << dp << "\n";
    return ok;
  }
  RunOptions opt;
  opt.spec = MeasureSpec{parse_field(a.field), 2, 2, Family::Bures()};
  opt.stream = StreamKind::quasi;
  opt.samples = n;
  opt.threads = std::max(1u, a.threads);
  opt.stride = std::min<std::uint64_t>(n, 5000000);
  std::cout << "Bures " << a.field << " 2x2, quasirandom dimension s=" << normals_per_draw(opt.spec) << ", n=" << n << "\n";
  std::vector<EstimatorState> runs;
  for (double alpha0 : {0.0, 0.5}) {
    opt.alpha0 = alpha0;
    runs.push_back(run_estimate(opt));
    auto ci = runs.back().ci();
    std::cout << "alpha0=" << alpha0 << ": estimate " << runs.back().p_hat() << "  [" << ci.lo << ", " << ci.hi << "]\n";
  }
  std::cout << "endpoint difference " << std::fabs(runs[0].p_hat() - runs[1].p_hat()) << "\n";
  if (!a.trace.empty()) {
    std::ofstream os(a.trace);
    if (!os) throw InvalidConfig("cannot write " + a.trace);
    os << "trials,p_hat_alpha0_0,p_hat_alpha0_half\n" << std::setprecision(12);
    for (std::size_t i = 0; i < runs[0].trace.size() && i < runs[1].trace.size(); ++i) {
      const auto& p = runs[0].trace[i];
      const auto& q = runs[1].trace[i];
      os << p.trials << ',' << static_cast<double>(p.hits) / p.trials << ',' << static_cast<double>(q.hits) / q.trials << '\n';
    }
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separability probability laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Monte Carlo PPT-probability estimate");
  est->add_option("--field", ea.field, "R, C or H");
  est->add_option("--dims", ea.dims, "subsystem sizes, e.g. 2x3");
  est->add_option("--measure", ea.measure, "hs, bures, induced:k or interpolated:x");
  est->add_flag("--x-states", ea.x_states, "sample X-states");
  est->add_option("--samples", ea.samples, "number of draws (scientific notation allowed)");
  est->add_option("--seed", ea.seed);
  est->add_option("--threads", ea.threads)->check(CLI::PositiveNumber);
  est->add_option("--stream", ea.stream, "pseudo or quasi");
  est->add_option("--alpha0", ea.alpha0, "quasirandom offset")->check(CLI::Range(0.0, 1.0));
  est->add_option("--stride", ea.stride, "checkpoint stride for the trace");
  est->add_option("--out", ea.out, "JSON report path (default stdout)");
  est->add_option("--trace", ea.trace, "CSV trace path");
  est->add_flag("--assert-registry", ea.assert_registry, "exit 4 when |z| > 5 against the registry");

  ProbArgs pa;
  auto* prob = app.add_subcommand("prob", "separability probability from the chi function");
  prob->add_option("--d", pa.d)->required();
  prob->add_option("--k", pa.k);
  prob->add_option("--rule", pa.rule, "induced[:k] or sqrtx[:k]");
  prob->add_flag("--exact-only", pa.exact_only, "skip quadrature; needs even d");

  ChiArgs ca;
  auto* chi = app.add_subcommand("chi", "exact chi polynomial");
  chi->add_option("--d", ca.d)->required();
  chi->add_option("--k", ca.k);
  chi->add_flag("--check", ca.check, "compare the independent exact routes");
  chi->add_option("--csv", ca.csv, "write a sampled curve");
  chi->add_option("--points", ca.points);

  std::vector<int> ns{4, 6, 8, 10};
  auto* vol = app.add_subcommand("volumes", "exact state-space volumes");
  vol->add_option("--N", ns, "dimensions");

  QrArgs qa;
  auto* qr = app.add_subcommand("qrtest", "quasirandom sequence diagnostics");
  qr->add_option("--s", qa.s, "dimension");
  qr->add_option("--points", qa.points);
  qr->add_flag("--bures", qa.bures, "quasirandom two-qubit/two-rebit Bures run at both offsets");
  qr->add_option("--field", qa.field, "C or R for --bures");
  qr->add_option("--threads", qa.threads)->check(CLI::PositiveNumber);
  qr->add_option("--trace", qa.trace, "paired CSV trace for --bures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : invalid_config;
  }

  try {
    if (*est) return cmd_estimate(ea);
    if (*prob) return cmd_prob(pa);
    if (*chi) return cmd_chi(ca);
    if (*vol) return cmd_volumes(ns);
    if (*qr) return cmd_qrtest(qa);
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return non_convergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invalid_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invalid_config;
  }
  return ok;
}

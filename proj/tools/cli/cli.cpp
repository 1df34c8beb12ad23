#include "cli/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gibbsrate/bounds.hpp"
#include "gibbsrate/families.hpp"
#include "gibbsrate/format.hpp"
#include "gibbsrate/sampler.hpp"
#include "gibbsrate/scan_compare.hpp"
#include "gibbsrate/spectral.hpp"
#include "gibbsrate/stochastic.hpp"
#include "gibbsrate/words.hpp"
#include "json.hpp"

namespace gibbsrate::cli {

namespace {

using nlohmann::ordered_json;

ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_significant(v);
}

ordered_json magnitude(const LogMagnitude& m) {
  if (m.is_zero()) return {{"log10", nullptr}, {"mantissa", 0}, {"exponent", 0}, {"text", "0"}};
  const auto d = rounded_decimal(m);
  return {{"log10", num(m.log10())}, {"mantissa", d.mantissa}, {"exponent", d.exponent},
          {"text", format_scientific(m)}};
}

ordered_json steps_json(const StepCount& s) { return {{"value", s.str()}, {"log10", num(s.log10())}}; }

std::string csv_magnitude(const LogMagnitude& m) { return m.is_zero() ? "" : format_number(m.log10()); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) throw Error(Errc::invalid_argument, "empty entry in list '" + text + "'");
    parts.push_back(item);
  }
  return parts;
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> values;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    T v{};
    try {
      if constexpr (std::is_floating_point_v<T>) {
        v = static_cast<T>(std::stod(item, &used));
      } else {
        v = static_cast<T>(std::stoll(item, &used));
      }
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(Errc::invalid_argument, "not a number: '" + item + "'");
    values.push_back(v);
  }
  return values;
}

ordered_json config_value(double v) { return num(v); }
ordered_json config_value(bool v) { return v; }
ordered_json config_value(const std::string& v) { return v; }
template <class T>
  requires std::is_integral_v<T>
ordered_json config_value(T v) {
  return v;
}
template <class T>
ordered_json config_value(const std::optional<T>& v) {
  return v ? config_value(*v) : ordered_json(nullptr);
}

/// Registers options on a subcommand and remembers how to report their
/// resolved values.
class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& value, const std::string& description) {
    fields_.emplace_back(name, [&value] { return config_value(value); });
    return app_->add_option("--" + name, value, description);
  }

  CLI::Option* flag(const std::string& name, bool& value, const std::string& description) {
    fields_.emplace_back(name, [&value] { return config_value(value); });
    return app_->add_flag("--" + name, value, description);
  }

  ordered_json resolved() const {
    ordered_json j = ordered_json::object();
    for (const auto& [name, get] : fields_) j[name] = get();
    return j;
  }

 private:
  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<ordered_json()>>> fields_;
};

struct Common {
  std::string format = "auto";
  std::string out;
  std::uint64_t seed = 1;
  std::string config;
};

struct Emission {
  ordered_json result;
  std::string csv;
  std::string default_format = "json";
};

// rosenthal ---------------------------------------------------------------

struct RosenthalArgs {
  int n = 100;
  int x0 = 0;
  std::optional<double> lambda;
  std::optional<double> b;
  std::optional<double> epsilon;
  std::optional<double> log2_epsilon;
  double v0 = 0.0;
  double d = 1000.0;
  double r = 0.001;
  double target = 0.01;
  std::string d_grid;
  std::string r_grid;
};

DriftMinorization certificate(const RosenthalArgs& a) {
  if (!a.lambda && !a.b && !a.epsilon && !a.log2_epsilon) {
    return bb_drift_minorization(BetaBinomialFamily(a.n), a.x0);
  }
  if (!a.lambda || !a.b) throw Error(Errc::invalid_argument, "an explicit certificate needs --lambda and --b");
  if (a.epsilon.has_value() == a.log2_epsilon.has_value()) {
    throw Error(Errc::invalid_argument, "give exactly one of --epsilon and --log2-epsilon");
  }
  const LogMagnitude eps = a.epsilon ? LogMagnitude::from_value(*a.epsilon)
                                     : LogMagnitude::from_log(*a.log2_epsilon * std::log(2.0));
  return DriftMinorization(*a.lambda, *a.b, eps, a.v0);
}

Emission run_rosenthal(const RosenthalArgs& a) {
  const auto cert = certificate(a);
  const RosenthalParams params{a.d, a.r};
  const auto constants = rosenthal_constants(cert, params);
  const auto steps = rosenthal_min_steps(cert, params, a.target);

  Emission e;
  auto& j = e.result;
  j["certificate"] = {{"lambda", num(cert.lambda)},
                      {"b", num(cert.b)},
                      {"epsilon", magnitude(cert.epsilon)},
                      {"v_x0", num(cert.v_x0)}};
  j["params"] = {{"d", num(a.d)}, {"r", num(a.r)}};
  j["constants"] = {{"rosenthal_alpha", num(constants.rosenthal_alpha)},
                    {"u", num(constants.u)},
                    {"log_contraction", num(constants.log_contraction)},
                    {"drift_coefficient", num(constants.drift_coefficient)}};
  j["target"] = num(a.target);
  j["min_steps"] = steps_json(steps);

  std::vector<StepCount> points;
  const auto decades = static_cast<unsigned>(std::ceil(steps.log10())) + 1;
  for (unsigned k = 0; k <= decades; ++k) points.push_back(StepCount::pow10(k));
  points.push_back(steps);
  if (steps > StepCount(0)) {
    auto before = steps;
    points.push_back(--before);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::ostringstream csv;
  csv << "steps,log10_value,log10_coupling_term,log10_drift_term,vacuous\n";
  auto& curve = j["curve"] = ordered_json::array();
  for (const auto& l : points) {
    const auto ev = rosenthal_bound(cert, params, l);
    curve.push_back({{"steps", l.str()},
                     {"value", magnitude(ev.value)},
                     {"coupling_term", magnitude(ev.coupling_term)},
                     {"drift_term", magnitude(ev.drift_term)},
                     {"vacuous", ev.vacuous}});
    csv << l.str() << ',' << csv_magnitude(ev.value) << ',' << csv_magnitude(ev.coupling_term) << ','
        << csv_magnitude(ev.drift_term) << ',' << (ev.vacuous ? "true" : "false") << '\n';
  }

  if (!a.d_grid.empty() || !a.r_grid.empty()) {
    const auto ds = a.d_grid.empty() ? std::vector<double>{a.d} : parse_list<double>(a.d_grid);
    const auto rs = a.r_grid.empty() ? std::vector<double>{a.r} : parse_list<double>(a.r_grid);
    const auto best = rosenthal_grid_optimize(cert, a.target, ds, rs);
    auto skipped = ordered_json::array();
    for (const auto& p : best.skipped) {
      skipped.push_back({{"d", num(p.params.d)}, {"r", num(p.params.r)}, {"reason", to_string(p.reason)}});
    }
    j["grid"] = {{"best", {{"d", num(best.best.d)}, {"r", num(best.best.r)}}},
                 {"min_steps", steps_json(best.steps)},
                 {"skipped", skipped}};
  }
  e.csv = csv.str();
  return e;
}

// two-term ----------------------------------------------------------------

struct TwoTermArgs {
  double a = 0.99986;
  double b = 0.998497;
  double weight = 2.0;
  double target = 0.01;
  std::string steps;
};

Emission run_two_term(const TwoTermArgs& a) {
  const auto steps = two_term_min_steps(a.a, a.b, a.weight, a.target);
  Emission e;
  auto& j = e.result;
  j["a"] = num(a.a);
  j["b"] = num(a.b);
  j["weight"] = num(a.weight);
  j["target"] = num(a.target);
  j["min_steps"] = steps_json(steps);

  std::vector<StepCount> points;
  if (a.steps.empty()) {
    points.push_back(steps);
    if (steps > StepCount(0)) {
      auto before = steps;
      points.insert(points.begin(), --before);
    }
  } else {
    for (auto l : parse_list<long long>(a.steps)) {
      if (l < 0) throw Error(Errc::invalid_argument, "step counts must be >= 0");
      points.emplace_back(static_cast<std::uint64_t>(l));
    }
  }
  std::ostringstream csv;
  csv << "steps,value\n";
  auto& curve = j["curve"] = ordered_json::array();
  for (const auto& l : points) {
    const double v = two_term_bound(a.a, a.b, a.weight, l);
    curve.push_back({{"steps", l.str()}, {"value", num(v)}});
    csv << l.str() << ',' << format_number(v) << '\n';
  }
  e.csv = csv.str();
  return e;
}

// spectral ----------------------------------------------------------------

struct SpectralArgs {
  std::optional<double> product;
  std::optional<int> n;
  std::string family = "bb";
  int x_max = 400;
  double alpha = 0.5;
  bool gap_curve = false;
  int grid = 101;
};

ordered_json gap_json(const GapMaximum& g) {
  return {{"scan_weight", num(g.scan_weight)},
          {"gap", num(g.gap)},
          {"analytic_scan_weight", num(g.analytic_scan_weight)},
          {"analytic_gap", num(g.analytic_gap)}};
}

Emission run_spectral(const SpectralArgs& a) {
  if (a.family != "bb" && a.family != "pg") throw Error(Errc::invalid_argument, "--family must be bb or pg");
  Emission e;
  auto& j = e.result;

  if (a.gap_curve) {
    if (a.grid < 2) throw Error(Errc::invalid_argument, "--grid needs at least 2 points");
    double q = 0.0;
    if (a.product) {
      q = *a.product;
    } else if (a.n) {
      q = bb_spectral_data(BetaBinomialFamily(*a.n)).levels.front().product;
    } else {
      throw Error(Errc::invalid_argument, "the gap curve needs --product or --n");
    }
    e.default_format = "csv";
    j["product"] = num(q);
    const auto best = argmax_gap(q);
    j["argmax"] = gap_json(best);
    std::ostringstream csv;
    csv << "scan_weight,lambda_plus,lambda_minus,gap\n";
    auto& rows = j["curve"] = ordered_json::array();
    for (int i = 0; i < a.grid; ++i) {
      const double alpha = static_cast<double>(i) / (a.grid - 1);
      const auto [hi, lo] = scan_eigenvalue_pair(alpha, q);
      const double gap = spectral_gap(alpha, q);
      rows.push_back({{"scan_weight", num(alpha)}, {"lambda_plus", num(hi)}, {"lambda_minus", num(lo)}, {"gap", num(gap)}});
      csv << format_number(alpha) << ',' << format_number(hi) << ',' << format_number(lo) << ','
          << format_number(gap) << '\n';
    }
    e.csv = csv.str();
    return e;
  }

  ScanSpectrum spectrum;
  if (a.product) {
    const auto [hi, lo] = scan_eigenvalue_pair(a.alpha, *a.product);
    spectrum.scan_weight = a.alpha;
    spectrum.levels.push_back({1, hi, lo, std::nullopt, std::nullopt});
    j["product"] = num(*a.product);
    j["gap"] = num(spectral_gap(a.alpha, *a.product));
    j["argmax"] = gap_json(argmax_gap(*a.product));
  } else {
    SpectralData data;
    if (a.family == "bb") {
      if (!a.n) throw Error(Errc::invalid_argument, "give --product or --n");
      data = bb_spectral_data(BetaBinomialFamily(*a.n));
    } else {
      data = pg_spectral_data(PoissonGammaFamily(1.0, 1.0, a.x_max));
    }
    spectrum = alpha_scan_eigenvalues(a.alpha, data);
    const double q = data.levels.front().product;
    j["second_xchain_eigenvalue"] = num(q);
    j["gap"] = num(spectral_gap(a.alpha, q));
    j["argmax"] = gap_json(argmax_gap(q));
    j["basis_note"] = data.basis_note;
  }
  j["scan_weight"] = num(spectrum.scan_weight);
  std::ostringstream csv;
  csv << "k,lambda_plus,lambda_minus,u_plus,u_minus\n";
  auto& levels = j["levels"] = ordered_json::array();
  for (const auto& lv : spectrum.levels) {
    levels.push_back({{"k", lv.k},
                      {"lambda_plus", num(lv.lambda_plus)},
                      {"lambda_minus", num(lv.lambda_minus)},
                      {"u_plus", lv.u_plus ? num(*lv.u_plus) : ordered_json(nullptr)},
                      {"u_minus", lv.u_minus ? num(*lv.u_minus) : ordered_json(nullptr)}});
    csv << lv.k << ',' << format_number(lv.lambda_plus) << ',' << format_number(lv.lambda_minus) << ','
        << (lv.u_plus ? format_number(*lv.u_plus) : "") << ',' << (lv.u_minus ? format_number(*lv.u_minus) : "")
        << '\n';
  }
  j["tail_eigenvalue"] = spectrum.tail_eigenvalue ? num(*spectrum.tail_eigenvalue) : ordered_json(nullptr);
  e.csv = csv.str();
  return e;
}

// scan-compare ------------------------------------------------------------

struct CompareArgs {
  int n = 100;
  std::uint64_t max_steps = 300;
  double target = 0.01;
  std::uint64_t stride = 1;
  double d = 1000.0;
  double r = 0.001;
  bool no_rosenthal = false;
  int x0 = 0;
  std::size_t mc_samples = 0;
  std::string mc_steps = "1,2,5,10,20";
  unsigned threads = 1;
};

Emission run_compare(const CompareArgs& a, std::uint64_t seed) {
  CompareOptions options;
  if (a.no_rosenthal) {
    options.rosenthal.reset();
  } else {
    options.rosenthal = RosenthalParams{a.d, a.r};
  }
  options.rosenthal_x0 = a.x0;
  options.stride = a.stride;
  options.mc_samples = a.mc_samples;
  options.mc_steps.clear();
  for (auto l : parse_list<long long>(a.mc_steps)) {
    if (l < 0) throw Error(Errc::invalid_argument, "--mc-steps entries must be >= 0");
    options.mc_steps.push_back(static_cast<std::uint64_t>(l));
  }
  options.seed = seed;
  options.threads = a.threads;
  const auto report = compare(a.n, a.max_steps, a.target, options);
  const auto problems = validate_report(report);
  if (!problems.empty()) throw Error(Errc::non_convergence, "report ordering violated: " + problems.front());
  return {ordered_json::parse(to_json(report)), to_csv(report)};
}

// exact-tv ----------------------------------------------------------------

struct ExactTvArgs {
  std::string family = "bb";
  int n = 10;
  double a = 1.0;
  double b = 1.0;
  double shape = 1.0;
  double rate = 1.0;
  int x_max = 400;
  std::size_t max_steps = 50;
  std::optional<int> start;
  std::optional<double> target;
};

Emission run_exact_tv(const ExactTvArgs& a) {
  XChain chain = [&] {
    if (a.family == "bb") return bb_xchain(BetaBinomialFamily(a.n, a.a, a.b));
    if (a.family == "pg") {
      return pg_xchain(PoissonGammaFamily(a.shape, a.rate, a.x_max, a.start ? std::optional<int>(*a.start) : std::nullopt));
    }
    throw Error(Errc::invalid_argument, "--family must be bb or pg");
  }();
  if (a.start && (*a.start < 0 || static_cast<std::size_t>(*a.start) >= chain.kernel.dim())) {
    throw Error(Errc::invalid_state, "--start outside the state space");
  }
  const auto curve = a.start ? start_tv_curve(chain.kernel, static_cast<std::size_t>(*a.start), chain.stationary, a.max_steps)
                             : worst_start_tv_curve(chain.kernel, chain.stationary, a.max_steps);
  Emission e;
  auto& j = e.result;
  j["states"] = chain.kernel.dim();
  j["second_eigenvalue"] = num(reversible_spectrum(chain.kernel, chain.stationary).at(1));
  j["start"] = a.start ? ordered_json(*a.start) : ordered_json("worst");
  if (a.target) {
    std::optional<std::uint64_t> found;
    for (std::size_t l = 0; l < curve.size(); ++l) {
      if (curve[l] <= *a.target) {
        found = l;
        break;
      }
    }
    if (!found && !a.start) found = worst_start_min_steps(chain, *a.target);
    j["min_steps"] = found ? ordered_json(*found) : ordered_json(nullptr);
  }
  std::ostringstream csv;
  csv << "steps,tv\n";
  auto& rows = j["curve"] = ordered_json::array();
  for (std::size_t l = 0; l < curve.size(); ++l) {
    rows.push_back({{"steps", l}, {"tv", num(curve[l])}});
    csv << l << ',' << format_number(curve[l]) << '\n';
  }
  e.csv = csv.str();
  return e;
}

// words -------------------------------------------------------------------

struct WordsArgs {
  int len = 3;
  std::optional<double> alpha;
};

Emission run_words(const WordsArgs& a) {
  const auto census = collapse_census(a.len);
  const auto multipliers = alpha_multipliers(a.len);
  Emission e;
  auto& j = e.result;
  j["length"] = a.len;
  j["total"] = census.total();
  std::ostringstream csv;
  csv << "word,first,reduced_length,count,coefficients" << (a.alpha ? ",multiplier" : "") << '\n';
  auto& words = j["words"] = ordered_json::array();
  for (const auto& [word, count] : census.counts) {
    const auto& poly = multipliers.at(word);
    const char* first = word.first == Letter::P1 ? "P1" : "P2";
    ordered_json w = {{"word", word.str()},
                      {"first", first},
                      {"reduced_length", word.length},
                      {"count", count},
                      {"coefficients", poly.coefficients}};
    std::string coefficients;
    for (std::size_t i = 0; i < poly.coefficients.size(); ++i) {
      coefficients += (i ? ";" : "") + std::to_string(poly.coefficients[i]);
    }
    csv << word.str() << ',' << first << ',' << word.length << ',' << count << ',' << coefficients;
    if (a.alpha) {
      const double v = poly(*a.alpha);
      w["multiplier"] = num(v);
      csv << ',' << format_number(v);
    }
    csv << '\n';
    words.push_back(std::move(w));
  }
  e.csv = csv.str();
  return e;
}

// simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string family = "bb";
  int n = 10;
  double a = 1.0;
  double b = 1.0;
  double shape = 1.0;
  double rate = 1.0;
  int x_max = 400;
  std::string scan = "random";
  double alpha = 0.5;
  std::size_t steps = 20;
  long long x0 = 0;
  double theta0 = 1.0;
  bool decay = false;
  std::size_t samples = 10000;
  unsigned threads = 1;
};

Emission run_simulate(const SimulateArgs& a, std::uint64_t seed) {
  Emission e;
  auto& j = e.result;
  const JointState s0{a.x0, a.theta0};
  std::ostringstream csv;
  if (a.decay) {
    if (a.family != "bb") throw Error(Errc::unsupported_prior, "eigenfunction decay needs the beta/binomial family");
    if (a.scan != "random") throw Error(Errc::invalid_argument, "eigenfunction decay uses the random scan");
    const BetaBinomialFamily family(a.n, a.a, a.b);
    if (!family.uniform_prior()) throw Error(Errc::unsupported_prior, "eigenfunction decay needs a = b = 1");
    validate_state(family, s0);
    const double phi0 = bb_eigenfunction_phi(family, static_cast<double>(a.x0), a.theta0);
    const double lambda = scan_eigenvalue_pair(a.alpha, a.n / (a.n + 2.0)).first;
    j["eigenvalue"] = num(lambda);
    j["phi_start"] = num(phi0);
    csv << "steps,estimate,std_error,predicted\n";
    auto& rows = j["decay"] = ordered_json::array();
    for (std::size_t l = 1; l <= a.steps; ++l) {
      const auto est = eigenfunction_decay(family, s0, a.alpha, l, a.samples, seed + l, a.threads);
      const double predicted = std::pow(lambda, static_cast<double>(l)) * phi0;
      rows.push_back({{"steps", l},
                      {"estimate", num(est.estimate)},
                      {"std_error", num(est.std_error)},
                      {"predicted", num(predicted)}});
      csv << l << ',' << format_number(est.estimate) << ',' << format_number(est.std_error) << ','
          << format_number(predicted) << '\n';
    }
    e.csv = csv.str();
    return e;
  }

  const ConjugateFamily family = [&]() -> ConjugateFamily {
    if (a.family == "bb") return BetaBinomialFamily(a.n, a.a, a.b);
    if (a.family == "pg") return PoissonGammaFamily(a.shape, a.rate, a.x_max);
    throw Error(Errc::invalid_argument, "--family must be bb or pg");
  }();
  const ScanStrategy strategy = [&] {
    if (a.scan == "random") return ScanStrategy::random(a.alpha);
    if (a.scan == "k") return ScanStrategy::systematic_k();
    if (a.scan == "ktilde") return ScanStrategy::systematic_ktilde();
    throw Error(Errc::invalid_argument, "--scan must be random, k or ktilde");
  }();
  const auto path = simulate_trajectory(family, s0, strategy, a.steps, seed);
  csv << "step,x,theta\n";
  auto& rows = j["trajectory"] = ordered_json::array();
  for (std::size_t i = 0; i < path.size(); ++i) {
    rows.push_back({{"step", i}, {"x", path[i].x}, {"theta", num(path[i].theta)}});
    csv << i << ',' << path[i].x << ',' << format_number(path[i].theta) << '\n';
  }
  e.csv = csv.str();
  return e;
}

// pg-demo -----------------------------------------------------------------

struct PgDemoArgs {
  std::string starts = "0,8,16,32,64,128";
  double target = 0.01;
  int x_max = 400;
};

Emission run_pg_demo(const PgDemoArgs& a) {
  const auto starts = parse_list<int>(a.starts);
  const auto demo = pg_mixing_demo(starts, a.target, a.x_max);
  return {ordered_json::parse(to_json(demo)), to_csv(demo)};
}

// driver ------------------------------------------------------------------

std::string config_arg(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) {
      if (item.is_structured()) throw Error(Errc::invalid_argument, "config lists must hold scalars");
      joined += (joined.empty() ? "" : ",") + config_arg(item);
    }
    return joined;
  }
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw Error(Errc::invalid_argument, "config values must be scalars or lists of scalars");
}

/// Expands `--config file` into flags placed right after the subcommand so
/// that flags given on the command line win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty() || args.size() < 2) return args;
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_argument, "cannot read config file '" + path + "'");
  const auto config = ordered_json::parse(in);
  if (!config.is_object()) throw Error(Errc::invalid_argument, "config file must hold a JSON object");
  std::vector<std::string> inserted;
  for (const auto& [key, value] : config.items()) {
    if (key == "config" || key == "subcommand") continue;
    if (value.is_null()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) inserted.push_back("--" + key);
      continue;
    }
    inserted.push_back("--" + key + "=" + config_arg(value));
  }
  args.insert(args.begin() + 2, inserted.begin(), inserted.end());
  return args;
}

void add_common(Options& o, Common& c) {
  o.add("format", c.format, "Output format: json or csv (auto picks the natural one)")
      ->check(CLI::IsMember({"auto", "json", "csv"}));
  o.add("out", c.out, "Write output to this path instead of standard output");
  o.add("seed", c.seed, "Random seed");
  o.add("config", c.config, "JSON file of flat key/value defaults");
}

int fail(std::ostream& err, int code, const std::string& what) {
  err << "error: " << what << '\n';
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convergence-rate calculators for two-component Gibbs samplers", "gibbsrate"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  RosenthalArgs rosenthal;
  TwoTermArgs two_term;
  SpectralArgs spectral;
  CompareArgs compare_args;
  ExactTvArgs exact_tv;
  WordsArgs words;
  SimulateArgs simulate;
  PgDemoArgs pg_demo;

  std::vector<std::pair<CLI::App*, Options>> subcommands;
  auto add_sub = [&](const char* name, const char* description) -> Options& {
    auto* sub = app.add_subcommand(name, description);
    subcommands.emplace_back(sub, Options(sub));
    add_common(subcommands.back().second, common);
    return subcommands.back().second;
  };
  subcommands.reserve(8);

  {
    auto& o = add_sub("rosenthal", "Drift/minorization bound curve and minimal steps");
    o.add("n", rosenthal.n, "Beta/binomial trials; derives lambda, b and epsilon");
    o.add("x0", rosenthal.x0, "Start state for V(x0) in the beta/binomial certificate");
    o.add("lambda", rosenthal.lambda, "Drift rate of an explicit certificate");
    o.add("b", rosenthal.b, "Drift constant of an explicit certificate");
    o.add("epsilon", rosenthal.epsilon, "Minorization mass");
    o.add("log2-epsilon", rosenthal.log2_epsilon, "Minorization mass as a base-2 logarithm");
    o.add("v0", rosenthal.v0, "V at the start state for an explicit certificate");
    o.add("d", rosenthal.d, "Small-set level d");
    o.add("r", rosenthal.r, "Coupling split r in (0, 1)");
    o.add("target", rosenthal.target, "Target total variation");
    o.add("d-grid", rosenthal.d_grid, "Comma-separated d values to optimize over");
    o.add("r-grid", rosenthal.r_grid, "Comma-separated r values to optimize over");
  }
  {
    auto& o = add_sub("two-term", "Minimal steps for A^l + w B^l <= target");
    o.add("a", two_term.a, "First ratio");
    o.add("b", two_term.b, "Second ratio");
    o.add("weight", two_term.weight, "Weight on the second term");
    o.add("target", two_term.target, "Target value");
    o.add("steps", two_term.steps, "Comma-separated step counts to evaluate");
  }
  {
    auto& o = add_sub("spectral", "Random-scan eigenvalues and the gap over scan weights");
    o.add("product", spectral.product, "x-chain eigenvalue q in [0, 1]");
    o.add("n", spectral.n, "Beta/binomial trials");
    o.add("family", spectral.family, "bb or pg (pg uses shape = rate = 1)");
    o.add("x-max", spectral.x_max, "Poisson/gamma truncation");
    o.add("alpha", spectral.alpha, "Probability of refreshing theta");
    o.flag("gap-curve", spectral.gap_curve, "Tabulate the gap over an even grid of scan weights");
    o.add("grid", spectral.grid, "Grid points for the gap curve");
  }
  {
    auto& o = add_sub("scan-compare", "Exact systematic TV against scan-order bounds");
    o.add("n", compare_args.n, "Beta/binomial trials");
    o.add("max-steps", compare_args.max_steps, "Largest step count in the table");
    o.add("target", compare_args.target, "Target total variation");
    o.add("stride", compare_args.stride, "Row stride");
    o.add("d", compare_args.d, "Small-set level for the drift/minorization bound");
    o.add("r", compare_args.r, "Coupling split for the drift/minorization bound");
    o.flag("no-rosenthal", compare_args.no_rosenthal, "Skip the drift/minorization bound");
    o.add("x0", compare_args.x0, "Start state for the drift/minorization bound");
    o.add("mc-samples", compare_args.mc_samples, "Trajectories per Monte Carlo cell (0 disables)");
    o.add("mc-steps", compare_args.mc_steps, "Comma-separated Monte Carlo step counts");
    o.add("threads", compare_args.threads, "Worker threads for Monte Carlo");
  }
  {
    auto& o = add_sub("exact-tv", "Matrix-power total variation curve of an x-chain");
    o.add("family", exact_tv.family, "bb or pg");
    o.add("n", exact_tv.n, "Beta/binomial trials");
    o.add("a", exact_tv.a, "Beta prior a");
    o.add("b", exact_tv.b, "Beta prior b");
    o.add("shape", exact_tv.shape, "Gamma prior shape");
    o.add("rate", exact_tv.rate, "Gamma prior rate");
    o.add("x-max", exact_tv.x_max, "Poisson/gamma truncation");
    o.add("max-steps", exact_tv.max_steps, "Largest step count");
    o.add("start", exact_tv.start, "Start state (default: worst start)");
    o.add("target", exact_tv.target, "Also report the minimal steps to this TV");
  }
  {
    auto& o = add_sub("words", "Collapse census and scan-weight multiplier polynomials");
    o.add("len", words.len, "Word length");
    o.add("alpha", words.alpha, "Evaluate the multipliers at this scan weight");
  }
  {
    auto& o = add_sub("simulate", "Sampler trajectories and eigenfunction decay");
    o.add("family", simulate.family, "bb or pg");
    o.add("n", simulate.n, "Beta/binomial trials");
    o.add("a", simulate.a, "Beta prior a");
    o.add("b", simulate.b, "Beta prior b");
    o.add("shape", simulate.shape, "Gamma prior shape");
    o.add("rate", simulate.rate, "Gamma prior rate");
    o.add("x-max", simulate.x_max, "Poisson/gamma truncation");
    o.add("scan", simulate.scan, "random, k (x then theta) or ktilde (theta then x)");
    o.add("alpha", simulate.alpha, "Probability of refreshing theta in the random scan");
    o.add("steps", simulate.steps, "Number of updates");
    o.add("x0", simulate.x0, "Initial x");
    o.add("theta0", simulate.theta0, "Initial theta");
    o.flag("decay", simulate.decay, "Estimate E[phi(X_l, Theta_l)] for l = 1..steps");
    o.add("samples", simulate.samples, "Trajectories per decay estimate");
    o.add("threads", simulate.threads, "Worker threads for decay estimates");
  }
  {
    auto& o = add_sub("pg-demo", "Poisson/gamma minimal steps by start state");
    o.add("starts", pg_demo.starts, "Comma-separated start states");
    o.add("target", pg_demo.target, "Target total variation");
    o.add("x-max", pg_demo.x_max, "Truncation of the state space");
  }

  try {
    const auto args = expand_config(std::vector<std::string>(argv, argv + argc));
    std::vector<const char*> raw;
    raw.reserve(args.size());
    for (const auto& s : args) raw.push_back(s.c_str());
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    return fail(err, kExitInvalid, std::string("config: ") + e.what());
  } catch (const Error& e) {
    return fail(err, kExitInvalid, e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    Emission e;
    if (name == "rosenthal") {
      e = run_rosenthal(rosenthal);
    } else if (name == "two-term") {
      e = run_two_term(two_term);
    } else if (name == "spectral") {
      e = run_spectral(spectral);
    } else if (name == "scan-compare") {
      e = run_compare(compare_args, common.seed);
    } else if (name == "exact-tv") {
      e = run_exact_tv(exact_tv);
    } else if (name == "words") {
      e = run_words(words);
    } else if (name == "simulate") {
      e = run_simulate(simulate, common.seed);
    } else {
      e = run_pg_demo(pg_demo);
    }

    const std::string format = common.format == "auto" ? e.default_format : common.format;
    ordered_json config{{"subcommand", name}};
    for (const auto& [sub, options] : subcommands) {
      if (sub == chosen) config.update(options.resolved());
    }
    config["format"] = format;

    std::string text;
    if (format == "json") {
      text = ordered_json{{"config", config}, {"result", e.result}}.dump(2) + "\n";
    } else {
      for (const auto& [key, value] : config.items()) {
        text += "# " + key + "=" + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
      }
      text += e.csv;
    }
    if (common.out.empty()) {
      out << text;
    } else {
      std::ofstream file(common.out, std::ios::binary);
      if (!file) return fail(err, kExitInvalid, "cannot open output file '" + common.out + "'");
      file << text;
    }
    return kExitOk;
  } catch (const Error& e) {
    return fail(err, is_numerical_failure(e.code()) ? kExitNumerical : kExitInvalid,
                e.what());
  } catch (const std::invalid_argument& e) {
    return fail(err, kExitInvalid, e.what());
  } catch (const std::out_of_range& e) {
    return fail(err, kExitInvalid, e.what());
  } catch (const std::exception& e) {
    return fail(err, kExitNumerical, e.what());
  }
}

}  // namespace gibbsrate::cli

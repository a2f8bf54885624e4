#include "germ/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "germ/dold.hpp"
#include "germ/index.hpp"
#include "germ/normal_form.hpp"
#include "germ/orbit.hpp"
#include "germ/spectrum.hpp"

namespace germ::cli {

using nlohmann::json;

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

json vector_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(format_complex(c));
  return out;
}

json complex_list(const std::vector<Complex>& values) {
  json out = json::array();
  for (const auto& c : values) out.push_back(format_complex(c));
  return out;
}

IndexOptions index_options(const CommandOptions& o) {
  IndexOptions opts;
  if (o.strategy == "auto") {
    opts.strategy = IndexStrategy::automatic;
  } else if (o.strategy == "cronin") {
    opts.strategy = IndexStrategy::cronin;
  } else if (o.strategy == "composite") {
    opts.strategy = IndexStrategy::composite;
  } else if (o.strategy == "numerical") {
    opts.strategy = IndexStrategy::numerical;
  } else {
    throw Error(ErrorCode::usage, "unknown strategy '" + o.strategy + "'");
  }
  opts.cronin.seed = derive_seed(o.seed, 1);
  opts.budget.seed = derive_seed(o.seed, 2);
  return opts;
}

FinderOptions finder_options(const CommandOptions& o) {
  FinderOptions f;
  f.seed = derive_seed(o.seed, 3);
  return f;
}

double working_radius(const CommandOptions& o, const MapSpecAst& ast, double fallback) {
  if (o.radius) return *o.radius;
  if (ast.radius) return *ast.radius;
  return fallback;
}

json index_json(const IndexReport& r) {
  json out;
  out["value"] = r.value;
  out["method"] = std::string(to_string(r.method));
  out["lowest_degrees"] = r.lowest_degrees;
  out["truncation_degree"] = r.truncation_degree;
  if (!r.substitution.empty()) out["substitution"] = r.substitution;
  if (r.method == IndexMethod::numerical_degree) {
    out["ball_radius"] = r.ball_radius;
    out["regular_value"] = vector_json(r.regular_value);
    json witnesses = json::array();
    for (const auto& w : r.witnesses) witnesses.push_back({{"point", vector_json(w.point)}, {"condition", w.jacobian_condition}});
    out["witnesses"] = witnesses;
  }
  return out;
}

json dold_json(const DoldReport& d) {
  json out;
  out["period"] = d.period;
  out["mode"] = d.mode == DoldMode::local ? "local" : "global";
  out["primes"] = d.plan.primes;
  json terms = json::array();
  json table = json::object();
  for (const auto& t : d.terms) {
    terms.push_back({{"divisor", t.divisor}, {"sign", t.sign}, {"index", t.index}, {"method", t.method},
                     {"computed_power", t.computed_power}});
    table[std::to_string(t.divisor)] = t.index;
  }
  out["terms"] = terms;
  out["divisor_table"] = table;
  out["value"] = d.value;
  out["fault"] = d.fault;
  return out;
}

json census_json(const OrbitCensus& c) {
  json out;
  out["radius"] = c.radius;
  out["period"] = c.period;
  json counts = json::object();
  for (const auto& [m, v] : c.counts) counts[std::to_string(m)] = v;
  out["counts"] = counts;
  json table = json::array();
  for (const auto& row : c.table) {
    table.push_back({{"divisor", row.divisor}, {"direct", row.direct}, {"from_periods", row.from_periods}});
  }
  out["table"] = table;
  json records = json::array();
  for (const auto& r : c.records) {
    records.push_back({{"point", vector_json(r.point)},
                       {"period", r.period},
                       {"multipliers", complex_list(r.multipliers)},
                       {"simple", r.simple},
                       {"hyperbolic", r.hyperbolic}});
  }
  out["records"] = records;
  out["consistent"] = c.consistent;
  out["all_simple"] = c.all_simple;
  out["period_rules_hold"] = c.period_rules_hold;
  return out;
}

json support_json(const std::set<SupportEntry>& support) {
  json out = json::array();
  for (const auto& [j, e] : support) out.push_back({{"component", j + 1}, {"exponents", e.to_vector()}});
  return out;
}

json germ_terms(const MapGerm& g) {
  json out = json::array();
  for (std::size_t j = 0; j < g.dimension(); ++j) {
    for (const auto& [e, c] : g.component(j).terms()) {
      out.push_back({{"component", j + 1}, {"exponents", e.to_vector()}, {"coefficient", format_complex(c)}});
    }
  }
  return out;
}

// Leading coordinates whose eigenvalues have distinct prime unity orders.
std::vector<int> detect_orders(const MapGerm& f) {
  const Spectrum s = spectrum_of(f);
  std::vector<int> orders;
  for (const auto& o : s.unity_orders) {
    if (!o || *o < 2) break;
    bool prime = true;
    for (int d = 2; d * d <= *o; ++d) prime = prime && (*o % d != 0);
    if (!prime || std::find(orders.begin(), orders.end(), *o) != orders.end()) break;
    orders.push_back(*o);
  }
  return orders;
}

CommandResult run_index(const CommandOptions& o, const MapGerm& f, const MapSpecAst& ast) {
  if (o.power < 1) throw Error(ErrorCode::usage, "--power must be positive");
  IndexOptions opts = index_options(o);
  opts.radius = working_radius(o, ast, 0.5) / static_cast<double>(o.power);
  const IndexReport r = iterate_index(f, o.power, opts);
  const Spectrum s = spectrum_of(f);
  bool simple = true;
  for (Complex l : s.eigenvalues) {
    if (std::abs(std::pow(l, static_cast<double>(o.power)) - Complex(1.0)) <= kUnityTolerance) simple = false;
  }
  CommandResult out;
  out.report = index_json(r);
  out.report["power"] = o.power;
  out.report["simple"] = simple;
  const bool positive = r.value >= 1;
  const bool simple_iff_one = (r.value == 1) == simple;
  out.report["checks"] = {{"index_positive", positive}, {"index_one_iff_simple", simple_iff_one}};
  out.exit_code = positive && simple_iff_one ? 0 : 2;
  return out;
}

CommandResult run_dold(const CommandOptions& o, const MapGerm& f, const MapSpecAst& ast) {
  if (o.period < 1) throw Error(ErrorCode::usage, "--period must be positive");
  DoldOptions opts;
  opts.index = index_options(o);
  opts.finder = finder_options(o);
  opts.radius = working_radius(o, ast, 0.5);
  CommandResult out;
  if (o.global) {
    const DoldReport d = dold_global(f, opts.radius, o.period, opts);
    out.report = dold_json(d);
    out.report["region_radius"] = opts.radius;
    return out;
  }
  const DoldReport d = dold_local(f, o.period, opts);
  out.report = dold_json(d);
  out.report["working_radius"] = opts.radius;
  out.exit_code = d.fault ? 2 : 0;
  return out;
}

CommandResult run_census(const CommandOptions& o, const MapGerm& f, const MapSpecAst& ast) {
  if (o.period < 1) throw Error(ErrorCode::usage, "--period must be positive");
  if (!o.radius && !ast.radius) throw Error(ErrorCode::usage, "census needs --radius or @radius");
  const OrbitCensus c = find_periodic(f, working_radius(o, ast, 0.5), o.period, finder_options(o));
  CommandResult out;
  out.report = census_json(c);
  out.exit_code = c.consistent && c.period_rules_hold ? 0 : 2;
  return out;
}

CommandResult run_perturb(const CommandOptions& o, const MapGerm& f, const MapSpecAst& ast) {
  if (o.period < 1) throw Error(ErrorCode::usage, "--period must be positive");
  if (o.trials < 1) throw Error(ErrorCode::usage, "--trials must be positive");
  if (!(o.eps > 0.0)) throw Error(ErrorCode::usage, "--eps must be positive");
  PerturbationOptions opts;
  opts.epsilon = o.eps;
  opts.trials = o.trials;
  opts.radius = working_radius(o, ast, 0.3);
  opts.seed = derive_seed(o.seed, 4);
  opts.finder = finder_options(o);
  if (o.mode == "generic") {
    opts.mode = PerturbationMode::generic;
  } else if (o.mode == "preserve-unity") {
    opts.mode = PerturbationMode::preserve_unity;
  } else {
    throw Error(ErrorCode::usage, "unknown perturbation mode '" + o.mode + "'");
  }
  const PerturbationResult r = perturb_and_count(f, o.period, opts);
  CommandResult out;
  json trials = json::array();
  for (const auto& t : r.trials) {
    json counts = json::object();
    for (const auto& [m, v] : t.census.counts) counts[std::to_string(m)] = v;
    trials.push_back({{"count", t.count}, {"resamples", t.resamples}, {"counts", counts}, {"consistent", t.census.consistent}});
  }
  out.report["period"] = o.period;
  out.report["epsilon"] = o.eps;
  out.report["radius"] = opts.radius;
  out.report["trials"] = trials;
  out.report["modal"] = r.modal;
  out.report["stable"] = r.stable;
  bool matches = true;
  try {
    DoldOptions dopts;
    dopts.index = index_options(o);
    dopts.radius = 0.5;
    const long long p = dold_local(f, o.period, dopts).value;
    out.report["dold_index"] = p;
    matches = p == r.modal;
    out.report["matches_dold_index"] = matches;
  } catch (const Error& e) {
    out.report["dold_index_error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  }
  out.exit_code = r.stable && matches ? 0 : 2;
  return out;
}

CommandResult run_normalform(const CommandOptions& o, const MapGerm& f) {
  if (o.degree < 1) throw Error(ErrorCode::usage, "--degree must be positive");
  const NormalFormResult r = normalize(f, o.degree);
  std::vector<Complex> lambda;
  const Eigen::MatrixXcd linear = f.linear_part();
  for (Eigen::Index k = 0; k < linear.rows(); ++k) lambda.push_back(linear(k, k));
  const auto predicted = resonant_monomials(lambda, o.degree);
  const bool within = std::includes(predicted.begin(), predicted.end(), r.resonant_support.begin(),
                                    r.resonant_support.end());
  CommandResult out;
  out.report["degree"] = o.degree;
  out.report["transform"] = germ_terms(r.transform);
  out.report["normalized"] = germ_terms(r.normalized);
  out.report["resonant_support"] = support_json(r.resonant_support);
  out.report["support_within_resonances"] = within;
  out.report["conjugacy_defect"] = r.conjugacy_defect;
  const std::vector<int> orders = o.orders.empty() ? detect_orders(f) : o.orders;
  if (!orders.empty()) {
    const ResonantSkeleton sk = resonant_skeleton(r.normalized, orders);
    json block = json::array();
    for (Eigen::Index j = 0; j < sk.block.rows(); ++j) {
      json row = json::array();
      for (Eigen::Index i = 0; i < sk.block.cols(); ++i) row.push_back(format_complex(sk.block(j, i)));
      block.push_back(row);
    }
    json minors = json::array();
    for (const auto& m : sk.minors) {
      std::vector<std::size_t> rows;
      for (auto k : m.rows) rows.push_back(k + 1);
      minors.push_back({{"rows", rows}, {"determinant", format_complex(m.determinant)}});
    }
    json violations = json::array();
    for (const auto& v : sk.violations) {
      violations.push_back({{"component", v.component + 1}, {"exponents", v.exponents.to_vector()},
                            {"coefficient", format_complex(v.coefficient)}});
    }
    out.report["skeleton"] = {{"orders", orders},
                              {"block", block},
                              {"minors", minors},
                              {"orders_match", sk.orders_match},
                              {"remaining_nonresonant", sk.remaining_nonresonant},
                              {"minors_invertible", sk.minors_invertible},
                              {"violations", violations},
                              {"matches", sk.matches()}};
  }
  out.exit_code = within && r.conjugacy_defect <= 1e-9 ? 0 : 2;
  return out;
}

CommandResult run_verify(const CommandOptions& o, const MapGerm& f, const MapSpecAst& ast) {
  if (o.period < 1) throw Error(ErrorCode::usage, "--period must be positive");
  DoldOptions opts;
  opts.index = index_options(o);
  opts.radius = working_radius(o, ast, 0.5);
  const TheoremVerdict v = theorem_1_verdict(f, o.period, opts);
  const auto periods = linear_period_set(spectrum_of(f), o.period);
  CommandResult out;
  out.report["period"] = o.period;
  out.report["linear_periods"] = std::vector<long long>(periods.begin(), periods.end());
  out.report["predicted"] = v.predicted;
  out.report["computed"] = v.computed;
  out.report["agree"] = v.agree;
  out.exit_code = v.agree ? 0 : 2;
  return out;
}

void render(const json& value, const std::string& indent, std::ostringstream& out) {
  std::size_t position = 0;
  for (auto it = value.begin(); it != value.end(); ++it, ++position) {
    const json& v = it.value();
    const std::string key = value.is_object() ? it.key() : "[" + std::to_string(position) + "]";
    if (v.is_object() || (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array()))) {
      out << indent << key << ":\n";
      render(v, indent + "  ", out);
    } else if (v.is_array()) {
      out << indent << key << ": [";
      for (std::size_t k = 0; k < v.size(); ++k) out << (k ? ", " : "") << (v[k].is_string() ? v[k].get<std::string>() : v[k].dump());
      out << "]\n";
    } else {
      out << indent << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage:
    case ErrorCode::syntax:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::nonzero_constant: return 1;
    default: return 2;
  }
}

std::string format_complex(Complex z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real() == 0.0 ? 0.0 : z.real(), z.imag() == 0.0 ? 0.0 : z.imag());
  return buf;
}

CommandResult run_command(const CommandOptions& options, const MapSpecAst& ast) {
  CommandResult out;
  try {
    const MapGerm f = lower(ast);
    if (options.command == "index") {
      out = run_index(options, f, ast);
    } else if (options.command == "dold") {
      out = run_dold(options, f, ast);
    } else if (options.command == "census") {
      out = run_census(options, f, ast);
    } else if (options.command == "perturb") {
      out = run_perturb(options, f, ast);
    } else if (options.command == "normalform") {
      out = run_normalform(options, f);
    } else if (options.command == "verify-theorem") {
      out = run_verify(options, f, ast);
    } else {
      throw Error(ErrorCode::usage, "unknown command '" + options.command + "'");
    }
    out.report["status"] = out.exit_code == 0 ? "ok" : "failed";
  } catch (const Error& e) {
    out.report = json::object();
    out.report["status"] = "error";
    out.report["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    out.exit_code = exit_code_for(e.code());
  }
  out.report["command"] = options.command;
  out.report["seed"] = options.seed;
  out.report["dimension"] = ast.dimension;
  return out;
}

std::string render_human(const json& report) {
  std::ostringstream out;
  render(report, "", out);
  return out.str();
}

}  // namespace germ::cli

#pragma once

#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvid/enumerate.hpp"
#include "curvid/errors.hpp"
#include "curvid/geometry.hpp"
#include "curvid/identity_lab.hpp"
#include "curvid/json_io.hpp"
#include "curvid/lemmas.hpp"
#include "curvid/variation.hpp"

namespace curvid::cli {

struct RunConfig {
  std::string command;
  std::optional<int> dim;
  std::optional<int> weight;
  Valence valence = Valence::scalar;
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
  bool json = false;
  std::string lemma;
  double epsilon = 1e-3;
  std::optional<int> pfaffian;
  std::optional<int> t2;
};

enum ExitCode : int { kSuccess = 0, kViolation = 1, kUsage = 2 };

/// Usage problem detected after parsing (inconsistent n, m, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kSuccess;
  std::string message;  // help text or diagnostic
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"expand", "verify", "kernel", "gauss-bonnet", "variation",
                                              "spanning-set"};
  return names;
}

inline ParseResult parse_args(std::vector<std::string> args) {
  RunConfig cfg;
  CLI::App app{"Universal curvature identities: expansion, verification and kernel discovery", "curvid"};
  app.require_subcommand(1, 1);
  std::string valence = "scalar";
  int dim = 0, weight = 0, pf = 0, t2 = 0;
  std::size_t trials = 0;
  auto add_common = [&](CLI::App* s) {
    s->add_flag("--json", cfg.json, "Emit a report-v1 JSON document");
    s->add_option("--seed", cfg.seed, "Base random seed")->check(CLI::NonNegativeNumber);
  };
  auto* expand = app.add_subcommand("expand", "Expand E_{m,n} or T^2_{m,n} into canonical monomials");
  add_common(expand);
  auto* o_pf = expand->add_option("--pfaffian", pf, "Weight n of E_{m,n}");
  auto* o_t2 = expand->add_option("--t2", t2, "Weight n of T^2_{m,n}");
  o_pf->excludes(o_t2);

  auto* verify = app.add_subcommand("verify", "Check a pinned lemma identity");
  add_common(verify);
  verify->add_option("--lemma", cfg.lemma, "Lemma id: 1.2.1, 1.2.2, 1.2.3, 1.4.1, 1.4.2")->required();
  auto* v_dim = verify->add_option("--dim", dim, "Evaluation dimension (default: critical dimension)");
  auto* v_trials = verify->add_option("--trials", trials, "Number of random samples");

  auto* kernel = app.add_subcommand("kernel", "Kernel of the dimension-m evaluation map on a spanning set");
  add_common(kernel);
  kernel->add_option("--weight", weight, "Weight n")->required();
  kernel->add_option("--valence", valence, "scalar or sym2")->check(CLI::IsMember({"scalar", "sym2"}));
  kernel->add_option("--dim", dim, "Evaluation dimension m")->required();
  auto* k_trials = kernel->add_option("--trials", trials, "Number of random samples");

  auto* gb = app.add_subcommand("gauss-bonnet", "Gauss-Bonnet constants on sphere products");
  add_common(gb);
  auto* g_dim = gb->add_option("--dim", dim, "Even dimension m (default: 2 and 4)");

  auto* var = app.add_subcommand("variation", "Euler-Lagrange experiment on a perturbed flat torus");
  add_common(var);
  var->add_option("--dim", dim, "Torus dimension m")->required();
  var->add_option("--weight", weight, "Weight n")->required();
  var->add_option("--epsilon", cfg.epsilon, "Finite difference step")->check(CLI::PositiveNumber);

  auto* span = app.add_subcommand("spanning-set", "List the dimension-generic spanning set");
  add_common(span);
  span->add_option("--weight", weight, "Weight n")->required();
  span->add_option("--valence", valence, "scalar or sym2")->check(CLI::IsMember({"scalar", "sym2"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    return {std::nullopt, kSuccess, app.help()};
  } catch (const CLI::CallForAllHelp&) {
    return {std::nullopt, kSuccess, app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    std::string hint = app.get_subcommands().empty() ? "choose one of: expand, verify, kernel, gauss-bonnet, "
                                                       "variation, spanning-set"
                                                     : "see --help for the flags of this subcommand";
    return {std::nullopt, kUsage, std::string("error: ") + e.what() + "\nhint: " + hint};
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.valence = parse_valence(valence);
  if (cfg.command == "expand") {
    if (o_pf->count()) cfg.pfaffian = pf;
    if (o_t2->count()) cfg.t2 = t2;
    if (!cfg.pfaffian && !cfg.t2)
      return {std::nullopt, kUsage, "error: expand needs --pfaffian N or --t2 N\nhint: curvid expand --pfaffian 4"};
  }
  if (cfg.command == "verify") {
    if (v_dim->count()) cfg.dim = dim;
    if (v_trials->count()) cfg.trials = trials;
  }
  if (cfg.command == "kernel") {
    cfg.dim = dim;
    cfg.weight = weight;
    if (k_trials->count()) cfg.trials = trials;
  }
  if (cfg.command == "gauss-bonnet" && g_dim->count()) cfg.dim = dim;
  if (cfg.command == "variation") {
    cfg.dim = dim;
    cfg.weight = weight;
  }
  if (cfg.command == "spanning-set") cfg.weight = weight;
  return {cfg, kSuccess, ""};
}

inline ParseResult parse_args(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_args(std::move(args));
}

namespace detail {

inline Json config_json(const RunConfig& c) {
  Json j = {{"command", c.command}, {"seed", c.seed}};
  if (c.dim) j["dim"] = *c.dim;
  if (c.weight) j["weight"] = *c.weight;
  if (c.command == "kernel" || c.command == "spanning-set") j["valence"] = std::string(to_string(c.valence));
  if (c.trials) j["trials"] = *c.trials;
  if (!c.lemma.empty()) j["lemma"] = c.lemma;
  if (c.command == "variation") j["epsilon"] = c.epsilon;
  if (c.pfaffian) j["pfaffian"] = *c.pfaffian;
  if (c.t2) j["t2"] = *c.t2;
  return j;
}

inline Json envelope(const RunConfig& c, const std::string& status, Json result) {
  return {{"schema", kReportSchema},
          {"command", c.command},
          {"status", status},
          {"config", config_json(c)},
          {"result", std::move(result)}};
}

inline std::string vector_text(const std::vector<Integer>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

inline std::string vector_text(const std::vector<long>& v) {
  std::vector<Integer> z(v.begin(), v.end());
  return vector_text(z);
}

inline int reference_dim(int n, Valence v) { return v == Valence::scalar ? n + 1 : n + 2; }

inline void check_weight(int n) {
  if (n < 0 || n % 2 != 0) throw UsageError("weight must be even and non-negative");
  if (n > 6) throw UsageError("weights above 6 are not supported");
}

inline int run_expand(const RunConfig& c, std::ostream& out) {
  const bool pf = c.pfaffian.has_value();
  const int n = pf ? *c.pfaffian : *c.t2;
  check_weight(n);
  const auto p = pf ? pfaffian_expand(n) : t2_expand(n);
  if (c.json)
    out << envelope(c, "ok", {{"target", pf ? "pfaffian" : "t2"}, {"n", n}, {"polynomial", to_json(p)}}).dump(2)
        << "\n";
  else
    out << to_string(p) << "\n";
  return kSuccess;
}

inline int run_verify(const RunConfig& c, std::ostream& out) {
  const LemmaIdentity* lemma = nullptr;
  try {
    lemma = &find_lemma(c.lemma);
  } catch (const DomainError& e) {
    throw UsageError(std::string(e.what()) + " (known: 1.2.1, 1.2.2, 1.2.3, 1.4.1, 1.4.2)");
  }
  const int m = c.dim.value_or(lemma->dim);
  if (m < 1) throw UsageError("dimension must be positive");
  const SampleOptions opt{c.seed, Sampler::automatic};
  if (!lemma->columns.empty()) {
    const auto s = SpanningSet::from_monomials(lemma->columns);
    const std::size_t trials = c.trials.value_or(std::max<std::size_t>(100, 3 * s.size()));
    const auto rep = kernel_basis(s, m, trials, opt);
    const auto prim = rep.primitive_basis();
    std::vector<Integer> pinned(lemma->kernel_vector.begin(), lemma->kernel_vector.end());
    const bool ok = prim.size() == 1 && prim.front() == pinned;
    if (c.json) {
      out << envelope(c, ok ? "ok" : "violation",
                      {{"lemma", lemma->id},
                       {"statement", lemma->statement},
                       {"dim", m},
                       {"expected", lemma->kernel_vector},
                       {"confirmed", ok},
                       {"kernel", to_json(rep)}})
                 .dump(2)
          << "\n";
    } else if (ok) {
      out << "kernel vector " << vector_text(lemma->kernel_vector) << " confirmed in dim " << m << "\n";
    } else {
      out << "kernel vector " << vector_text(lemma->kernel_vector) << " not confirmed in dim " << m
          << " (kernel dimension " << rep.kernel_dimension() << ")\n";
    }
    return ok ? kSuccess : kViolation;
  }
  const std::size_t trials = c.trials.value_or(60);
  const bool ok = vanishing_test(lemma->polynomial, m, trials, opt);
  if (c.json) {
    out << envelope(c, ok ? "ok" : "violation",
                    {{"lemma", lemma->id},
                     {"statement", lemma->statement},
                     {"dim", m},
                     {"samples", trials},
                     {"vanishes", ok},
                     {"polynomial", to_json(lemma->polynomial)}})
               .dump(2)
        << "\n";
  } else {
    out << "identity " << lemma->id << (ok ? " holds" : " fails") << " in dim " << m << " (" << trials
        << " samples)\n";
  }
  return ok ? kSuccess : kViolation;
}

inline int run_kernel(const RunConfig& c, std::ostream& out) {
  const int n = *c.weight;
  const int m = *c.dim;
  check_weight(n);
  if (m < 1) throw UsageError("dimension must be positive");
  const SampleOptions opt{c.seed, Sampler::automatic};
  const auto full = enumerate_spanning_set(n, c.valence);
  const int ref = reference_dim(n, c.valence);
  const auto basis = independent_subset(full, ref, 0, opt);
  const std::size_t trials = c.trials.value_or(3 * basis.size() + 30);
  const auto rep = kernel_basis(basis, m, trials, opt);
  if (c.json) {
    out << envelope(c, "ok",
                    {{"spanning_set_size", full.size()},
                     {"reference_dim", ref},
                     {"independent_size", basis.size()},
                     {"kernel", to_json(rep)}})
               .dump(2)
        << "\n";
    return kSuccess;
  }
  out << "spanning set: " << full.size() << " elements, " << basis.size() << " independent in dim " << ref << "\n";
  for (std::size_t i = 0; i < basis.size(); ++i) out << "  [" << i << "] " << to_string(basis.elements[i]) << "\n";
  out << "kernel dimension " << rep.kernel_dimension() << " in dim " << m << " (" << rep.samples << " "
      << rep.sampler << " samples)\n";
  for (std::size_t i = 0; i < rep.kernel_dimension(); ++i)
    out << "  " << vector_text(rep.primitive_basis()[i]) << "\n";
  return kSuccess;
}

inline int run_gauss_bonnet(const RunConfig& c, std::ostream& out) {
  std::vector<int> dims = c.dim ? std::vector<int>{*c.dim} : std::vector<int>{2, 4};
  for (int m : dims) {
    if (m % 2 != 0) throw UsageError("chi(M) = 0 in odd dimension m = " + std::to_string(m) + "; use an even --dim");
    if (m < 2 || m > 6) throw UsageError("Gauss-Bonnet constants are computed for m in {2, 4, 6}");
  }
  Json table = Json::array();
  std::ostringstream text;
  for (int m : dims) {
    const auto cm = gauss_bonnet_constant(m);
    std::vector<ModelGeometry> models;
    std::vector<ModelGeometry> s2(static_cast<std::size_t>(m / 2), ModelGeometry::sphere(2));
    models.push_back(m == 2 ? s2.front() : ModelGeometry::product(s2));
    if (m > 2) models.push_back(ModelGeometry::sphere(m));
    Json rows = Json::array();
    text << "m = " << m << ": c_m = " << to_string(cm) << "\n";
    text << "  " << std::left << std::setw(16) << "model" << std::setw(6) << "chi" << std::setw(18) << "int E_{m,m}"
         << "c_m int E\n";
    for (const auto& g : models) {
      const auto integral = euler_integral(g);
      const auto chi = cm * integral;
      rows.push_back({{"model", g.name()},
                      {"euler_characteristic", g.euler_characteristic()},
                      {"volume", to_json(g.volume())},
                      {"integral", to_json(integral)},
                      {"reproduced_chi", to_json(chi)}});
      text << "  " << std::left << std::setw(16) << g.name() << std::setw(6) << g.euler_characteristic()
           << std::setw(18) << to_string(integral) << to_string(chi) << "\n";
    }
    table.push_back({{"m", m}, {"c_m", to_json(cm)}, {"models", rows}});
  }
  if (c.json)
    out << envelope(c, "ok", {{"constants", table}}).dump(2) << "\n";
  else
    out << text.str();
  return kSuccess;
}

inline int run_variation(const RunConfig& c, std::ostream& out) {
  const int m = *c.dim;
  const int n = *c.weight;
  if (n != 2 && n != 4) throw UsageError("variation runs support --weight 2 or 4");
  if (m != n && m != n + 1) throw UsageError("variation runs need --dim equal to n or n + 1");
  const auto r = euler_lagrange_check(m, n, c.seed, c.epsilon);
  bool ok = true;
  if (m == n) ok = std::abs(r.derivative) <= 1e-8 * r.scale;
  if (c.json) {
    out << envelope(c, ok ? "ok" : "violation", to_json(r)).dump(2) << "\n";
    return ok ? kSuccess : kViolation;
  }
  auto line = [&](const std::string& k, const std::string& v) { out << std::left << std::setw(22) << k << v << "\n"; };
  auto num = [](double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
  };
  line("torus", "T^" + std::to_string(m) + ", n = " + std::to_string(n) + ", seed " + std::to_string(r.seed));
  line("perturbation h", r.perturbation);
  line("d/de at eps", num(r.derivative_eps));
  line("d/de at eps/2", num(r.derivative_half));
  line("d/de (Richardson)", num(r.derivative));
  line("pairing <T2, h>", num(r.pairing));
  line("scale", num(r.scale));
  line("d", r.d ? num(*r.d) : std::string("undefined (pairing vanishes)"));
  line("refinement residual", num(r.refinement_residual));
  line("quadrature residual", num(r.quadrature_residual));
  line("panels", std::to_string(r.panels) + " / " + std::to_string(2 * r.panels));
  if (m == n) line("verdict", ok ? "variation vanishes" : "variation does not vanish");
  return ok ? kSuccess : kViolation;
}

inline int run_spanning_set(const RunConfig& c, std::ostream& out) {
  const int n = *c.weight;
  check_weight(n);
  const auto s = enumerate_spanning_set(n, c.valence);
  if (c.json) {
    Json el = Json::array();
    for (const auto& m : s.elements) el.push_back(to_string(m));
    out << envelope(c, "ok", {{"weight", n}, {"valence", std::string(to_string(c.valence))}, {"elements", el}})
               .dump(2)
        << "\n";
    return kSuccess;
  }
  out << s.size() << " elements\n";
  for (const auto& m : s.elements) out << "  " << to_string(m) << "\n";
  return kSuccess;
}

}  // namespace detail

/// Executes one configured run. Exit status: 0 success, 1 identity violation
/// or inconclusive result, 2 usage error.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "expand") return detail::run_expand(c, out);
    if (c.command == "verify") return detail::run_verify(c, out);
    if (c.command == "kernel") return detail::run_kernel(c, out);
    if (c.command == "gauss-bonnet") return detail::run_gauss_bonnet(c, out);
    if (c.command == "variation") return detail::run_variation(c, out);
    if (c.command == "spanning-set") return detail::run_spanning_set(c, out);
    err << "error: unknown subcommand '" << c.command << "'\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::runtime_error& e) {
    // Inconclusive rank, inconsistent system, numerical gate.
    if (c.json) out << detail::envelope(c, "inconclusive", {{"error", e.what()}}).dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kViolation;
  }
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto parsed = parse_args(argc, argv);
  if (!parsed.config) {
    (parsed.exit_code == kSuccess ? out : err) << parsed.message << "\n";
    return parsed.exit_code;
  }
  return run(*parsed.config, out, err);
}

}  // namespace curvid::cli

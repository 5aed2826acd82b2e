// Command-line front end: file-based inputs, JSON reports on stdout (CSV for
// sweeps), deterministic under a fixed --seed.
//
// Exit codes: 0 success, 1 unknown subcommand or malformed input file,
// 2 validation failure, 3 numeric-invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psig/graph.hpp"
#include "psig/locc.hpp"
#include "psig/monotones.hpp"
#include "psig/reflect.hpp"
#include "psig/serialize.hpp"
#include "psig/tensor.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;       // unknown subcommand, malformed files
constexpr int kInvalid = 2;     // validation failure
constexpr int kViolation = 3;   // numeric-invariant violation

int fail(int code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return code;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

nlohmann::json validation_json(const psig::ValidationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json jc{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) jc["detail"] = c.detail;
    checks.push_back(jc);
  }
  return nlohmann::json{{"ok", report.ok()}, {"checks", checks}};
}

nlohmann::json certificate_report_json(const psig::CertificateReport& report) {
  return nlohmann::json{{"pass", report.pass},
                        {"min_psd_margin", report.min_psd_margin},
                        {"max_sum_residual", report.max_sum_residual},
                        {"problems", report.problems}};
}

// Map compute-stage exceptions onto the exit-code contract: precondition
// complaints (bad dims, refused contraction plans) are validation failures,
// anything the numerics flagged mid-run is an invariant violation.
int classify_runtime(const std::runtime_error& e) {
  return std::string(e.what()).find("entry cap") != std::string::npos ? kInvalid : kViolation;
}

// --- graph check -------------------------------------------------------------

struct GraphCheckArgs {
  std::string graph_path;
  int label = -1;
  std::string certificate_path;
};

int run_graph_check(const GraphCheckArgs& args) {
  psig::PsiGraph g;
  try {
    g = psig::graph_from_json(psig::load_json_file(args.graph_path));
  } catch (const std::invalid_argument& e) {
    return fail(kUsage, e.what());
  }

  nlohmann::json out;
  const psig::ValidationReport report = psig::validate(g);
  out["validation"] = validation_json(report);
  if (!report.ok()) {
    emit(out);
    return fail(kInvalid, "graph fails validation: " + report.summary());
  }

  std::vector<psig::ReflectingCut> cuts;
  try {
    cuts = psig::enumerate_reflecting_cuts(g);
  } catch (const std::runtime_error& e) {
    return fail(kInvalid, e.what());
  }
  nlohmann::json jcuts = nlohmann::json::array();
  for (const auto& cut : cuts)
    jcuts.push_back({{"involution", cut.involution}, {"cut_edges", cut.cut_edges}});
  out["reflecting_cuts"] = jcuts;
  out["cut_count"] = cuts.size();

  int code = kOk;
  if (args.label >= 0) {
    if (args.label >= g.party_count) {
      emit(out);
      return fail(kInvalid, "label " + std::to_string(args.label) + " out of range (graph has " +
                                std::to_string(g.party_count) + " parties)");
    }
    const psig::ReflectingWitness witness = psig::is_edge_reflecting(g, args.label, cuts);
    nlohmann::json jw{{"label", args.label}, {"ok", witness.ok}};
    if (!witness.ok) {
      jw["unseparated_pair"] = {witness.first, witness.second};
      code = kInvalid;
    }
    out["edge_reflecting"] = jw;
  }

  if (!args.certificate_path.empty()) {
    psig::LoadedCertificate loaded;
    try {
      loaded = psig::certificate_from_json(psig::load_json_file(args.certificate_path));
    } catch (const std::invalid_argument& e) {
      return fail(kUsage, e.what());
    }
    psig::recompute_cut_sides(g, loaded.cert);
    try {
      const psig::CertificateReport cert_report = psig::verify_certificate(g, loaded.cert);
      out["certificate"] = certificate_report_json(cert_report);
      if (!cert_report.pass) code = kViolation;
    } catch (const std::invalid_argument& e) {
      emit(out);
      return fail(kInvalid, e.what());
    }
  }

  emit(out);
  return code;
}

// --- invariant eval ----------------------------------------------------------

struct InvariantArgs {
  std::string graph_path;
  std::string state_path;
  int as_density = -1;
};

int run_invariant_eval(const InvariantArgs& args) {
  psig::PsiGraph g;
  psig::PureState s;
  try {
    g = psig::graph_from_json(psig::load_json_file(args.graph_path));
    s = psig::state_from_json(psig::load_json_file(args.state_path));
  } catch (const std::invalid_argument& e) {
    return fail(kUsage, e.what());
  }
  const psig::ValidationReport report = psig::validate(g);
  if (!report.ok()) return fail(kInvalid, "graph fails validation: " + report.summary());

  try {
    nlohmann::json out;
    std::complex<double> z;
    if (args.as_density >= 0) {
      const Eigen::MatrixXcd rho = psig::partial_trace(s, args.as_density);
      std::vector<int> dims = s.dims;
      z = psig::evaluate_on_density(g, args.as_density, dims, rho);
      out["route"] = "density";
      out["traced_party"] = args.as_density;
    } else {
      z = psig::evaluate_invariant(g, s);
      out["route"] = "state";
    }
    out["value"] = {{"re", z.real()}, {"im", z.imag()}};
    emit(out);
    return kOk;
  } catch (const std::invalid_argument& e) {
    return fail(kInvalid, e.what());
  } catch (const std::runtime_error& e) {
    return fail(classify_runtime(e), e.what());
  }
}

// --- monotone eval -----------------------------------------------------------

struct MonotoneArgs {
  std::string kind;
  std::string state_path;
  std::string graph_path;
  int party = 0;
  int k = 1;
  int q = 2;
  std::optional<long> exponent_num;
  std::optional<long> exponent_den;
  std::vector<int> ranks;
  int restarts = 4;
  std::uint64_t seed = 0;
};

int run_monotone_eval(const MonotoneArgs& args) {
  psig::PureState s;
  try {
    s = psig::state_from_json(psig::load_json_file(args.state_path));
  } catch (const std::invalid_argument& e) {
    return fail(kUsage, e.what());
  }

  try {
    nlohmann::json diagnostics;
    double value = 0.0;
    if (args.kind == "vidal") {
      psig::MonotoneSpec spec = psig::vidal_spec(args.party, args.k);
      value = psig::evaluate_monotone(spec, s);
      diagnostics["spec"] = spec.describe();
    } else if (args.kind == "graph") {
      if (args.graph_path.empty()) return fail(kUsage, "--kind graph requires --graph");
      psig::PsiGraph g;
      try {
        g = psig::graph_from_json(psig::load_json_file(args.graph_path));
      } catch (const std::invalid_argument& e) {
        return fail(kUsage, e.what());
      }
      psig::MonotoneSpec spec =
          args.exponent_num || args.exponent_den
              ? psig::graph_spec_with_exponent(std::move(g), args.exponent_num.value_or(1),
                                               args.exponent_den.value_or(1))
              : psig::graph_spec(std::move(g));
      value = psig::evaluate_monotone(spec, s);
      diagnostics["spec"] = spec.describe();
    } else if (args.kind == "multirenyi") {
      psig::MonotoneSpec spec = psig::multi_renyi_spec(args.q);
      value = psig::evaluate_monotone(spec, s);
      diagnostics["spec"] = spec.describe();
    } else if (args.kind == "bl") {
      if (args.ranks.empty()) return fail(kUsage, "--kind bl requires --ranks");
      const psig::BlResult result = psig::bl_monotone(s, args.ranks, args.restarts, args.seed);
      value = result.value;
      diagnostics["spec"] = psig::bl_spec(args.ranks, args.restarts, args.seed).describe();
      diagnostics["restart_spread"] = result.report.restart_spread;
      diagnostics["sweeps"] = result.report.sweeps;
      diagnostics["converged"] = result.report.converged;
    } else {
      return fail(kUsage, "unknown monotone kind '" + args.kind + "'");
    }
    emit(nlohmann::json{{"value", value}, {"diagnostics", diagnostics}});
    return kOk;
  } catch (const std::invalid_argument& e) {
    return fail(kInvalid, e.what());
  } catch (const std::runtime_error& e) {
    return fail(classify_runtime(e), e.what());
  }
}

// --- bounds ghz-example -------------------------------------------------------

struct BoundsArgs {
  psig::SweepConfig config;
  std::string out_path;
};

int run_bounds(const BoundsArgs& args) {
  try {
    const std::vector<psig::SweepRow> rows = psig::ghz_sweep(args.config);
    const std::string csv = psig::sweep_csv(rows, args.config.ns);
    if (args.out_path.empty())
      std::cout << csv;
    else
      psig::write_text_file(args.out_path, csv);
    return kOk;
  } catch (const std::invalid_argument& e) {
    return fail(kInvalid, e.what());
  } catch (const std::runtime_error& e) {
    return fail(kViolation, e.what());
  }
}

// --- fuzz monotonicity ---------------------------------------------------------

struct FuzzArgs {
  std::string spec_path;
  int trials = 1000;
  std::uint64_t seed = 0;
};

// Spec files may omit "dims"; fall back to qubits on the natural party count
// of the monotone (bl parties additionally need dims >= the requested rank).
std::vector<int> default_fuzz_dims(const psig::MonotoneSpec& spec) {
  using Kind = psig::MonotoneSpec::Kind;
  switch (spec.kind) {
    case Kind::vidal:
      return std::vector<int>(std::max(2, spec.party_a + 1), 2);
    case Kind::graph:
    case Kind::multi_renyi:
      return std::vector<int>(spec.graph.party_count, 2);
    case Kind::bl: {
      std::vector<int> dims;
      for (int r : spec.ranks) dims.push_back(std::max(2, r));
      return dims;
    }
    default:
      return {};
  }
}

int run_fuzz(const FuzzArgs& args) {
  psig::FuzzSpecFile file;
  try {
    file = psig::fuzz_spec_from_json(psig::load_json_file(args.spec_path));
  } catch (const std::invalid_argument& e) {
    return fail(kUsage, e.what());
  }
  std::vector<int> dims = file.dims.empty() ? default_fuzz_dims(file.spec) : file.dims;
  if (dims.empty()) return fail(kUsage, "fuzz spec does not determine the party dimensions");

  try {
    const psig::FuzzReport report = psig::fuzz_monotonicity(file.spec, dims, args.trials, args.seed);
    emit(nlohmann::json{{"spec", file.spec.describe()},
                        {"dims", dims},
                        {"trials", report.trials},
                        {"min_margin", report.min_margin},
                        {"mean_margin", report.mean_margin},
                        {"max_margin", report.max_margin},
                        {"worst_trial", report.worst_trial},
                        {"worst_seed", report.worst_seed},
                        {"violation", report.violation}});
    return report.violation ? kViolation : kOk;
  } catch (const std::invalid_argument& e) {
    return fail(kInvalid, e.what());
  } catch (const std::runtime_error& e) {
    return fail(classify_runtime(e), e.what());
  }
}

// --- certificate verify ---------------------------------------------------------

struct CertificateArgs {
  std::string certificate_path;
  double psd_tol = 1e-12;
  double sum_tol = 1e-12;
};

int run_certificate_verify(const CertificateArgs& args) {
  psig::LoadedCertificate loaded;
  try {
    loaded = psig::certificate_from_json(psig::load_json_file(args.certificate_path));
  } catch (const std::invalid_argument& e) {
    return fail(kUsage, e.what());
  }
  if (!loaded.graph)
    return fail(kUsage, "certificate file does not embed its graph; use 'graph check --certificate'");

  const psig::ValidationReport report = psig::validate(*loaded.graph);
  if (!report.ok()) return fail(kInvalid, "embedded graph fails validation: " + report.summary());

  try {
    const psig::CertificateReport cert_report =
        psig::verify_certificate(*loaded.graph, loaded.cert, args.psd_tol, args.sum_tol);
    nlohmann::json out = certificate_report_json(cert_report);
    out["label"] = loaded.cert.label;
    out["kind"] = loaded.cert.kind == psig::ConvexityCertificate::Kind::edge ? "edge" : "vertex";
    out["cuts"] = loaded.cert.cuts.size();
    emit(out);
    return cert_report.pass ? kOk : kViolation;
  } catch (const std::invalid_argument& e) {
    return fail(kInvalid, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-encoded entanglement monotones: build and validate edge-labeled "
               "parity-bipartite graphs, verify their convexity certificates, evaluate the "
               "invariants by tensor contraction, and bound LOCC transition probabilities."};
  app.require_subcommand(1);

  GraphCheckArgs graph_args;
  InvariantArgs invariant_args;
  MonotoneArgs monotone_args;
  BoundsArgs bounds_args;
  FuzzArgs fuzz_args;
  CertificateArgs certificate_args;

  CLI::App* graph = app.add_subcommand("graph", "Graph structure operations");
  graph->require_subcommand(1);
  CLI::App* graph_check =
      graph->add_subcommand("check", "Validate a graph file and enumerate its reflecting cuts");
  graph_check->add_option("graph", graph_args.graph_path, "Graph JSON file")->required();
  graph_check->add_option("--label", graph_args.label,
                          "Also check that every pair of edges with this label is separated "
                          "by some reflecting cut");
  graph_check->add_option("--certificate", graph_args.certificate_path,
                          "Also verify this certificate file against the graph");

  CLI::App* invariant = app.add_subcommand("invariant", "Invariant evaluation");
  invariant->require_subcommand(1);
  CLI::App* invariant_eval =
      invariant->add_subcommand("eval", "Contract the graph invariant on a state");
  invariant_eval->add_option("--graph", invariant_args.graph_path, "Graph JSON file")->required();
  invariant_eval->add_option("--state", invariant_args.state_path, "State JSON file")->required();
  invariant_eval->add_option("--as-density", invariant_args.as_density,
                             "Evaluate through the reduced density matrix obtained by tracing "
                             "out this party (must equal the direct evaluation)");

  CLI::App* monotone = app.add_subcommand("monotone", "Monotone evaluation");
  monotone->require_subcommand(1);
  CLI::App* monotone_eval =
      monotone->add_subcommand("eval", "Evaluate one monotone on a state, reporting JSON "
                               "{value, diagnostics}");
  monotone_eval->add_option("--kind", monotone_args.kind, "vidal | graph | bl | multirenyi")
      ->required()
      ->check(CLI::IsMember({"vidal", "graph", "bl", "multirenyi"}));
  monotone_eval->add_option("--state", monotone_args.state_path, "State JSON file")->required();
  monotone_eval->add_option("--party", monotone_args.party, "vidal: distinguished party")
      ->capture_default_str();
  monotone_eval->add_option("--k", monotone_args.k, "vidal: Schmidt tail index")
      ->capture_default_str();
  monotone_eval->add_option("--graph", monotone_args.graph_path, "graph: graph JSON file");
  monotone_eval->add_option("--exponent-num", monotone_args.exponent_num,
                            "graph: numerator overriding the 1/(ket count) exponent");
  monotone_eval->add_option("--exponent-den", monotone_args.exponent_den,
                            "graph: denominator overriding the 1/(ket count) exponent");
  monotone_eval->add_option("--q", monotone_args.q, "multirenyi: hypercube dimension")
      ->capture_default_str();
  monotone_eval->add_option("--ranks", monotone_args.ranks, "bl: projector ranks, one per party")
      ->delimiter(',');
  monotone_eval->add_option("--restarts", monotone_args.restarts, "bl: random restarts")
      ->capture_default_str();
  monotone_eval->add_option("--seed", monotone_args.seed, "bl: restart seed")
      ->capture_default_str();

  CLI::App* bounds = app.add_subcommand("bounds", "LOCC transition-probability bounds");
  bounds->require_subcommand(1);
  CLI::App* bounds_ghz = bounds->add_subcommand(
      "ghz-example", "Sweep the deformed (2|000>+|111>)/sqrt(5) example and tabulate the "
                     "transition bounds as CSV (deterministic; no randomness involved)");
  bounds_ghz->add_option("--alpha-min", bounds_args.config.alpha_min, "Grid start")
      ->capture_default_str();
  bounds_ghz->add_option("--alpha-max", bounds_args.config.alpha_max, "Grid end")
      ->capture_default_str();
  bounds_ghz->add_option("--steps", bounds_args.config.steps, "Grid points")
      ->capture_default_str();
  bounds_ghz->add_option("--ns", bounds_args.config.ns, "Cycle sizes for the upper bounds")
      ->delimiter(',')
      ->capture_default_str();
  bounds_ghz->add_option("--out", bounds_args.out_path, "CSV output path (default: stdout)");

  CLI::App* fuzz = app.add_subcommand("fuzz", "Randomized stress tests");
  CLI::App* fuzz_mono = fuzz->add_subcommand(
      "monotonicity", "Fuzz one monotone against random local instruments and report the "
                      "worst averaging margin as JSON");
  fuzz->require_subcommand(1);
  fuzz_mono->add_option("--spec", fuzz_args.spec_path, "Monotone spec JSON file")->required();
  fuzz_mono->add_option("--trials", fuzz_args.trials, "Number of trials")->capture_default_str();
  fuzz_mono->add_option("--seed", fuzz_args.seed, "Root seed")->capture_default_str();

  CLI::App* certificate = app.add_subcommand("certificate", "Convexity certificates");
  certificate->require_subcommand(1);
  CLI::App* certificate_verify = certificate->add_subcommand(
      "verify", "Verify a certificate file that embeds its graph");
  certificate_verify->add_option("certificate", certificate_args.certificate_path,
                                 "Certificate JSON file")
      ->required();
  certificate_verify->add_option("--psd-tol", certificate_args.psd_tol,
                                 "Allowed negative eigenvalue slack")
      ->capture_default_str();
  certificate_verify->add_option("--sum-tol", certificate_args.sum_tol,
                                 "Allowed |sum - 1| residual")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the one-line diagnostic
    return kUsage;
  }

  if (graph_check->parsed()) return run_graph_check(graph_args);
  if (invariant_eval->parsed()) return run_invariant_eval(invariant_args);
  if (monotone_eval->parsed()) return run_monotone_eval(monotone_args);
  if (bounds_ghz->parsed()) return run_bounds(bounds_args);
  if (fuzz_mono->parsed()) return run_fuzz(fuzz_args);
  if (certificate_verify->parsed()) return run_certificate_verify(certificate_args);
  return fail(kUsage, "no subcommand given");
}

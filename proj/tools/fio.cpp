// fio: command-line front end.
//
// Exit codes: 0 success, 1 validation error (bad flags, bad input, bad
// config), 2 an experiment ran but its assertions failed.

#include <CLI11.hpp>
#include <iostream>

#include "fio/exponents.hpp"
#include "fio/io.hpp"
#include "fio/lab.hpp"
#include "fio/version.hpp"

using namespace fio;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitAssertion = 2;

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json sheet_json(const ExponentSheet& sh) {
  json j;
  j["inputs"] = {{"n", sh.in.n},
                 {"p", sh.in.p},
                 {"r", sh.in.r},
                 {"m", sh.in.m},
                 {"delta", sh.in.delta},
                 {"eps", sh.eps},
                 {"delta_prime", opt_json(sh.dprime)}};
  j["s_p"] = sh.s_p;
  j["sigma"] = sh.sigma;
  j["tau"] = sh.tau;
  j["gamma"] = sh.gamma;
  j["beta"] = sh.beta;
  j["rho"] = sh.rho;
  if (sh.interp) {
    j["theta"] = sh.interp->theta;
    j["r0"] = sh.interp->r0;
    j["r1"] = sh.interp->r1;
    j["kappa"] = sh.interp->kappa;
    j["lambda"] = sh.interp->lambda;
    j["reflected"] = sh.interp->reflected;
    j["gamma_interp"] = *sh.gamma_interp;
  } else {
    for (const char* k : {"theta", "r0", "r1", "kappa", "lambda", "gamma_interp"}) j[k] = nullptr;
  }
  j["sobolev_lo"] = sh.sobolev.lo;
  j["sobolev_hi"] = sh.sobolev.hi;
  j["sobolev_nonempty"] = sh.sobolev.nonempty;
  j["sobolev_lo_endpoint"] = sh.sobolev.lo_endpoint;
  j["sobolev_hi_endpoint"] = sh.sobolev.hi_endpoint;
  j["flags"] = {{"thm11_applicable", sh.thm11_applicable},
                {"strip_valid", sh.strip_valid},
                {"beta_le_gamma", sh.beta_le_gamma}};
  return j;
}

json norm_json(const NormReport& r) {
  json j{{"space", r.space}, {"value", r.value}};
  if (r.space == "zygmund") {
    j["r"] = r.r;
    j["shell_terms"] = r.shell_terms;
    j["argmax_shell"] = r.argmax_shell;
  } else {
    j["s"] = r.s;
    j["p"] = r.p;
  }
  if (r.space.rfind("hfio", 0) == 0) {
    j["low_term"] = r.low_term;
    j["sphere_term"] = r.sphere_term;
  }
  return j;
}

json seminorm_json(const SymbolSeminorm& s) {
  json per = json::array();
  for (const auto& e : s.per_alpha)
    per.push_back({{"alpha", e.alpha}, {"pointwise", e.pointwise}, {"regularity", e.regularity}});
  return {{"M", s.M}, {"r", s.r}, {"m", s.m}, {"delta", s.delta}, {"l", s.l}, {"per_alpha", per}};
}

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_atomic(out, text);
}

Lattice parse_lattice(const std::vector<int>& v, int dim) {
  if (static_cast<int>(v.size()) != dim) throw DomainError("--k needs one entry per dimension");
  Lattice k{0, 0, 0};
  for (int a = 0; a < dim; ++a) k[a] = v[a];
  return k;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy spaces for Fourier integral operators: norms, rough symbols and experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("fio ") + kVersion + " (config schema " +
                                        std::to_string(kConfigSchemaVersion) + ")");
  int thread_count = 1;
  app.add_option("--threads", thread_count, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  // exponents
  auto* ex = app.add_subcommand("exponents", "exponent sheet for a parameter point");
  ExponentInputs ein;
  std::optional<double> e_eps, e_dprime;
  bool e_json = false;
  ex->add_option("--n", ein.n, "dimension")->required();
  ex->add_option("--p", ein.p, "integrability exponent")->required();
  ex->add_option("--r", ein.r, "Zygmund regularity")->required();
  ex->add_option("--m", ein.m, "symbol order");
  ex->add_option("--delta", ein.delta, "symbol type delta in [0, 1/2]");
  ex->add_option("--eps", e_eps, "epsilon in (0, r/2] (default 0.01 r)");
  ex->add_option("--delta-prime", e_dprime, "interpolation strip parameter");
  ex->add_flag("--json", e_json, "print JSON");

  // norm
  auto* nm = app.add_subcommand("norm", "evaluate a norm of a grid function");
  std::string n_in, n_space = "hfio", n_out;
  double n_s = 0.0, n_p = 2.0, n_r = 1.0;
  int n_nodes = 256;
  nm->add_option("--in", n_in, "FIOG input")->required();
  nm->add_option("--space", n_space, "lp | sobolev | zygmund | hfio | hfio-alt")
      ->check(CLI::IsMember({"lp", "sobolev", "zygmund", "hfio", "hfio-alt"}));
  nm->add_option("--s", n_s, "smoothness");
  nm->add_option("--p", n_p, "integrability");
  nm->add_option("--r", n_r, "Zygmund exponent");
  nm->add_option("--sphere-nodes", n_nodes, "sphere quadrature size")->check(CLI::PositiveNumber);
  nm->add_option("--out", n_out, "write JSON here instead of stdout");

  // smooth
  auto* sm = app.add_subcommand("smooth", "split a symbol into sharp and flat parts");
  std::string s_in, s_sharp, s_flat;
  double s_beta = 0.5, s_plateau = 0.5, s_support = 1.0;
  sm->add_option("--in", s_in, "FIOS input")->required();
  sm->add_option("--beta", s_beta, "smoothing exponent")->required();
  sm->add_option("--out-sharp", s_sharp, "FIOS output for the sharp part")->required();
  sm->add_option("--out-flat", s_flat, "FIOS output for the flat part")->required();
  sm->add_option("--plateau", s_plateau, "bump plateau radius");
  sm->add_option("--support", s_support, "bump support radius");

  // seminorm
  auto* sn = app.add_subcommand("seminorm", "C^r_* S^{m,l}_{1,delta} seminorm of a symbol");
  std::string sn_in, sn_out;
  double sn_r = 1.0, sn_m = 0.0, sn_delta = 0.5;
  int sn_l = 0;
  sn->add_option("--in", sn_in, "FIOS input")->required();
  sn->add_option("--r", sn_r, "regularity")->required();
  sn->add_option("--m", sn_m, "order");
  sn->add_option("--delta", sn_delta, "type");
  sn->add_option("--l", sn_l, "eta-derivative order (0..2)")->check(CLI::Range(0, 2));
  sn->add_option("--out", sn_out, "write JSON here instead of stdout");

  // apply
  auto* ap = app.add_subcommand("apply", "apply a(x, D) to a grid function");
  std::string a_symbol, a_in, a_out, a_path = "auto";
  bool a_adjoint = false;
  ap->add_option("--symbol", a_symbol, "FIOS symbol")->required();
  ap->add_option("--in", a_in, "FIOG input")->required();
  ap->add_option("--out", a_out, "FIOG output")->required();
  ap->add_option("--path", a_path, "auto | direct | separable")->check(CLI::IsMember({"auto", "direct", "separable"}));
  ap->add_flag("--adjoint", a_adjoint, "apply the adjoint instead");

  // lab
  auto* lab = app.add_subcommand("lab", "run an experiment");
  std::string l_name, l_config, l_out, l_csv;
  lab->add_option("experiment", l_name, "sandwich | three-lines | bound-sweep | pipeline | embedding")
      ->required()
      ->check(CLI::IsMember(experiment_names()));
  lab->add_option("--config", l_config, "JSON config")->required();
  lab->add_option("--out", l_out, "JSON-lines report");
  lab->add_option("--csv", l_csv, "CSV of the report rows");

  // gen
  auto* gen = app.add_subcommand("gen", "generate grid functions and symbols");
  std::string g_kind, g_out, g_b, g_symbol = "identity";
  int g_n = 2, g_N = 64, g_J = 5, g_member = 0, g_kmax = 8;
  std::uint64_t g_seed = 42;
  double g_r = 1.0, g_decay = 1.0, g_delta = 0.5, g_bracket = 0.0;
  std::vector<int> g_k;
  bool g_dense = false;
  gen->add_option("--kind", g_kind, "lacunary | ensemble | plane-wave | symbol")
      ->required()
      ->check(CLI::IsMember({"lacunary", "ensemble", "plane-wave", "symbol"}));
  gen->add_option("--n", g_n, "dimension");
  gen->add_option("--N", g_N, "points per axis");
  gen->add_option("--seed", g_seed, "seed");
  gen->add_option("--r", g_r, "lacunary regularity");
  gen->add_option("--J", g_J, "lacunary top index");
  gen->add_option("--member", g_member, "ensemble member");
  gen->add_option("--kmax", g_kmax, "ensemble band limit");
  gen->add_option("--decay", g_decay, "ensemble envelope exponent");
  gen->add_option("--k", g_k, "plane-wave frequency")->delimiter(',');
  gen->add_option("--symbol-kind", g_symbol, "identity | multiplier | multiplication | tensor | flat-of-b")
      ->check(CLI::IsMember({"identity", "multiplier", "multiplication", "tensor", "flat-of-b"}));
  gen->add_option("--b", g_b, "FIOG file with b(x) for symbol kinds that need one");
  gen->add_option("--bracket", g_bracket, "multiplier profile <eta>^bracket");
  gen->add_option("--delta", g_delta, "flat-of-b type");
  gen->add_flag("--dense", g_dense, "store the symbol as a dense table");
  gen->add_option("--out", g_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    set_threads(thread_count);

    if (ex->parsed()) {
      ein.eps = e_eps;
      ein.dprime = e_dprime;
      const ExponentSheet sh = exponent_sheet(ein);
      const json j = sheet_json(sh);
      if (e_json) {
        std::cout << j.dump(2) << "\n";
      } else {
        for (const auto& [k, v] : j.items())
          if (v.is_primitive()) std::cout << k << " = " << v.dump() << "\n";
      }
      return 0;
    }

    if (nm->parsed()) {
      const GridFunction f = read_grid_function(n_in);
      NormReport rep;
      if (n_space == "lp") {
        rep.space = "lp";
        rep.p = n_p;
        rep.value = lp_norm(f, n_p);
      } else if (n_space == "sobolev") {
        rep.space = "sobolev";
        rep.s = n_s;
        rep.p = n_p;
        rep.value = sobolev_norm(f, n_s, n_p);
      } else if (n_space == "zygmund") {
        rep = zygmund_report(f, n_r, LPFamily(f.grid));
      } else {
        const FunctionSpace space(f.grid, SpaceSettings{n_nodes, {}});
        rep = n_space == "hfio" ? hfio_norm(f, n_s, n_p, space) : hfio_norm_alt(f, n_s, n_p, space);
      }
      emit(norm_json(rep), n_out);
      return 0;
    }

    if (sm->parsed()) {
      const RoughSymbol a = read_fios(s_in);
      const SmoothingSplit split = smooth_split(a, s_beta, LPFamily(a.grid()), BumpProfile(s_plateau, s_support));
      const json prov{{"tool", "fio smooth"}, {"beta", s_beta}, {"plateau", s_plateau}, {"support", s_support}};
      write_fios(s_sharp, split.sharp, prov);
      write_fios(s_flat, split.flat, prov);
      return 0;
    }

    if (sn->parsed()) {
      const RoughSymbol a = read_fios(sn_in);
      emit(seminorm_json(seminorm(a, sn_r, sn_m, sn_delta, sn_l, LPFamily(a.grid()))), sn_out);
      return 0;
    }

    if (ap->parsed()) {
      const RoughSymbol a = read_fios(a_symbol);
      const GridFunction f = read_grid_function(a_in);
      const ApplyPath path = a_path == "direct"      ? ApplyPath::direct
                             : a_path == "separable" ? ApplyPath::separable
                                                     : ApplyPath::automatic;
      const Operator op(a, path);
      const GridFunction g = a_adjoint ? op.adjoint(f) : op.apply(f);
      write_fiog(a_out, g, {{"tool", "fio apply"}, {"adjoint", a_adjoint}});
      return 0;
    }

    if (lab->parsed()) {
      const LabConfig cfg = load_config(l_config);
      const ExperimentReport rep = run_experiment(l_name, cfg);
      if (!l_out.empty()) write_atomic(l_out, rep.jsonl());
      if (!l_csv.empty()) write_atomic(l_csv, rep.csv());
      json s = rep.summary;
      s["experiment"] = rep.experiment;
      std::cout << s.dump(2) << "\n";
      return rep.pass ? 0 : kExitAssertion;
    }

    if (gen->parsed()) {
      const Grid g(g_n, g_N);
      json prov{{"tool", "fio gen"}, {"kind", g_kind}, {"seed", g_seed}};
      if (g_kind == "lacunary") {
        prov["r"] = g_r;
        prov["J"] = g_J;
        write_fiog(g_out, lacunary_field(g, g_r, g_J, g_seed), prov);
      } else if (g_kind == "ensemble") {
        EnsembleConfig spec;
        spec.kmax = g_kmax;
        spec.decay = g_decay;
        prov["member"] = g_member;
        prov["kmax"] = g_kmax;
        prov["decay"] = g_decay;
        write_fiog(g_out, ensemble_member(g, spec, g_seed, g_member), prov);
      } else if (g_kind == "plane-wave") {
        const Lattice k = parse_lattice(g_k, g_n);
        GridFunction f(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const Lattice x = g.offsets(i);
          double phase = 0.0;
          for (int a = 0; a < g_n; ++a) phase += static_cast<double>(k[a]) * x[a] * g.dx();
          f.values[i] = std::polar(1.0, phase);
        }
        prov["k"] = g_k;
        write_fiog(g_out, f, prov);
      } else {
        TestSymbolParams params;
        if (!g_b.empty()) params.b = read_grid_function(g_b);
        params.w = EtaProfile::radial({RadialFactor::bracket(g_bracket)});
        params.delta = g_delta;
        const LPFamily lp(g);
        std::string kind = g_symbol;
        if (kind == "identity") {
          kind = "multiplier";
          params.w = EtaProfile(1.0);
        }
        if (params.b.values.empty() && kind != "multiplier")
          throw DomainError("--symbol-kind " + g_symbol + " needs --b");
        if (!params.b.values.empty() && !(params.b.grid == g)) throw ShapeError("--b grid does not match --n/--N");
        RoughSymbol a = make_test_symbol(kind, g, params, &lp);
        if (g_dense) a = a.to_dense();
        prov["symbol_kind"] = g_symbol;
        write_fios(g_out, a, prov);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "fio: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "fio: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}

// schmidt, entropy-divergence, nogo-bound, bell-seesaw, chain-expect,
// modular, doubles, weyl-projector.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "context.hpp"
#include "infent/bell.hpp"
#include "infent/bipartite.hpp"
#include "infent/chain.hpp"
#include "infent/modular.hpp"
#include "infent/nopa.hpp"
#include "infent/random.hpp"
#include "infent/weyl.hpp"
#include "pool.hpp"

namespace infent::cli {

namespace {

Cell integer(std::size_t v) { return static_cast<std::int64_t>(v); }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PairIndex parse_pair_index(const std::string& text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ArgumentError("pair index must be a non-negative decimal integer, got '" + text + "'");
  return PairIndex(text);
}

BipartitePureState weighted_state(const std::vector<double>& weights) {
  if (weights.size() < 2) throw ArgumentError("--weights needs at least two entries");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ArgumentError("--weights entries must be positive");
    total += w;
  }
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(weights.size()), static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    c(k, k) = std::sqrt(weights[i] / total);
  }
  return BipartitePureState::normalized(c);
}

BipartitePureState random_state(std::size_t d, Rng& rng) {
  return BipartitePureState::normalized(random_ginibre(d, d, rng));
}

/// States shared by modular and doubles.
BipartitePureState pick_state(const std::string& kind, std::size_t d, const std::vector<double>& weights,
                              Rng& rng) {
  if (kind == "max") return max_entangled(d);
  if (kind == "singlet") return BipartitePureState::from_vector(singlet_vector(), 2, 2);
  if (kind == "weights") return weighted_state(weights);
  return random_state(d, rng);
}

/// Diagonal in an eigenbasis of rho_A, hence in its centralizer.
LinearOperator random_centralizer_element(const ModularData& md, Rng& rng) {
  const Spectrum sp = spectrum(md.rho_a);
  const Matrix diag = random_ginibre(md.dim(), 1, rng);
  Matrix a = sp.eigenvectors * diag.col(0).asDiagonal() * sp.eigenvectors.adjoint();
  return LinearOperator(a);
}

LinearOperator random_operator(std::size_t d, Rng& rng) {
  return LinearOperator(random_ginibre(d, d, rng) / std::sqrt(static_cast<double>(d)));
}

}  // namespace

void add_schmidt(CLI::App& app, Registry& reg) {
  struct Opts {
    std::string state = "max";
    std::size_t d = 4;
    double lambda = 0.5;
    double r = 0.0;
    std::size_t trunc = 64;
    CLI::Option* r_opt = nullptr;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("schmidt", "Schmidt coefficients and entanglement entropy of a pure state");
  sub->add_option("--state", o->state, "max | product | random | nopa | divergent")
      ->check(CLI::IsMember({"max", "product", "random", "nopa", "divergent"}));
  sub->add_option("--d", o->d, "local dimension (number of levels for divergent)")->check(CLI::Range(2, 1024));
  auto* l = sub->add_option("--lambda", o->lambda, "NOPA parameter lambda");
  o->r_opt = sub->add_option("--r", o->r, "NOPA squeezing r (instead of lambda)");
  l->excludes(o->r_opt);
  sub->add_option("--trunc", o->trunc, "Fock truncation for nopa")->check(CLI::Range(2, 1 << 20));

  reg["schmidt"] = [o](const Context& ctx) {
    SchmidtData s;
    std::vector<std::pair<std::string, std::string>> meta;
    Rng rng(ctx.seed);
    if (o->state == "max") {
      s = schmidt(max_entangled(o->d));
    } else if (o->state == "product") {
      const Vector u = random_unit_vector(o->d, rng);
      const Vector v = random_unit_vector(o->d, rng);
      s = schmidt(BipartitePureState::normalized(u * v.adjoint()));
    } else if (o->state == "random") {
      s = schmidt(random_state(o->d, rng));
    } else if (o->state == "nopa") {
      const NopaParams p = o->r_opt->count() ? NopaParams::from_r(o->r, o->trunc)
                                             : NopaParams::from_lambda(o->lambda, o->trunc);
      s.coefficients = nopa_coefficients(p);
      meta.emplace_back("entropy_closed_form", format_double(nopa_entropy_closed_form(p.lambda)));
      meta.emplace_back("tail_weight", format_double(p.tail_weight()));
    } else {
      s = divergent_family(o->d);
    }
    const double h = entropy(s);
    CommandResult res;
    res.table.columns = {"n", "coefficient", "weight", "entropy_bits"};
    for (std::size_t n = 0; n < s.coefficients.size(); ++n) {
      const double c = s.coefficients[n];
      res.table.add({integer(n), c, c * c, h});
    }
    res.metadata = std::move(meta);
    return res;
  };
}

void add_entropy_divergence(CLI::App& app, Registry& reg) {
  auto ns = std::make_shared<std::vector<std::size_t>>(std::vector<std::size_t>{100, 1000, 10000});
  auto* sub = app.add_subcommand("entropy-divergence", "Entropy of the truncated divergent-entropy family");
  sub->add_option("--n", *ns, "truncations N")->delimiter(',')->check(CLI::Range(2, 100000000));

  reg["entropy-divergence"] = [ns](const Context& ctx) {
    const auto h = parallel_map(*ns, ctx.threads, [](std::size_t n) { return entropy(divergent_family(n)); });
    CommandResult res;
    res.table.columns = {"N", "entropy_bits", "increase"};
    bool monotone = true;
    for (std::size_t i = 0; i < ns->size(); ++i) {
      Cell inc;
      if (i > 0) {
        const bool up = h[i] > h[i - 1];
        monotone = monotone && up;
        inc = up;
      }
      res.table.add({integer((*ns)[i]), h[i], inc});
    }
    res.metadata.emplace_back("strictly_increasing", monotone ? "true" : "false");
    return res;
  };
}

void add_nogo_bound(CLI::App& app, Registry& reg) {
  struct Opts {
    std::vector<std::size_t> d{2, 3, 4};
    std::size_t samples = 1000;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("nogo-bound", "Fidelity of random product states with the maximally entangled state");
  sub->add_option("--d", o->d, "dimensions")->delimiter(',')->check(CLI::Range(2, 32));
  sub->add_option("--samples", o->samples, "random product states per d")->check(CLI::Range(1, 100000000));

  reg["nogo-bound"] = [o](const Context& ctx) {
    struct Row {
      double max_fidelity = 0.0;
      bool all_ppt_ok = true;
      double pt_norm = 0.0;
    };
    const auto rows = parallel_map(o->d, ctx.threads, [&](std::size_t d) {
      Rng rng(ctx.seed + d);
      Row row;
      for (std::size_t i = 0; i < o->samples; ++i) {
        const PptReport rep = ppt_fidelity_bound_check(random_product_pure(d, d, rng));
        row.max_fidelity = std::max(row.max_fidelity, rep.fidelity);
        row.all_ppt_ok = row.all_ppt_ok && rep.is_ppt && rep.bound_respected;
      }
      row.pt_norm = operator_norm(partial_transpose(max_entangled_projector(d), kBob));
      return row;
    });
    CommandResult res;
    res.table.columns = {"d", "samples", "max_fidelity", "bound", "gap", "bound_respected", "pt_norm"};
    for (std::size_t i = 0; i < o->d.size(); ++i) {
      const double bound = 1.0 / static_cast<double>(o->d[i]);
      const bool ok = rows[i].all_ppt_ok && rows[i].max_fidelity <= bound + 1e-9;
      res.table.add({integer(o->d[i]), integer(o->samples), rows[i].max_fidelity, bound,
                     bound - rows[i].max_fidelity, ok, rows[i].pt_norm});
    }
    return res;
  };
}

void add_bell_seesaw(CLI::App& app, Registry& reg) {
  struct Opts {
    std::string state = "singlet";
    std::size_t d = 2;
    std::string k = "0";
    std::size_t restarts = 8;
    std::size_t max_iters = 1000;
    double tol = 1e-12;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("bell-seesaw", "CHSH see-saw maximization with random restarts");
  sub->add_option("--state", o->state, "singlet | product | omega | random-product | chain-pair")
      ->check(CLI::IsMember({"singlet", "product", "omega", "random-product", "chain-pair"}));
  sub->add_option("--d", o->d, "dimension for omega")->check(CLI::Range(2, 16));
  sub->add_option("--k", o->k, "pair index for chain-pair");
  sub->add_option("--restarts", o->restarts, "random restarts")->check(CLI::Range(0, 100000));
  sub->add_option("--max-iters", o->max_iters, "see-saw iteration cap")->check(CLI::Range(1, 1000000));
  sub->add_option("--tol", o->tol, "stop when an iteration gains less than this")->check(CLI::PositiveNumber);

  reg["bell-seesaw"] = [o](const Context& ctx) {
    LinearOperator rho = singlet_density();
    std::optional<PairIndex> k;
    if (o->state == "product") {
      Vector v = Vector::Zero(4);
      v(0) = 1.0;
      rho = LinearOperator::projector(v, {2, 2});
    } else if (o->state == "omega") {
      rho = max_entangled_projector(o->d);
    } else if (o->state == "random-product") {
      Rng rng(ctx.seed);
      rho = random_product_pure(2, 2, rng);
    } else if (o->state == "chain-pair") {
      k = parse_pair_index(o->k);
      rho = restrict(ChainState{}, *k);
    }
    RestartOptions opt;
    opt.restarts = o->restarts;
    opt.seed = ctx.seed + 1;
    opt.max_iters = o->max_iters;
    opt.tol = o->tol;
    opt.threads = ctx.threads;
    const RestartResult rr = beta_optimize_restarts(rho, opt);

    CommandResult res;
    res.table.columns = {"start", "beta", "raw_chsh", "cirelson_ok"};
    auto ok = [](double b) { return b <= kTsirelson + 1e-9; };
    for (std::size_t i = 0; i < rr.betas.size(); ++i) {
      const std::string name = i == 0 ? "tsirelson" : "random-" + std::to_string(i);
      res.table.add({name, rr.betas[i], 2.0 * rr.betas[i], ok(rr.betas[i])});
    }
    res.table.add({std::string("best"), rr.best.beta, 2.0 * rr.best.beta, ok(rr.best.beta)});
    if (k) {
      // The optimized witness placed on pair k of the infinite chain.
      const ChainObservable t = test_operator_sequence(*k, *k, rr.best);
      const double raw = expect(ChainState{}, t).real();
      res.table.add({"chain-" + k->str(), 0.5 * raw, raw, ok(0.5 * raw)});
    }
    res.metadata.emplace_back("best_index", std::to_string(rr.best_index));
    return res;
  };
}

void add_chain_expect(CLI::App& app, Registry& reg) {
  struct Opts {
    std::string preset = "test-operator";
    std::vector<std::string> k{"0", "10", "1000000"};
    std::string observable;
    std::string state;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("chain-expect", "Expectations of local observables on the singlet chain");
  sub->add_option("--preset", o->preset, "identity | sz-alice | sxsx | test-operator")
      ->check(CLI::IsMember({"identity", "sz-alice", "sxsx", "test-operator"}));
  sub->add_option("--k", o->k, "pair indices (arbitrary size)")->delimiter(',');
  sub->add_option("--observable", o->observable, "observable JSON file (replaces the preset)");
  sub->add_option("--state", o->state, "state JSON file (default: singlet on every pair)");

  reg["chain-expect"] = [o](const Context&) {
    const ChainState state = o->state.empty() ? ChainState{} : ChainState::from_json(read_text(o->state));
    CommandResult res;
    res.table.columns = {"observable", "k", "re", "im", "half_re"};
    auto row = [&](const std::string& name, const std::string& k, const ChainObservable& a) {
      const Complex v = expect(state, a);
      res.table.add({name, k, v.real(), v.imag(), 0.5 * v.real()});
    };
    if (!o->observable.empty()) {
      row("file", "", ChainObservable::from_json(read_text(o->observable)));
      return res;
    }
    for (const auto& text : o->k) {
      const PairIndex k = parse_pair_index(text);
      ChainObservable a;
      if (o->preset == "sz-alice") {
        a = ChainObservable::local(k, tensor(pauli_z(), LinearOperator::identity(2)));
      } else if (o->preset == "sxsx") {
        a = ChainObservable::local(k, tensor(pauli_x(), pauli_x()));
      } else if (o->preset == "test-operator") {
        a = test_operator_sequence(k, k, tsirelson_witness());
      }
      row(o->preset, k.str(), a);
    }
    return res;
  };
}

void add_modular(CLI::App& app, Registry& reg) {
  struct Opts {
    std::string state = "random";
    std::size_t d = 4;
    std::vector<double> weights;
    std::size_t samples = 100;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("modular", "Modular operator, conjugation and doubles on sampled states");
  sub->add_option("--state", o->state, "max | weights | random (a fresh state per sample)")
      ->check(CLI::IsMember({"max", "weights", "random"}));
  sub->add_option("--d", o->d, "dimension")->check(CLI::Range(2, 16));
  sub->add_option("--weights", o->weights, "Schmidt weights for --state weights")->delimiter(',');
  sub->add_option("--samples", o->samples, "number of samples")->check(CLI::Range(1, 1000000));

  reg["modular"] = [o](const Context& ctx) {
    std::vector<std::size_t> idx(o->samples);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const std::size_t d = o->state == "weights" ? o->weights.size() : o->d;

    const auto rows = parallel_map(idx, ctx.threads, [&](std::size_t i) {
      Rng rng(ctx.seed + i);
      const BipartitePureState psi = pick_state(o->state, d, o->weights, rng);
      const ModularData md = modular_data(psi);
      const bool centralizer_sample = i % 2 == 1;
      const LinearOperator a = centralizer_sample ? random_centralizer_element(md, rng) : random_operator(d, rng);

      // S (A (x) 1) Omega = (A^dagger (x) 1) Omega
      const Vector lhs = md.apply_s(embed_alice(a, d).apply(md.omega));
      const Vector rhs = embed_alice(a.adjoint(), d).apply(md.omega);
      const double s_res = (lhs - rhs).norm();

      // Spectrum of Delta against the ratios p_i / p_j.
      std::vector<double> p;
      for (double c : schmidt(psi).coefficients) p.push_back(c * c);
      std::vector<double> ratios;
      for (double pi : p)
        for (double pj : p) ratios.push_back(pi / pj);
      std::sort(ratios.begin(), ratios.end());
      std::vector<double> eig = spectrum(md.delta).real_eigenvalues();
      std::sort(eig.begin(), eig.end());
      double delta_res = 0.0;
      for (std::size_t j = 0; j < eig.size(); ++j) delta_res = std::max(delta_res, std::abs(eig[j] - ratios[j]));
      delta_res /= std::max(1.0, ratios.back());

      double flat_dev = 0.0;
      for (double pi : p) flat_dev = std::max(flat_dev, std::abs(pi - 1.0 / static_cast<double>(d)));
      const double delta_id = max_abs_entry(md.delta.matrix() - Matrix::Identity(md.delta.rows(), md.delta.cols()));
      // omega(E_ij E_kl) - omega(E_kl E_ij) over matrix units.
      const Matrix& ra = md.rho_a.matrix();
      double trace_def = 0.0;
      const auto n = static_cast<Eigen::Index>(d);
      for (Eigen::Index i1 = 0; i1 < n; ++i1)
        for (Eigen::Index j1 = 0; j1 < n; ++j1)
          for (Eigen::Index k1 = 0; k1 < n; ++k1)
            for (Eigen::Index l1 = 0; l1 < n; ++l1) {
              const Complex ab = j1 == k1 ? ra(l1, i1) : Complex{};
              const Complex ba = l1 == i1 ? ra(j1, k1) : Complex{};
              trace_def = std::max(trace_def, std::abs(ab - ba));
            }
      const bool flat = flat_dev <= 1e-9;
      const bool delta_one = delta_id <= 1e-9;
      const bool trace_prop = trace_def <= 1e-9;

      const double comm = commutator(a, md.rho_a).matrix().norm();
      const LinearOperator b = mirror_to_bob(md, a);
      const double defect = double_defect(md.omega, a, b).max();
      const bool double_ok = (defect <= 1e-8) == (comm <= kCentralizerThreshold);

      return std::vector<Cell>{integer(i), std::string(centralizer_sample ? "centralizer" : "generic"),
                               s_res, delta_res, flat, delta_one, trace_prop,
                               flat == delta_one && delta_one == trace_prop, comm, defect, double_ok};
    });
    CommandResult res;
    res.table.columns = {"sample", "operator", "s_residual", "delta_spectrum_residual", "flat_spectrum",
                         "delta_is_identity", "trace_property", "equivalence_ok", "centralizer_norm",
                         "double_defect", "double_ok"};
    for (const auto& r : rows) res.table.add(r);
    return res;
  };
}

void add_doubles(CLI::App& app, Registry& reg) {
  struct Opts {
    std::string state = "max";
    std::size_t d = 2;
    std::vector<double> weights;
    std::string op = "sz";
    std::string bob = "auto";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("doubles", "EPR double of one Alice observable");
  sub->add_option("--state", o->state, "max | singlet | weights | random")
      ->check(CLI::IsMember({"max", "singlet", "weights", "random"}));
  sub->add_option("--d", o->d, "dimension")->check(CLI::Range(2, 16));
  sub->add_option("--weights", o->weights, "Schmidt weights for --state weights")->delimiter(',');
  sub->add_option("--operator", o->op, "sz (clock) | sx (shift) | random | random-centralizer")
      ->check(CLI::IsMember({"sz", "sx", "random", "random-centralizer"}));
  sub->add_option("--bob", o->bob, "auto | minus-a | a-transpose")
      ->check(CLI::IsMember({"auto", "minus-a", "a-transpose"}));

  reg["doubles"] = [o](const Context& ctx) {
    Rng rng(ctx.seed);
    const std::size_t d = o->state == "weights" ? o->weights.size() : o->state == "singlet" ? 2 : o->d;
    const BipartitePureState psi = pick_state(o->state, d, o->weights, rng);
    const ModularData md = modular_data(psi);
    const int di = static_cast<int>(d);
    LinearOperator a = o->op == "sz"   ? clock(di).with_dims({d})
                       : o->op == "sx" ? shift(di).with_dims({d})
                       : o->op == "random" ? random_operator(d, rng)
                                           : random_centralizer_element(md, rng);
    const double comm = commutator(a, md.rho_a).matrix().norm();
    const auto found = find_double(md, a);
    LinearOperator b = a;
    if (o->bob == "auto") b = found ? *found : mirror_to_bob(md, a);
    if (o->bob == "minus-a") b = -a;
    if (o->bob == "a-transpose") b = a.transpose();
    const DoubleDefect dd = double_defect(md.omega, a, b);
    const double flow = max_abs_entry(modular_flow(md, a, 1.0).matrix() - a.matrix());

    CommandResult res;
    res.table.columns = {"quantity", "value"};
    res.table.add({std::string("dimension"), integer(d)});
    res.table.add({std::string("centralizer_norm"), comm});
    res.table.add({std::string("in_centralizer"), comm <= kCentralizerThreshold});
    res.table.add({std::string("double_found"), found.has_value()});
    res.table.add({std::string("forward_defect"), dd.forward});
    res.table.add({std::string("backward_defect"), dd.backward});
    res.table.add({std::string("is_double"), dd.max() <= 1e-8});
    res.table.add({std::string("bob_minus_transpose"), max_abs_entry(b.matrix() - a.matrix().transpose())});
    res.table.add({std::string("bob_plus_a"), max_abs_entry(b.matrix() + a.matrix())});
    res.table.add({std::string("modular_flow_shift"), flow});
    return res;
  };
}

void add_weyl_projector(CLI::App& app, Registry& reg) {
  auto ds = std::make_shared<std::vector<int>>(std::vector<int>{2, 3, 5});
  auto* sub = app.add_subcommand("weyl-projector", "Weyl expansion of the maximally entangled projector");
  sub->add_option("--d", *ds, "dimensions")->delimiter(',')->check(CLI::Range(2, 12));

  reg["weyl-projector"] = [ds](const Context& ctx) {
    const auto rows = parallel_map(*ds, ctx.threads, [](int d) {
      const auto du = static_cast<std::size_t>(d);
      const LinearOperator pw = max_ent_projector_weyl(d);
      const LinearOperator pd = max_entangled_projector(du);
      const double proj_res = max_abs_entry(pw.matrix() - pd.matrix());
      const double idem = max_abs_entry((pw * pw).matrix() - pw.matrix());
      const double trace = pw.trace().real();
      const LinearOperator u = clock(d).with_dims({du});
      const LinearOperator v = shift(d).with_dims({du});
      const double rel = weyl_relation_residual(u, v, d);

      const ModularData md = modular_data(max_entangled(du));
      const auto u2 = find_double(md, u);
      const auto v2dag = find_double(md, v.adjoint());
      if (!u2 || !v2dag) throw PreconditionError("Weyl generators have no doubles on the maximally entangled state");
      const double f_perfect = weyl_fidelity(pd, u, v, *u2, *v2dag, d).real();
      Vector zero = Vector::Zero(static_cast<Eigen::Index>(du * du));
      zero(0) = 1.0;
      const double f_product = weyl_fidelity(LinearOperator::projector(zero, {du, du}), u, v, *u2, *v2dag, d).real();
      const double partial = max_abs_entry(partial_weyl_sum(d, {0}).matrix() - pd.matrix());
      return std::vector<Cell>{static_cast<std::int64_t>(d), proj_res, idem, trace, rel, f_perfect, f_product, partial};
    });
    CommandResult res;
    res.table.columns = {"d", "projector_residual", "idempotency", "trace", "relation_residual",
                         "perfect_doubles_fidelity", "product_fidelity", "partial_sum_residual"};
    for (const auto& r : rows) res.table.add(r);
    return res;
  };
}

}  // namespace infent::cli

// nopa-extract, nopa-perm, epr-covariance, char-fn, grid-extract.

#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>

#include <CLI11.hpp>

#include "context.hpp"
#include "infent/grid.hpp"
#include "infent/nopa.hpp"
#include "pool.hpp"

namespace infent::cli {

namespace {

Cell integer(std::size_t v) { return static_cast<std::int64_t>(v); }

Cell maybe(const std::optional<double>& v) {
  if (v) return *v;
  return {};
}

/// Smallest N with lambda^{2N} <= tol.
std::size_t auto_trunc(double lambda, double tol) {
  if (lambda == 0.0) return 2;
  const double n = std::ceil(std::log(tol) / (2.0 * std::log(lambda)));
  if (!(n < 1e8)) throw ArgumentError("lambda too close to 1 for an automatic truncation");
  return std::max<std::size_t>(2, static_cast<std::size_t>(n));
}

}  // namespace

std::vector<std::pair<double, double>> SqueezeSweep::points() const {
  std::vector<std::pair<double, double>> out;
  if (!r.empty()) {
    for (double x : r) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw ArgumentError("--r values must be finite and >= 0");
      out.emplace_back(std::tanh(x), x);
    }
    return out;
  }
  for (double l : lambda.empty() ? default_lambda : lambda) {
    if (!(l >= 0.0 && l < 1.0)) throw ArgumentError("--lambda values must lie in [0, 1)");
    out.emplace_back(l, std::atanh(l));
  }
  return out;
}

void add_squeeze_options(CLI::App& sub, SqueezeSweep& sweep) {
  auto* l = sub.add_option("--lambda", sweep.lambda, "lambda = tanh r values")->delimiter(',');
  auto* r = sub.add_option("--r", sweep.r, "squeezing values r (instead of lambda)")->delimiter(',');
  l->excludes(r);
}

void add_nopa_extract(CLI::App& app, Registry& reg) {
  struct Opts {
    SqueezeSweep sweep{{}, {}, {0.5, 0.9, 0.99}};
    std::size_t d = 2;
    std::size_t trunc = 256;
    std::size_t iterations = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("nopa-extract", "Qudit extraction from the truncated two-mode squeezed state");
  add_squeeze_options(*sub, o->sweep);
  sub->add_option("--d", o->d, "qudit dimension")->check(CLI::Range(2, 64));
  sub->add_option("--trunc", o->trunc, "Fock truncation N (a multiple of d)")->check(CLI::Range(2, 1024));
  sub->add_option("--iterations", o->iterations, "repeated extractions from the coarse state")
      ->check(CLI::Range(1, 16));

  reg["nopa-extract"] = [o](const Context& ctx) {
    const auto pts = o->sweep.points();
    const auto blocks = parallel_map(pts, ctx.threads, [&](const std::pair<double, double>& lr) {
      std::vector<std::vector<Cell>> rows;
      NopaParams p = NopaParams::from_lambda(lr.first, o->trunc);
      for (std::size_t it = 1; it <= o->iterations; ++it) {
        const Extraction e = extract_qudit(p, o->d);
        const double closed = extraction_fidelity_closed_form(p.lambda, o->d);
        rows.push_back({lr.first, lr.second, integer(o->d), integer(p.trunc), integer(it), e.coarse_params.lambda,
                        integer(e.coarse_params.trunc), e.residual, e.fidelity, closed,
                        std::abs(e.fidelity - closed)});
        p = e.coarse_params;
      }
      return rows;
    });
    CommandResult res;
    res.table.columns = {"lambda", "r", "d", "trunc", "iteration", "coarse_lambda", "coarse_trunc",
                         "residual", "fidelity", "closed_form", "closed_form_error"};
    for (const auto& b : blocks)
      for (const auto& r : b) res.table.add(r);
    return res;
  };
}

void add_nopa_perm(CLI::App& app, Registry& reg) {
  struct Opts {
    SqueezeSweep sweep{{}, {}, {0.9, 0.99, 0.999}};
    std::vector<std::string> perms{"identity", "shift", "even", "odd", "swap"};
    std::uint64_t ell = 1;
    std::size_t trunc = 0;
    double tol = 1e-12;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("nopa-perm", "Double defects of level permutations on the squeezed state");
  add_squeeze_options(*sub, o->sweep);
  sub->add_option("--perm", o->perms, "identity | shift | even | odd | swap")
      ->delimiter(',')
      ->check(CLI::IsMember({"identity", "shift", "even", "odd", "swap"}));
  sub->add_option("--ell", o->ell, "shift distance")->check(CLI::Range(1, 1000000));
  sub->add_option("--trunc", o->trunc, "Fock truncation N (0 picks the smallest N with tail below --tol)");
  sub->add_option("--tol", o->tol, "tail tolerance")->check(CLI::PositiveNumber);

  reg["nopa-perm"] = [o](const Context& ctx) {
    struct Job {
      std::string perm;
      double lambda;
      double r;
    };
    std::vector<Job> jobs;
    for (const auto& [l, r] : o->sweep.points())
      for (const auto& name : o->perms) jobs.push_back({name, l, r});

    const auto rows = parallel_map(jobs, ctx.threads, [&](const Job& j) {
      PermIsometry v = PermIsometry::identity();
      std::optional<double> closed;
      std::optional<std::uint64_t> ell;
      if (j.perm == "identity") {
        closed = 0.0;
      } else if (j.perm == "shift") {
        v = PermIsometry::shift(o->ell);
        closed = shift_defect_closed_form(j.lambda, o->ell);
      } else if (j.perm == "even") {
        v = PermIsometry::even();
        closed = even_defect_closed_form(j.lambda);
      } else if (j.perm == "odd") {
        v = PermIsometry::odd();
        closed = odd_defect_closed_form(j.lambda);
      } else {
        v = PermIsometry::local_swaps();
        closed = swap_defect_closed_form(j.lambda);
      }
      ell = v.ell();
      const std::size_t n = o->trunc ? o->trunc : auto_trunc(j.lambda, o->tol);
      const NopaParams p = NopaParams::from_lambda(j.lambda, n);
      const double defect = perm_defect(p, v, o->tol);
      std::optional<double> bound;
      Cell within;
      if (ell && j.lambda > 0.0) {
        bound = perm_defect_bound(j.lambda, *ell);
        within = defect <= *bound + 1e-12;
      }
      return std::vector<Cell>{j.perm, ell ? Cell(static_cast<std::int64_t>(*ell)) : Cell{}, j.lambda, j.r,
                               integer(n), defect, maybe(closed), std::abs(defect - *closed), maybe(bound), within};
    });
    CommandResult res;
    res.table.columns = {"perm", "ell", "lambda", "r", "trunc", "defect", "closed_form", "closed_form_error",
                         "bound", "within_bound"};
    for (const auto& r : rows) res.table.add(r);
    return res;
  };
}

void add_epr_covariance(CLI::App& app, Registry& reg) {
  struct Opts {
    SqueezeSweep sweep{{}, {0.5, 1.0, 2.0, 3.0}, {}};
    std::size_t trunc = 512;
    double fock_tol = 1e-8;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("epr-covariance", "Quadrature variances approaching the EPR state");
  add_squeeze_options(*sub, o->sweep);
  sub->add_option("--trunc", o->trunc, "Fock truncation for the cross-check")->check(CLI::Range(2, 1 << 20));
  sub->add_option("--fock-tol", o->fock_tol, "largest tail weight the Fock cross-check accepts")
      ->check(CLI::PositiveNumber);

  reg["epr-covariance"] = [o](const Context& ctx) {
    const auto rows = parallel_map(o->sweep.points(), ctx.threads, [&](const std::pair<double, double>& lr) {
      const EprVariances ev = epr_covariance(lr.second);
      const NopaParams p = NopaParams::from_lambda(lr.first, o->trunc);
      std::vector<Cell> row{lr.second, lr.first, integer(o->trunc), p.tail_weight(),
                            ev.var_qdiff, ev.var_psum, ev.var_qsum, ev.var_pdiff};
      try {
        const SecondMoments m = fock_second_moments(p, o->fock_tol);
        const double err = std::max({std::abs(m.combos.var_qdiff - ev.var_qdiff),
                                     std::abs(m.combos.var_psum - ev.var_psum),
                                     std::abs(m.combos.var_qsum - ev.var_qsum),
                                     std::abs(m.combos.var_pdiff - ev.var_pdiff)});
        row.insert(row.end(), {m.combos.var_qdiff, m.combos.var_psum, err, std::string("ok")});
      } catch (const TruncationError&) {
        row.insert(row.end(), {Cell{}, Cell{}, Cell{}, std::string("refused")});
      }
      return row;
    });
    CommandResult res;
    res.table.columns = {"r", "lambda", "trunc", "tail_weight", "var_qdiff", "var_psum", "var_qsum",
                         "var_pdiff", "fock_var_qdiff", "fock_var_psum", "max_error", "status"};
    for (const auto& r : rows) res.table.add(r);
    return res;
  };
}

void add_char_fn(CLI::App& app, Registry& reg) {
  struct Opts {
    SqueezeSweep sweep{{}, {0.5, 1.0, 2.0, 3.0}, {}};
    double xi1 = 1.0;
    double xi2 = 1.0;
    double eta1 = 1.0;
    double eta2 = -1.0;
    double a = 0.0;
    std::size_t fock_trunc = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("char-fn", "Characteristic function of the squeezed state on and off the EPR set");
  add_squeeze_options(*sub, o->sweep);
  sub->add_option("--xi1", o->xi1, "momentum argument of mode 1");
  sub->add_option("--xi2", o->xi2, "momentum argument of mode 2");
  sub->add_option("--eta1", o->eta1, "position argument of mode 1");
  sub->add_option("--eta2", o->eta2, "position argument of mode 2");
  sub->add_option("--a", o->a, "position displacement of mode 2");
  sub->add_option("--fock-trunc", o->fock_trunc, "also evaluate on the truncated Fock state (0 = off)")
      ->check(CLI::Range(0, 4096));

  reg["char-fn"] = [o](const Context& ctx) {
    const double off2 = 0.5 * (o->xi1 - o->xi2) * (o->xi1 - o->xi2) + 0.5 * (o->eta1 + o->eta2) * (o->eta1 + o->eta2);
    const double off = std::sqrt(off2);
    const auto rows = parallel_map(o->sweep.points(), ctx.threads, [&](const std::pair<double, double>& lr) {
      const double r = lr.second;
      const Complex chi = characteristic_fn(r, o->xi1, o->xi2, o->eta1, o->eta2, o->a);
      const double bound = std::exp(-std::exp(2.0 * r) * off2 / 4.0);
      std::vector<Cell> row{r, lr.first, o->xi1, o->xi2, o->eta1, o->eta2, o->a, chi.real(), chi.imag(),
                            std::abs(chi), off <= 1e-12, off, bound, std::abs(chi) <= bound + 1e-15};
      if (o->fock_trunc) {
        if (o->a != 0.0) throw ArgumentError("--fock-trunc requires --a 0");
        const Complex f =
            characteristic_fn_fock(NopaParams::from_lambda(lr.first, o->fock_trunc), o->xi1, o->xi2, o->eta1, o->eta2);
        row.insert(row.end(), {f.real(), f.imag(), std::abs(f - chi)});
      } else {
        row.insert(row.end(), {Cell{}, Cell{}, Cell{}});
      }
      return row;
    });
    CommandResult res;
    res.table.columns = {"r", "lambda", "xi1", "xi2", "eta1", "eta2", "a", "re", "im", "abs", "on_s",
                         "off_s_norm", "bound", "bound_ok", "fock_re", "fock_im", "fock_error"};
    for (const auto& r : rows) res.table.add(r);
    return res;
  };
}

void add_grid_extract(CLI::App& app, Registry& reg) {
  struct Opts {
    SqueezeSweep sweep{{}, {1.0, 2.0, 3.0}, {}};
    int d = 2;
    std::size_t points = kDefaultGridPoints;
    double extent = kDefaultGridExtent;
    double a = 0.0;
    std::string export_dir;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("grid-extract", "Qudit Weyl extraction from the squeezed state on a position grid");
  add_squeeze_options(*sub, o->sweep);
  sub->add_option("--d", o->d, "qudit dimension")->check(CLI::Range(2, 16));
  sub->add_option("--points", o->points, "grid points L per mode (power of two)");
  sub->add_option("--extent", o->extent, "requested half-width X (adjusted to fit the Weyl step)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--a", o->a, "position displacement of mode 2");
  sub->add_option("--export", o->export_dir, "directory for binary grid states");

  reg["grid-extract"] = [o](const Context& ctx) {
    const WeylGrid wg = choose_weyl_grid(o->points, o->extent, o->d);
    const auto pts = o->sweep.points();
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    if (!o->export_dir.empty()) std::filesystem::create_directories(o->export_dir);

    const auto rows = parallel_map(idx, ctx.threads, [&](std::size_t i) {
      const auto [lambda, r] = pts[i];
      const GridFidelity gf = grid_extraction_fidelity(wg.spec, lambda, o->d, o->a);
      const GridOps ops = build_ops(wg.spec, o->d, o->a);
      const GridNopa gn = grid_nopa(wg.spec, lambda, o->a);
      const DoublesShadow sh = doubles_shadow(ops, gn.state);
      bool periodic = true;
      for (const auto* e : {&ops.u1, &ops.u2, &ops.v})
        for (int x : power_exponents(*e, o->d, o->d)) periodic = periodic && x == 0;
      if (!o->export_dir.empty())
        write_grid_state(std::filesystem::path(o->export_dir) / ("grid_" + std::to_string(i) + ".eprg"), gn.state);
      return std::vector<Cell>{r, lambda, static_cast<std::int64_t>(o->d), integer(wg.spec.points), wg.spec.extent,
                               integer(wg.steps), gf.exact_weyl, periodic, gf.fidelity, gf.imag,
                               gf.commutation_residual, gf.boundary_mass, gf.moment_error, sh.u_defect,
                               sh.v_defect};
    });
    CommandResult res;
    res.table.columns = {"r", "lambda", "d", "points", "extent", "steps", "exact_weyl", "weyl_periodic",
                         "fidelity", "fidelity_imag", "commutation_residual", "boundary_mass", "moment_error",
                         "u_defect", "v_defect"};
    for (const auto& r : rows) res.table.add(r);
    res.metadata.emplace_back("requested_extent", format_double(wg.requested_extent));
    res.metadata.emplace_back("extent_adjusted", wg.adjusted ? "true" : "false");
    return res;
  };
}

}  // namespace infent::cli

// Acceptance checks. Each criterion prints one line:
//   criterion <n> <PASS|FAIL> <seconds>s <detail>
// The process exits nonzero when any selected criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infent/bell.hpp"
#include "infent/bipartite.hpp"
#include "infent/chain.hpp"
#include "infent/grid.hpp"
#include "infent/modular.hpp"
#include "infent/nopa.hpp"
#include "infent/operator.hpp"
#include "infent/random.hpp"
#include "infent/weyl.hpp"

using namespace infent;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double sq_diff(const LinearOperator& a, const LinearOperator& b) { return max_abs_entry(a.matrix() - b.matrix()); }

// 1. Partial transpose of the maximally entangled projector.
Outcome criterion1() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t d = 2; d <= 16; ++d) {
    const LinearOperator pt = partial_transpose(max_entangled_projector(d), kBob);
    const double dd = static_cast<double>(d);
    worst = std::max(worst, std::abs(operator_norm(pt) - 1.0 / dd));
    worst = std::max(worst, sq_diff(pt, (1.0 / dd) * flip(d, d)));
  }
  o.check(worst <= 1e-12, "residual " + num(worst) + " > 1e-12");
  o.note("worst residual " + num(worst));
  return o;
}

// 2. Product-state fidelity ceiling and its tightness.
Outcome criterion2() {
  Outcome o;
  for (std::size_t d : {2, 3, 4}) {
    Rng rng(7 + d);
    double best = 0.0;
    for (int t = 0; t < 1000; ++t) best = std::max(best, ppt_fidelity_bound_check(random_product_pure(d, d, rng)).fidelity);
    const double bound = 1.0 / static_cast<double>(d);
    o.check(best <= bound + 1e-9, "d=" + std::to_string(d) + " max " + num(best) + " exceeds 1/d");
    o.check(bound - best <= 1e-3, "d=" + std::to_string(d) + " tightness gap " + num(bound - best) + " > 1e-3");
    o.note("d=" + std::to_string(d) + " max " + num(best));
  }
  return o;
}

double best_beta(const LinearOperator& rho, std::uint64_t seed) {
  RestartOptions opt;
  opt.seed = seed;
  return beta_optimize_restarts(rho, opt).best.beta;
}

// 3. Bell see-saw.
Outcome criterion3() {
  Outcome o;
  const double singlet = best_beta(singlet_density(), 1);
  o.check(std::abs(singlet - std::sqrt(2.0)) <= 1e-6, "singlet beta " + num(singlet));
  Rng rng(3);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) worst = std::max(worst, best_beta(random_product_pure(2, 2, rng), static_cast<std::uint64_t>(t)));
  o.check(worst <= 1.0 + 1e-6, "product beta " + num(worst));
  for (const PairIndex k : {PairIndex(0), PairIndex(10), PairIndex(1000000)}) {
    const double b = best_beta(restrict(ChainState{}, k), 1);
    o.check(std::abs(b - std::sqrt(2.0)) <= 1e-6, "chain pair " + k.str() + " beta " + num(b));
  }
  o.note("singlet " + num(singlet) + ", max product " + num(worst));
  return o;
}

// 4. Modular theory on random full-rank d = 4 states.
Outcome criterion4() {
  Outcome o;
  const std::size_t d = 4;
  double s_res = 0.0, spec_res = 0.0;
  int equivalence_failures = 0, double_failures = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(400 + static_cast<std::uint64_t>(i));
    // Every tenth state has a flat Schmidt spectrum.
    const BipartitePureState psi = i % 10 == 0 ? BipartitePureState::normalized(random_unitary(d, rng).matrix())
                                               : BipartitePureState::normalized(random_ginibre(d, d, rng));
    const ModularData md = modular_data(psi);

    for (int t = 0; t < 5; ++t) {
      const LinearOperator a(random_ginibre(d, d, rng));
      const Vector lhs = md.apply_s(embed_alice(a, d).apply(md.omega));
      const Vector rhs = embed_alice(a.adjoint(), d).apply(md.omega);
      s_res = std::max(s_res, (lhs - rhs).norm());
    }

    std::vector<double> p;
    for (double c : schmidt(psi).coefficients) p.push_back(c * c);
    std::vector<double> expected;
    for (double x : p)
      for (double y : p) expected.push_back(x / y);
    std::vector<double> got = spectrum(md.delta).real_eigenvalues();
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    for (std::size_t k = 0; k < got.size(); ++k) spec_res = std::max(spec_res, std::abs(got[k] - expected[k]));

    const bool flat = *std::max_element(p.begin(), p.end()) - *std::min_element(p.begin(), p.end()) <= 1e-9;
    const bool delta_one = max_abs_entry(md.delta.matrix() - Matrix::Identity(16, 16)) <= 1e-9;
    bool trace_prop = true;
    for (int t = 0; t < 10; ++t) {
      const Matrix x = random_ginibre(d, d, rng), y = random_ginibre(d, d, rng);
      const Complex xy = (md.rho_a.matrix() * x * y).trace(), yx = (md.rho_a.matrix() * y * x).trace();
      trace_prop = trace_prop && std::abs(xy - yx) <= 1e-9;
    }
    if (flat != delta_one || delta_one != trace_prop || flat != (i % 10 == 0)) ++equivalence_failures;

    // A generic operator and one from the centralizer of rho_A.
    const Spectrum sp = spectrum(md.rho_a);
    const Matrix diag = random_ginibre(d, 1, rng);
    const LinearOperator central(Matrix(sp.eigenvectors * diag.col(0).asDiagonal() * sp.eigenvectors.adjoint()));
    for (const LinearOperator& a : {LinearOperator(random_ginibre(d, d, rng)), central}) {
      const bool commutes = commutator(a, md.rho_a).matrix().norm() <= 1e-9;
      const bool doubled = double_defect(md.omega, a, mirror_to_bob(md, a)).max() <= 1e-8;
      if (commutes != doubled) ++double_failures;
    }
  }
  o.check(s_res <= 1e-9, "S residual " + num(s_res));
  o.check(spec_res <= 1e-9, "Delta spectrum residual " + num(spec_res));
  o.check(equivalence_failures == 0, std::to_string(equivalence_failures) + " equivalence mismatches");
  o.check(double_failures == 0, std::to_string(double_failures) + " double/centralizer mismatches");
  o.note("S " + num(s_res) + ", spectrum " + num(spec_res));
  return o;
}

// 5. Weyl identities.
Outcome criterion5() {
  Outcome o;
  double proj = 0.0, fid = 0.0;
  for (int d : {2, 3, 5}) {
    const std::size_t du = static_cast<std::size_t>(d);
    proj = std::max(proj, sq_diff(max_ent_projector_weyl(d), max_entangled_projector(du)));
    const ModularData md = modular_data(max_entangled(du));
    const auto u2 = find_double(md, clock(d));
    const auto v2 = find_double(md, shift(d).adjoint());
    if (!u2 || !v2) {
      o.check(false, "no perfect doubles at d=" + std::to_string(d));
      continue;
    }
    fid = std::max(fid, std::abs(weyl_fidelity(max_entangled_projector(du), clock(d), shift(d), *u2, *v2, d) - 1.0));
  }
  o.check(proj <= 1e-12, "projector residual " + num(proj));
  o.check(fid <= 1e-10, "perfect-doubles fidelity error " + num(fid));
  o.note("projector " + num(proj) + ", fidelity " + num(fid));
  return o;
}

// 6. NOPA qudit extraction.
Outcome criterion6() {
  Outcome o;
  for (std::size_t d : {2, 4}) {
    const Extraction ex = extract_qudit(NopaParams::from_lambda(0.9, 256), d);
    o.check(ex.residual <= 1e-10, "residual d=" + std::to_string(d) + " " + num(ex.residual));
  }
  double prev = 0.0;
  for (double l : {0.5, 0.9, 0.99}) {
    const Extraction ex = extract_qudit(NopaParams::from_lambda(l, 256), 2);
    const double closed = extraction_fidelity_closed_form(l, 2);
    o.check(std::abs(ex.fidelity - closed) <= 1e-10, "closed form mismatch at lambda " + num(l));
    o.check(ex.fidelity > prev, "fidelity not monotone at lambda " + num(l));
    prev = ex.fidelity;
  }
  o.check(prev >= 0.999997, "fidelity at lambda 0.99 is " + num(prev) + " < 0.999997");
  NopaParams p = NopaParams::from_lambda(0.9, 256);
  for (int round = 0; round < 2; ++round) {
    const Extraction ex = extract_qudit(p, 2);
    o.check(ex.residual <= 1e-10 && std::abs(ex.coarse_params.lambda - p.lambda * p.lambda) <= 1e-15,
            "iterated extraction round " + std::to_string(round + 1));
    p = ex.coarse_params;
  }
  o.note("fidelity(0.99, d=2) " + num(prev));
  return o;
}

std::size_t auto_trunc(double l) {
  return static_cast<std::size_t>(std::ceil(std::log(1e-12) / (2.0 * std::log(l)))) + 1;
}

// 7. Permutation doubles.
Outcome criterion7() {
  Outcome o;
  for (double l : {0.9, 0.99, 0.999}) {
    const NopaParams p = NopaParams::from_lambda(l, auto_trunc(l));
    const double shift_def = perm_defect(p, PermIsometry::shift(1));
    o.check(std::abs(shift_def - (1 - l) * (1 - l)) <= 1e-12, "shift defect at " + num(l) + " = " + num(shift_def));
    o.check(shift_def <= perm_defect_bound(l, 1), "shift bound at " + num(l));
    const double even = perm_defect(p, PermIsometry::even());
    o.check(std::abs(even - even_defect_closed_form(l)) <= 1e-10, "even defect at " + num(l) + " = " + num(even));
    if (l == 0.999) {
      o.check(std::abs(even - 1.0 / 6.0) <= 5e-3, "even defect " + num(even) + " not within 5e-3 of 1/6");
      o.note("even(0.999) " + num(even));
    }
  }
  return o;
}

// 8. EPR limit of the squeezed family.
Outcome criterion8() {
  Outcome o;
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    const EprVariances v = epr_covariance(r);
    o.check(std::abs(v.var_qdiff - std::exp(-2 * r)) <= 1e-15 && std::abs(v.var_psum - std::exp(-2 * r)) <= 1e-15,
            "closed forms at r=" + num(r));
    const NopaParams p = NopaParams::from_r(r, 512);
    try {
      const SecondMoments m = fock_second_moments(p);
      const double err = std::max(std::abs(m.combos.var_qdiff - v.var_qdiff), std::abs(m.combos.var_psum - v.var_psum));
      o.check(err <= 1e-6, "Fock moments at r=" + num(r) + " off by " + num(err));
    } catch (const TruncationError&) {
      const SecondMoments m = fock_second_moments(p, 1.0);
      o.check(false, "Fock moments at r=" + num(r) + " refused: tail " + num(p.tail_weight()) + ", truncated Var(Q1-Q2) " +
                         num(m.combos.var_qdiff) + " vs " + num(v.var_qdiff));
    }
  }
  // On S the value approaches 1, off S it is bounded by exp(-e^{2r}/4).
  const double s = 1.0 / std::sqrt(2.0);
  double prev_gap = 1.0;
  for (double r : {1.0, 2.0, 3.0, 5.0}) {
    const double gap = std::abs(1.0 - characteristic_fn(r, 1.0, 1.0, 1.0, -1.0));
    o.check(gap < prev_gap, "on-S value not approaching 1 at r=" + num(r));
    o.check(gap <= std::exp(-2 * r) * 4.0 / 2.0, "on-S bound at r=" + num(r));
    prev_gap = gap;
    const double bound = std::exp(-std::exp(2 * r) / 4.0);
    o.check(std::abs(characteristic_fn(r, s, -s, 0.0, 0.0)) <= bound * (1 + 1e-12), "off-S xi bound at r=" + num(r));
    o.check(std::abs(characteristic_fn(r, 0.0, 0.0, s, s)) <= bound * (1 + 1e-12), "off-S eta bound at r=" + num(r));
  }
  return o;
}

// 9. Grid extraction.
Outcome criterion9() {
  Outcome o;
  const WeylGrid wg = choose_weyl_grid(kDefaultGridPoints, kDefaultGridExtent, 2);
  const GridOps ops = build_ops(wg.spec, 2);
  for (const auto* table : {&ops.u1, &ops.u2, &ops.v})
    for (const Complex& z : exponent_values(power_exponents(*table, 2, 2), 2)) {
      if (z != Complex(1.0)) {
        o.check(false, "U^d or V^d differs from 1");
        break;
      }
    }
  const std::array<double, 3> frozen{0.6416075870004863, 0.8582499836771329, 0.9346752188476452};
  double prev = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double r = i + 1.0;
    const GridFidelity f = grid_extraction_fidelity(wg.spec, std::tanh(r), 2);
    o.check(f.commutation_residual <= 1e-3, "commutation residual " + num(f.commutation_residual) + " at r=" + num(r));
    o.check(f.fidelity >= prev, "fidelity not monotone at r=" + num(r));
    o.check(std::abs(f.fidelity - frozen[static_cast<std::size_t>(i)]) <= 1e-9, "regression value at r=" + num(r));
    prev = f.fidelity;
  }
  o.check(prev >= 0.9, "fidelity at r=3 is " + num(prev));
  o.note("X = " + num(wg.spec.extent / std::numbers::pi) + " pi, fidelity(r=3) " + num(prev));
  return o;
}

// 10. Entropy divergence.
Outcome criterion10() {
  Outcome o;
  double prev = -1.0;
  for (std::size_t n : {100, 1000, 10000}) {
    const double h = entropy(divergent_family(n));
    o.check(h > prev, "entropy not increasing at N=" + std::to_string(n));
    o.note("N=" + std::to_string(n) + " " + num(h));
    prev = h;
  }
  return o;
}

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  r.status = pclose(pipe);
  return r;
}

std::string strip_timestamp(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("# timestamp:", 0) != 0) out += line + "\n";
  return out;
}

// 11. CLI determinism.
Outcome criterion11(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.check(false, "no CLI path given (--cli)");
    return o;
  }
  const std::vector<std::string> commands = {
      "schmidt --state random --d 4 --seed 3",
      "schmidt --state nopa --lambda 0.5",
      "entropy-divergence --n 100,1000,10000",
      "nogo-bound --d 2,3,4 --samples 1000 --seed 7",
      "bell-seesaw --state singlet --restarts 8 --seed 1",
      "bell-seesaw --state random-product --restarts 4 --seed 5 --threads 4",
      "chain-expect --preset test-operator --k 0,10,1000000",
      "modular --d 4 --samples 20 --seed 2",
      "doubles --state weights --weights 0.8,0.2 --operator sz",
      "weyl-projector --d 2,3,5",
      "nopa-extract --lambda 0.5,0.9,0.99 --iterations 2",
      "nopa-perm --lambda 0.9,0.99,0.999",
      "epr-covariance --r 0.5,1,2,3",
      "char-fn --r 0.5,1,2,3",
      "grid-extract --r 1,2,3 --threads 3",
  };
  for (const std::string& c : commands) {
    const RunResult a = run(cli + " --format json " + c), b = run(cli + " --format json " + c);
    if (a.status != 0 || b.status != 0) {
      o.check(false, "'" + c + "' exited with status " + std::to_string(a.status) + "/" + std::to_string(b.status));
      continue;
    }
    const auto ja = nlohmann::json::parse(a.out, nullptr, false), jb = nlohmann::json::parse(b.out, nullptr, false);
    o.check(!ja.is_discarded() && !jb.is_discarded() && ja.at("data").dump() == jb.at("data").dump(),
            "'" + c + "' json data differs");
    const RunResult ca = run(cli + " --format csv " + c), cb = run(cli + " --format csv " + c);
    o.check(ca.status == 0 && strip_timestamp(ca.out) == strip_timestamp(cb.out), "'" + c + "' csv differs");
  }
  o.note(std::to_string(commands.size()) + " commands");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("infent acceptance checks");
  std::vector<int> selected;
  std::string cli;
  app.add_option("--criterion", selected, "criteria to run (default: all)")->check(CLI::Range(1, 11));
  app.add_option("--cli", cli, "path to the infent executable (criterion 11)");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (int i = 1; i <= 11; ++i) selected.push_back(i);

  struct Criterion {
    std::function<Outcome()> fn;
    double limit_s;
  };
  const std::vector<Criterion> table = {
      {criterion1, 1.0},  {criterion2, 5.0},  {criterion3, 10.0}, {criterion4, 30.0},
      {criterion5, 5.0},  {criterion6, 10.0}, {criterion7, 5.0},  {criterion8, 10.0},
      {criterion9, 60.0}, {criterion10, 5.0}, {[&] { return criterion11(cli); }, 0.0},
  };

  bool all = true;
  for (int id : selected) {
    const Criterion& c = table[static_cast<std::size_t>(id - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0) o.check(secs < c.limit_s, "runtime " + num(secs) + " s over " + num(c.limit_s) + " s");
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("criterion %d %s %.3fs %s\n", id, o.pass ? "PASS" : "FAIL", secs, detail.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}

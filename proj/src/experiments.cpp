#include "mmslab/experiments.hpp"
#include "mmslab/constructions.hpp"
#include "mmslab/nets.hpp"
#include "mmslab/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace mmslab {

namespace {

bool close_rel(double a, double b, double tol)
{
  return std::abs(a - b) <= tol * std::max({ std::abs(a), std::abs(b), 1e-300 });
}

std::string describe(double v)
{
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

} // namespace

std::vector<ScanRow> scan(const MetricSpace& space, const DiscreteMeasure& measure,
                          std::span<const double> radii, std::span<const BallKind> kinds,
                          std::span<const double> p_list, const ScanOptions& options)
{
  if (radii.empty())
    throw EmptyRadii("scan needs at least one radius");
  const bool small_space = space.size() <= options.max_points_for_constants;
  const bool small_support =
    static_cast<Index>(measure.support().size()) <= options.max_points_for_constants;

  std::vector<ScanRow> rows;
  for (BallKind kind : kinds) {
    std::optional<NetStats> M;
    if (small_space)
      M = net_constant_M(space, kind, {}, options.exhaustive_cap);
    std::optional<ComparabilityReport> C;
    if (small_support)
      C = local_comparability_constant(space, measure, kind);

    for (double r : radii) {
      const AveragingOperator op(space, measure, r, kind);
      const NormResult nr = l1_operator_norm_with_argmax(op);
      ScanRow row;
      row.radius = r;
      row.kind = kind;
      row.max_a_s = nr.norm;
      row.argmax = nr.argmax;
      row.l1_norm = nr.norm;
      if (static_cast<Index>(measure.support().size()) <= options.oracle_cap) {
        row.l1_norm = l1_norm_bruteforce_oracle(op);
        if (!close_rel(row.l1_norm, row.max_a_s, 1e-12))
          throw InvariantViolation("indicator oracle disagrees with sup of a_s at r = " +
                                   describe(r));
      }
      if (M) {
        row.M = M->cardinality;
        row.M_exact = M->exact;
        if (M->exact && row.l1_norm > static_cast<double>(M->cardinality) + 1e-12)
          throw InvariantViolation("operator norm exceeds the exact net constant at r = " +
                                   describe(r));
        if (M->exact)
          for (std::size_t i = 0; i < p_list.size(); ++i) {
            auto rep = lp_bound_check(op, p_list[i], M->cardinality, options.trials,
                                      options.seed + i);
            if (rep.violations != 0 || rep.linf_violations != 0)
              throw InvariantViolation("interpolation bound violated at r = " + describe(r));
            row.p_checks.push_back(rep);
          }
      }
      if (C) {
        row.C = C->C;
        if (row.l1_norm > C->C + 1e-12)
          throw InvariantViolation("operator norm exceeds the comparability constant at r = " +
                                   describe(r));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ConvergenceResult convergence_experiment(const MetricSpace& space, const DiscreteMeasure& measure,
                                         const Function& f, std::span<const double> p_list,
                                         std::span<const double> radii, BallKind kind,
                                         std::optional<Index> exact_M)
{
  if (radii.empty())
    throw EmptyRadii("convergence experiment needs at least one radius");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw NonDecreasingRadii("radii must be strictly decreasing");
  check_function(measure, f);

  ConvergenceResult res;
  res.min_gap = space.min_positive_distance(measure.support());
  for (double r : radii) {
    const AveragingOperator op(space, measure, r, kind);
    const Function diff = op.apply(f) - restrict_to_support(measure, f);
    const double norm = l1_operator_norm(op);
    res.sup_norm = std::max(res.sup_norm, norm);
    for (double p : p_list) {
      ConvergenceRow row{ r, p, lp_norm(measure, diff, p), norm };
      if (r < res.min_gap && row.error != 0.0)
        throw InvariantViolation("nonzero error below the minimum support gap at r = " +
                                 describe(r));
      res.rows.push_back(row);
    }
  }
  if (exact_M && res.sup_norm > static_cast<double>(*exact_M) + 1e-12)
    throw InvariantViolation("sup of ||A_r||_1 exceeds the exact net constant");
  return res;
}

Function evaluate_function_spec(const MetricSpace& space, const std::string& spec)
{
  const Index n = space.size();
  auto need_coords = [&] {
    if (!space.has_coordinates())
      throw FormatError("function '" + spec + "' needs a coordinate space");
  };
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty())
      throw FormatError("bad number '" + s + "' in function spec");
    return v;
  };

  if (spec == "gaussian_bump") {
    need_coords();
    Function f(n);
    for (Index i = 0; i < n; ++i)
      f[i] = std::exp(-space.coordinates().row(i).squaredNorm());
    return f;
  }
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "constant" && !rest.empty())
    return Function::Constant(n, number(rest));
  if (head == "point" && !rest.empty()) {
    const auto id = static_cast<Index>(number(rest));
    if (id < 0 || id >= n)
      throw FormatError("point id out of range in function spec");
    Function f = Function::Zero(n);
    f[id] = 1.0;
    return f;
  }
  if (head == "indicator") {
    need_coords();
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos)
      throw FormatError("indicator spec is indicator:<coordinate>:<threshold>");
    const auto j = static_cast<Index>(number(rest.substr(0, c2)));
    const double t = number(rest.substr(c2 + 1));
    if (j < 0 || j >= space.dimension())
      throw FormatError("indicator coordinate out of range");
    Function f(n);
    for (Index i = 0; i < n; ++i)
      f[i] = space.coordinates()(i, j) <= t ? 1.0 : 0.0;
    return f;
  }
  throw FormatError("unknown function spec '" + spec + "'");
}

std::vector<double> dyadic_radii(int first, int last)
{
  std::vector<double> r;
  for (int k = first; k <= last; ++k)
    r.push_back(std::ldexp(1.0, -k));
  return r;
}

namespace {

// Collects pass/fail for one suite, keeping the first failure.
class Checker
{
public:
  explicit Checker(std::string name)
    : start_(std::chrono::steady_clock::now())
  {
    result_.name = std::move(name);
  }

  void check(bool ok, const std::string& what)
  {
    ++result_.checks;
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.witness = what;
    }
  }

  SuiteResult finish(std::string detail)
  {
    result_.detail = std::move(detail);
    result_.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return result_;
  }

private:
  SuiteResult result_;
  std::chrono::steady_clock::time_point start_;
};

Index scaled(Index count, double scale)
{
  return std::max<Index>(1, static_cast<Index>(std::llround(static_cast<double>(count) * scale)));
}

std::vector<double> pick_radii(const std::vector<double>& grid, std::size_t count, CounterRng& rng)
{
  if (grid.size() <= count)
    return grid;
  std::vector<double> out;
  std::vector<char> used(grid.size(), 0);
  while (out.size() < count) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(grid.size()) - 1));
    if (!used[k]) {
      used[k] = 1;
      out.push_back(grid[k]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool reproduces_ones(const AveragingOperator& op)
{
  const auto& mu = op.measure();
  const Function g = op.apply(Function::Ones(op.size()));
  for (Index x : mu.support())
    if (g[x] != 1.0)
      return false;
  return true;
}

constexpr BallKind kKinds[] = { BallKind::open, BallKind::closed };

std::string instance_tag(std::uint64_t seed, BallKind kind, double r)
{
  return "instance seed " + std::to_string(seed) + ", " + to_string(kind) + " r=" + describe(r);
}

SuiteResult suite_duality(const VerifyOptions& opt)
{
  Checker c("duality");
  const Index count = scaled(200, opt.scale);
  for (Index i = 0; i < count; ++i) {
    const std::uint64_t seed = opt.seed * 100003 + static_cast<std::uint64_t>(i);
    const RandomInstance inst = random_instance(seed);
    CounterRng rng(seed ^ 0xD1B54A32D192ED03ULL);
    const auto grid = inst.space.pairwise_distances(inst.measure.support());
    for (BallKind kind : kKinds)
      for (double r : pick_radii(grid, 5, rng)) {
        const AveragingOperator op(inst.space, inst.measure, r, kind);
        const ConjugateFunction a = conjugate_function(op);
        const double norm = l1_operator_norm(op);
        const double oracle = l1_norm_bruteforce_oracle(op);
        c.check(close_rel(norm, oracle, 1e-12), "norm != oracle, " + instance_tag(seed, kind, r));
        c.check(reproduces_ones(op), "A 1 != 1, " + instance_tag(seed, kind, r));
        Function f = Function::Zero(op.size());
        for (int t = 0; t < 20; ++t) {
          double rhs = 0.0;
          for (Index x : inst.measure.support()) {
            f[x] = rng.uniform();
            rhs += f[x] * a.values[x] * inst.measure.weight(x);
          }
          const double lhs = lp_norm(inst.measure, op.apply(f), 1.0);
          c.check(close_rel(lhs, rhs, 1e-12), "Fubini identity, " + instance_tag(seed, kind, r));
        }
      }
  }
  return c.finish(std::to_string(count) + " random instances, both ball kinds");
}

SuiteResult suite_net_bound(const VerifyOptions& opt)
{
  Checker c("net_bound");
  const Index count = scaled(200, opt.scale);
  RandomInstanceOptions ro;
  ro.max_points = 18;
  for (Index i = 0; i < count; ++i) {
    const std::uint64_t seed = opt.seed * 200003 + static_cast<std::uint64_t>(i);
    const RandomInstance inst = random_instance(seed, ro);
    CounterRng rng(seed ^ 0x9E3779B97F4A7C15ULL);
    const auto grid = inst.space.pairwise_distances(inst.measure.support());
    for (BallKind kind : kKinds) {
      const NetStats M = net_constant_M(inst.space, kind);
      c.check(M.exact, "M not exact, seed " + std::to_string(seed));
      const DoublingEstimate D = doubling_upper_bound(inst.space, kind);
      c.check(M.cardinality <= D.upper_bound, "M > D, seed " + std::to_string(seed));
      for (double r : pick_radii(grid, 5, rng)) {
        const NetBoundReport rep = verify_net_bound(inst.space, inst.measure, r, kind, M);
        c.check(rep.pass, (rep.failures.empty() ? std::string("net bound")
                                                : rep.failures.front().reason) +
                            ", " + instance_tag(seed, kind, r));
        c.check(reproduces_ones(AveragingOperator(inst.space, inst.measure, r, kind)),
                "A 1 != 1, " + instance_tag(seed, kind, r));
      }
    }
  }
  return c.finish(std::to_string(count) + " random instances with N <= 18");
}

SuiteResult suite_sharpness(const VerifyOptions&)
{
  Checker c("sharpness");
  std::ostringstream detail;
  for (int d = 1; d <= 3; ++d) {
    const SharpnessInstance inst = gen_sharpness(d, 64);
    const SharpnessReport rep = sharpness_report(inst);
    const double corners = std::ldexp(1.0, d);
    for (const auto& row : rep.rows) {
      c.check(row.strict, "not strict at d=" + std::to_string(d) + " n=" + std::to_string(row.n));
      c.check(row.margin >= row.required_margin - 1e-12,
              "margin too small at d=" + std::to_string(d) + " n=" + std::to_string(row.n));
    }
    c.check(rep.operator_norm > corners * 64.0 / 65.0 && rep.operator_norm <= corners,
            "operator norm outside (2^d 64/65, 2^d] at d=" + std::to_string(d));
    c.check(reproduces_ones(AveragingOperator(inst.space, inst.measure, 1.0, BallKind::closed)),
            "A 1 != 1 on sharpness d=" + std::to_string(d));
    detail << "d=" << d << " norm=" << describe(rep.operator_norm) << "; ";
  }
  return c.finish(detail.str());
}

SuiteResult suite_comparability(const VerifyOptions& opt)
{
  Checker c("comparability");
  const Index count = scaled(50, opt.scale);
  for (Index i = 0; i < count; ++i) {
    const std::uint64_t seed = opt.seed * 300007 + static_cast<std::uint64_t>(i);
    const RandomInstance inst = random_instance(seed);
    for (BallKind kind : kKinds) {
      const auto rep = local_comparability_constant(inst.space, inst.measure, kind);
      c.check(rep.implication_holds, "max ||A_r||_1 > C, seed " + std::to_string(seed));
    }
  }
  std::ostringstream detail;
  double previous = 0.0;
  for (Index n : { 4, 16, 64 }) {
    const SharpnessInstance inst = gen_sharpness(2, n);
    const auto rep = local_comparability_constant(inst.space, inst.measure, BallKind::closed);
    const double norm = l1_operator_norm(AveragingOperator(inst.space, inst.measure, 1.0,
                                                           BallKind::closed));
    c.check(rep.C > previous, "C not increasing at N=" + std::to_string(n));
    c.check(norm < 4.0, "sharpness norm >= 4 at N=" + std::to_string(n));
    previous = rep.C;
    detail << "N=" << n << " C=" << describe(rep.C) << " norm=" << describe(norm) << "; ";
  }
  return c.finish(detail.str());
}

SuiteResult suite_maximal(const VerifyOptions& opt)
{
  Checker c("maximal");
  const Index count = scaled(100, opt.scale);
  RandomInstanceOptions ro;
  ro.positive_weights = false;
  for (Index i = 0; i < count; ++i) {
    const std::uint64_t seed = opt.seed * 400009 + static_cast<std::uint64_t>(i);
    const RandomInstance inst = random_instance(seed, ro);
    CounterRng rng(seed);
    Function f(inst.space.size());
    for (Index x = 0; x < f.size(); ++x)
      f[x] = rng.normal();
    const auto radii = default_radii_grid(inst.space, inst.measure);
    for (BallKind kind : kKinds) {
      const Function mf = maximal_function(inst.space, inst.measure, f, radii, kind);
      for (Index x : inst.measure.support())
        c.check(mf[x] >= std::abs(f[x]), "Mf < |f|, seed " + std::to_string(seed));
    }
  }
  return c.finish(std::to_string(count) + " random (instance, f) pairs");
}

SuiteResult suite_convergence(const VerifyOptions&)
{
  Checker c("convergence");
  const SampledInstance inst = sample_instance(Generator::gaussian, 2, 5000, 42);
  const Function f = evaluate_function_spec(inst.space, "gaussian_bump");
  const std::vector<double> ps{ 1.0, 2.0 };
  const auto radii = dyadic_radii(0, 20);
  std::ostringstream detail;
  try {
    const auto res = convergence_experiment(inst.space, inst.measure, f, ps, radii);
    for (double p : ps) {
      std::vector<ConvergenceRow> nonzero;
      bool tail_zero = true;
      for (const auto& row : res.rows) {
        if (row.p != p)
          continue;
        if (row.radius < res.min_gap)
          tail_zero = tail_zero && row.error == 0.0;
        else if (row.error != 0.0)
          nonzero.push_back(row);
      }
      c.check(tail_zero, "nonzero tail error");
      c.check(radii.back() < res.min_gap, "radius grid does not reach below the minimum gap");
      c.check(nonzero.size() >= 3, "fewer than three nonzero rows");
      if (nonzero.size() >= 3) {
        const auto k = nonzero.size();
        c.check(nonzero[k - 3].error > nonzero[k - 2].error &&
                  nonzero[k - 2].error > nonzero[k - 1].error,
                "final three nonzero errors not strictly decreasing (p=" + describe(p) + ")");
      }
    }
    c.check(std::isfinite(res.sup_norm), "sup norm not finite");
    detail << "min gap " << describe(res.min_gap) << ", sup ||A_r||_1 = "
           << describe(res.sup_norm);
  } catch (const InvariantViolation& e) {
    c.check(false, e.what());
  }
  return c.finish(detail.str());
}

SuiteResult suite_interpolation(const VerifyOptions& opt)
{
  Checker c("interpolation");
  const Index count = scaled(20, opt.scale);
  const Index trials = scaled(10000, opt.scale);
  RandomInstanceOptions ro;
  ro.max_points = 18;
  for (Index i = 0; i < count; ++i) {
    const std::uint64_t seed = opt.seed * 500009 + static_cast<std::uint64_t>(i);
    const RandomInstance inst = random_instance(seed, ro);
    CounterRng rng(seed);
    const auto grid = inst.space.pairwise_distances(inst.measure.support());
    const double r = grid.empty() ? 1.0 : pick_radii(grid, 1, rng).front();
    const NetStats M = net_constant_M(inst.space, BallKind::closed);
    c.check(M.exact, "M not exact, seed " + std::to_string(seed));
    const AveragingOperator op(inst.space, inst.measure, r, BallKind::closed);
    for (double p : { 1.5, 2.0, 4.0 }) {
      const LpBoundReport rep = lp_bound_check(op, p, M.cardinality, trials, seed);
      c.check(rep.violations == 0 && rep.linf_violations == 0,
              "interpolation bound violated, " + instance_tag(seed, BallKind::closed, r));
      c.check(rep.ones_ratio == 1.0, "||A 1||_p != ||1||_p, seed " + std::to_string(seed));
    }
  }
  return c.finish(std::to_string(count) + " instances x " + std::to_string(trials) +
                  " functions x p in {1.5, 2, 4}");
}

} // namespace

VerifyReport verify_suite(const std::set<std::string>& selection, const VerifyOptions& options)
{
  if (selection.empty())
    throw EmptySelection("verify needs at least one suite");
  for (const auto& name : selection)
    if (std::find(kSuiteNames.begin(), kSuiteNames.end(), name) == kSuiteNames.end())
      throw FormatError("unknown suite '" + name + "'");

  VerifyReport report;
  for (const auto& name : kSuiteNames) {
    if (!selection.count(name))
      continue;
    SuiteResult r;
    if (name == "duality")
      r = suite_duality(options);
    else if (name == "net_bound")
      r = suite_net_bound(options);
    else if (name == "sharpness")
      r = suite_sharpness(options);
    else if (name == "comparability")
      r = suite_comparability(options);
    else if (name == "maximal")
      r = suite_maximal(options);
    else if (name == "convergence")
      r = suite_convergence(options);
    else
      r = suite_interpolation(options);
    report.passed = report.passed && r.passed;
    report.suites.push_back(std::move(r));
  }
  return report;
}

} // namespace mmslab

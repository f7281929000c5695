// mmslab: averaging operators on finite metric measure spaces.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or format error.

#include "mmslab/averaging.hpp"
#include "mmslab/constructions.hpp"
#include "mmslab/experiments.hpp"
#include "mmslab/io.hpp"
#include "mmslab/nets.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mmslab;
using io::json;

namespace {

void emit(const std::string& out, const std::string& text)
{
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f)
    throw FormatError("cannot write '" + out + "'");
  f << text;
}

void emit_json(const std::string& out, const json& j) { emit(out, j.dump(2) + "\n"); }

// Writes space and measure to the two paths of -o, or both to stdout.
void emit_pair(const std::vector<std::string>& outputs, const MetricSpace& space,
               const DiscreteMeasure& measure)
{
  if (outputs.empty()) {
    emit_json("", { { "space", io::to_json(space) }, { "measure", io::to_json(measure) } });
    return;
  }
  if (outputs.size() != 2)
    throw FormatError("-o expects space.json,measure.json");
  io::write_json_file(outputs[0], io::to_json(space));
  io::write_json_file(outputs[1], io::to_json(measure));
}

double parse_p(const std::string& s)
{
  if (s == "inf")
    return kInfinity;
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || used == 0)
    throw FormatError("bad --p value '" + s + "'");
  return p;
}

std::vector<double> pow2_radii(const std::string& range)
{
  const auto colon = range.find(':');
  if (colon == std::string::npos)
    throw FormatError("--radii-pow2 expects first:last");
  try {
    return dyadic_radii(std::stoi(range.substr(0, colon)), std::stoi(range.substr(colon + 1)));
  } catch (const std::logic_error&) {
    throw FormatError("--radii-pow2 expects integers first:last");
  }
}

struct SpaceArgs
{
  std::string space;
  std::string measure;
};

void add_space_args(CLI::App* cmd, SpaceArgs& a, bool with_measure)
{
  cmd->add_option("--space", a.space, "space JSON file")->required();
  if (with_measure)
    cmd->add_option("--measure", a.measure, "measure JSON file")->required();
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Averaging operators, net constants and L1 norms on finite metric measure spaces" };
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);

  int sharp_dim = 1;
  Index sharp_clusters = 1;
  std::vector<std::string> sharp_out;
  auto* gen_sharp = gen->add_subcommand("sharpness", "extremal l_inf cluster family");
  gen_sharp->add_option("--dim", sharp_dim, "dimension d")->required();
  gen_sharp->add_option("--clusters", sharp_clusters, "cluster count N")->required();
  gen_sharp->add_option("-o,--out", sharp_out, "space.json,measure.json")->delimiter(',');

  std::string sample_kind = "gaussian";
  std::string sample_norm = "l2";
  int sample_dim = 1;
  Index sample_size = 1000;
  std::uint64_t sample_seed = 42;
  std::vector<std::string> sample_out;
  auto* gen_sample = gen->add_subcommand("sample", "empirical measure of a random sample");
  gen_sample->add_option("--kind", sample_kind, "gaussian|exponential");
  gen_sample->add_option("--dim", sample_dim, "dimension (gaussian)");
  gen_sample->add_option("--size", sample_size, "sample size")->required();
  gen_sample->add_option("--seed", sample_seed, "seed");
  gen_sample->add_option("--norm", sample_norm, "l1|l2|linf");
  gen_sample->add_option("-o,--out", sample_out, "space.json,measure.json")->delimiter(',');

  int cube_dim = 2;
  double cube_half = 1.0;
  std::string cube_out;
  auto* gen_cube = gen->add_subcommand("cube", "cube vertices plus origin under l_inf");
  gen_cube->add_option("--dim", cube_dim, "dimension")->required();
  gen_cube->add_option("--half-width", cube_half, "half side length");
  gen_cube->add_option("-o,--out", cube_out, "space.json");

  // nets
  SpaceArgs nets_args;
  std::string nets_ball = "closed";
  std::string nets_report;
  std::vector<double> nets_radii;
  Index nets_cap = kDefaultNetCap;
  Index cover_cap = kDefaultCoverCap;
  auto* nets = app.add_subcommand("nets", "net constant M and doubling bounds");
  add_space_args(nets, nets_args, false);
  nets->add_option("--ball", nets_ball, "open|closed");
  nets->add_option("--radii", nets_radii, "radii (default: pairwise distances)")->delimiter(',');
  nets->add_option("--cap", nets_cap, "exhaustive net search cap");
  nets->add_option("--cover-cap", cover_cap, "exhaustive cover search cap");
  nets->add_option("--report", nets_report, "output JSON");

  // norm
  SpaceArgs norm_args;
  double norm_radius = 1.0;
  std::string norm_ball = "closed";
  std::string norm_p = "1";
  std::string norm_csv;
  Index norm_cap = kDefaultNetCap;
  auto* norm = app.add_subcommand("norm", "operator norm of one averaging operator");
  add_space_args(norm, norm_args, true);
  norm->add_option("--radius", norm_radius, "radius s")->required();
  norm->add_option("--ball", norm_ball, "open|closed");
  norm->add_option("--p", norm_p, "1|inf");
  norm->add_option("--cap", norm_cap, "exhaustive net search cap");
  norm->add_option("--csv", norm_csv, "write point_id,weight,a_s CSV");

  // scan
  SpaceArgs scan_args;
  std::vector<double> scan_radii;
  std::string scan_ball = "closed";
  std::vector<double> scan_p;
  std::string scan_format = "csv";
  std::string scan_out;
  ScanOptions scan_opts;
  auto* scan_cmd = app.add_subcommand("scan", "sweep radii");
  add_space_args(scan_cmd, scan_args, true);
  scan_cmd->add_option("--radii", scan_radii, "r1,r2,... (default: distance grid)")->delimiter(',');
  scan_cmd->add_option("--ball", scan_ball, "open|closed");
  scan_cmd->add_option("--p", scan_p, "p values for the interpolation check")->delimiter(',');
  scan_cmd->add_option("--trials", scan_opts.trials, "random functions per p");
  scan_cmd->add_option("--seed", scan_opts.seed, "seed");
  scan_cmd->add_option("--format", scan_format, "csv|json");
  scan_cmd->add_option("--out", scan_out, "output file");

  // converge
  SpaceArgs conv_args;
  std::string conv_f = "gaussian_bump";
  std::string conv_function;
  std::vector<double> conv_radii;
  std::string conv_pow2;
  std::vector<std::string> conv_p{ "1" };
  std::string conv_ball = "closed";
  std::string conv_format = "csv";
  std::string conv_out;
  auto* conv = app.add_subcommand("converge", "||A_r f - f||_p as r decreases");
  add_space_args(conv, conv_args, true);
  conv->add_option("--f", conv_f, "gaussian_bump | indicator:j:t | point:id | constant:c");
  conv->add_option("--function", conv_function, "function JSON file (overrides --f)");
  conv->add_option("--radii", conv_radii, "strictly decreasing radii")->delimiter(',');
  conv->add_option("--radii-pow2", conv_pow2, "first:last for radii 2^-first..2^-last");
  conv->add_option("--p", conv_p, "p values")->delimiter(',');
  conv->add_option("--ball", conv_ball, "open|closed");
  conv->add_option("--format", conv_format, "csv|json");
  conv->add_option("--out", conv_out, "output file");

  // verify
  std::vector<std::string> verify_sel{ "all" };
  VerifyOptions verify_opts;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "built-in verification suites");
  verify->add_option("--suite", verify_sel, "comma list or all")->delimiter(',');
  verify->add_option("--seed", verify_opts.seed, "seed");
  verify->add_option("--scale", verify_opts.scale, "instance count multiplier");
  verify->add_option("--out", verify_out, "report JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_sharp->parsed()) {
      const auto inst = gen_sharpness(sharp_dim, sharp_clusters);
      emit_pair(sharp_out, inst.space, inst.measure);
    } else if (gen_sample->parsed()) {
      const auto inst = sample_instance(parse_generator(sample_kind), sample_dim, sample_size,
                                        sample_seed, parse_norm(sample_norm));
      emit_pair(sample_out, inst.space, inst.measure);
    } else if (gen_cube->parsed()) {
      const auto space = gen_cube_vertices(cube_dim, cube_half);
      if (cube_out.empty())
        emit_json("", io::to_json(space));
      else
        io::write_json_file(cube_out, io::to_json(space));
    } else if (nets->parsed()) {
      const auto space = io::space_from_json(io::read_json_file(nets_args.space));
      const BallKind kind = parse_ball_kind(nets_ball);
      const NetStats M = net_constant_M(space, kind, nets_radii, nets_cap);
      const DoublingEstimate D = doubling_upper_bound(space, kind, cover_cap, nets_cap);
      emit_json(nets_report, { { "ball", to_string(kind) },
                               { "net_constant", io::to_json(M) },
                               { "doubling", io::to_json(D) } });
    } else if (norm->parsed()) {
      const auto space = io::space_from_json(io::read_json_file(norm_args.space));
      const auto measure = io::measure_from_json(io::read_json_file(norm_args.measure));
      const BallKind kind = parse_ball_kind(norm_ball);
      const double p = parse_p(norm_p);
      if (p != 1.0 && p != kInfinity)
        throw FormatError("norm supports --p 1 or --p inf");
      const AveragingOperator op(space, measure, norm_radius, kind);
      const NetStats M = net_constant_M(space, kind, {}, norm_cap);
      json out{ { "radius", norm_radius }, { "ball", to_string(kind) }, { "p", norm_p },
                { "M", M.cardinality },    { "exactM", M.exact } };
      if (p == 1.0) {
        const NormResult nr = l1_operator_norm_with_argmax(op);
        out["norm"] = nr.norm;
        out["argmax_point"] = nr.argmax;
        out["certified"] = M.exact && nr.norm <= static_cast<double>(M.cardinality) + 1e-12;
        if (!norm_csv.empty()) {
          std::ofstream csv(norm_csv);
          if (!csv)
            throw FormatError("cannot write '" + norm_csv + "'");
          io::write_point_csv(csv, measure, conjugate_function(op).values);
        }
      } else {
        const Function ones = Function::Ones(op.size());
        out["norm"] = lp_norm(measure, op.apply(ones), kInfinity);
        out["argmax_point"] = nullptr;
        out["certified"] = true;
      }
      emit_json("", out);
    } else if (scan_cmd->parsed()) {
      const auto space = io::space_from_json(io::read_json_file(scan_args.space));
      const auto measure = io::measure_from_json(io::read_json_file(scan_args.measure));
      if (scan_radii.empty())
        scan_radii = default_radii_grid(space, measure);
      const std::vector<BallKind> kinds{ parse_ball_kind(scan_ball) };
      const auto rows = scan(space, measure, scan_radii, kinds, scan_p, scan_opts);
      if (scan_format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
          arr.push_back(io::to_json(r));
        emit_json(scan_out, arr);
      } else if (scan_format == "csv") {
        std::ostringstream os;
        io::write_scan_csv(os, rows);
        emit(scan_out, os.str());
      } else {
        throw FormatError("--format must be csv or json");
      }
    } else if (conv->parsed()) {
      const auto space = io::space_from_json(io::read_json_file(conv_args.space));
      const auto measure = io::measure_from_json(io::read_json_file(conv_args.measure));
      const Function f = conv_function.empty()
                           ? evaluate_function_spec(space, conv_f)
                           : io::function_from_json(io::read_json_file(conv_function));
      std::vector<double> radii = conv_radii;
      if (!conv_pow2.empty())
        radii = pow2_radii(conv_pow2);
      std::vector<double> ps;
      for (const auto& s : conv_p)
        ps.push_back(parse_p(s));
      const auto res =
        convergence_experiment(space, measure, f, ps, radii, parse_ball_kind(conv_ball));
      if (conv_format == "json") {
        json rows = json::array();
        for (const auto& r : res.rows)
          rows.push_back(io::to_json(r));
        emit_json(conv_out, { { "rows", rows },
                              { "min_gap", res.min_gap },
                              { "sup_l1_norm", res.sup_norm } });
      } else if (conv_format == "csv") {
        std::ostringstream os;
        io::write_convergence_csv(os, res.rows);
        emit(conv_out, os.str());
      } else {
        throw FormatError("--format must be csv or json");
      }
    } else if (verify->parsed()) {
      std::set<std::string> sel;
      for (const auto& s : verify_sel) {
        if (s == "all")
          sel.insert(kSuiteNames.begin(), kSuiteNames.end());
        else if (!s.empty())
          sel.insert(s);
      }
      const VerifyReport rep = verify_suite(sel, verify_opts);
      for (const auto& s : rep.suites)
        std::cerr << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << s.checks << " checks, "
                  << s.seconds << " s)" << (s.passed ? "" : ": " + s.witness) << '\n';
      emit_json(verify_out, io::to_json(rep));
      return rep.passed ? 0 : 1;
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const io::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

#include "devdec/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"

#include "devdec/closedform.hpp"
#include "devdec/decompose.hpp"
#include "devdec/io.hpp"
#include "devdec/physics.hpp"
#include "devdec/random.hpp"

namespace devdec::cli {

namespace {

bool is_text(const CliConfig& c, const char* fallback) {
  return (c.format.empty() ? std::string(fallback) : c.format) == "text";
}

void emit(const CliConfig& c, const std::string& content, std::ostream& out) {
  if (c.output.empty())
    out << content;
  else
    write_text_file(c.output, content);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

const std::string& require_input(const CliConfig& c) {
  if (c.input.empty()) throw InputError(c.command + ": --input is required");
  return c.input;
}

int require_order(const CliConfig& c) {
  if (!c.order) throw InputError(c.command + ": --order is required");
  if (*c.order < 0 || *c.order > kMaxOrder)
    throw InputError(c.command + ": --order must lie in [0, " + std::to_string(kMaxOrder) + "]");
  return *c.order;
}

Json read_json(const std::string& path) { return parse_json(read_text_file(path), path); }

Tensor read_tensor(const std::string& path) {
  try {
    return tensor_from_json(read_json(path));
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw InputError(path + ": " + msg);
  }
}

Decomposition read_decomposition(const std::string& path) {
  const Json j = read_json(path);
  try {
    return decomposition_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

int cmd_decompose(const CliConfig& c, std::ostream& out) {
  const Decomposition d = decompose(read_tensor(require_input(c)));
  if (!is_text(c, "json")) {
    emit(c, dump(to_json(d)), out);
    return kSuccess;
  }
  std::ostringstream s;
  s << "order " << d.order << ", " << d.parts.size() << " parts\n";
  s << "s J |deviator| |embedded|\n";
  for (const auto& p : d.parts)
    s << p.s << ' ' << p.J << ' ' << fmt(p.deviator.norm()) << ' ' << fmt(p.embedded.norm())
      << '\n';
  emit(c, s.str(), out);
  return kSuccess;
}

int cmd_reconstruct(const CliConfig& c, std::ostream& out) {
  const Tensor t = reconstruct(read_decomposition(require_input(c)));
  if (!is_text(c, "json")) {
    emit(c, dump(to_json(t)), out);
    return kSuccess;
  }
  std::ostringstream s;
  s << "order " << t.order() << '\n';
  for (Eigen::Index i = 0; i < t.size(); ++i) s << (i ? " " : "") << fmt(t[i]);
  s << '\n';
  emit(c, s.str(), out);
  return kSuccess;
}

int cmd_verify(const CliConfig& c, std::ostream& out) {
  const Decomposition d = read_decomposition(require_input(c));
  const Tensor t = c.tensor.empty() ? reconstruct(d) : read_tensor(c.tensor);
  if (t.order() != d.order)
    throw InputError(c.tensor + ": tensor order " + std::to_string(t.order()) +
                     " differs from decomposition order " + std::to_string(d.order));
  const VerifyReport r = verify(d, t);
  const bool ok = r.passed(c.tolerance);
  if (!is_text(c, "text")) {
    emit(c, dump(to_json(r, c.tolerance)), out);
  } else {
    std::ostringstream s;
    s << "order                     " << r.order << '\n'
      << "part counts               " << (r.counts_ok ? "ok" : "MISMATCH") << '\n'
      << "reconstruction residual   " << fmt(r.reconstruction_residual) << '\n'
      << "max symmetry residual     " << fmt(r.max_symmetry_residual) << '\n'
      << "max trace residual        " << fmt(r.max_trace_residual) << '\n'
      << "max embedding residual    " << fmt(r.max_embedding_residual) << '\n'
      << "max orthogonality         " << fmt(r.max_orthogonality) << '\n'
      << "tolerance                 " << fmt(c.tolerance) << '\n';
    for (const auto& f : r.failures(c.tolerance)) s << "FAIL " << f << '\n';
    s << (ok ? "PASSED" : "FAILED") << '\n';
    emit(c, s.str(), out);
  }
  return ok ? kSuccess : kVerificationFailed;
}

int cmd_counts(const CliConfig& c, std::ostream& out) {
  const int n = require_order(c);
  std::vector<long long> row;
  for (int s = 0; s <= n; ++s) row.push_back(count_parts(n, s));
  if (is_text(c, "text")) {
    std::ostringstream s;
    for (std::size_t k = 0; k < row.size(); ++k) s << (k ? " " : "") << row[k];
    s << '\n';
    emit(c, s.str(), out);
  } else {
    long long dof = 0;
    for (int s = 0; s <= n; ++s) dof += (2 * s + 1) * row[s];
    emit(c, dump({{"order", n}, {"counts", row}, {"dof", dof}}), out);
  }
  return kSuccess;
}

StiffnessTensor read_stiffness(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const Tensor t = read_tensor(path);
    if (t.order() != 4)
      throw InputError(path + ": stiffness needs an order-4 tensor, got order " +
                       std::to_string(t.order()));
    return StiffnessTensor(t);
  }
  return voigt_to_tensor(parse_voigt(text, path));
}

int cmd_stiffness(const CliConfig& c, std::ostream& out) {
  const StiffnessTensor tensor = read_stiffness(require_input(c));
  const StiffnessDeviators d = stiffness_decompose(tensor);
  const double residual =
      (stiffness_reconstruct(d) - tensor.tensor()).norm() / std::max(tensor.tensor().norm(), 1e-300);
  if (!is_text(c, "text")) {
    Json j = to_json(d);
    j["roundtrip_residual"] = residual;
    emit(c, dump(j), out);
    return kSuccess;
  }
  std::ostringstream s;
  s << "lambda  " << fmt(d.lambda) << '\n'
    << "mu      " << fmt(d.mu) << '\n'
    << "|D1|    " << fmt(d.D1.norm()) << '\n'
    << "|D2|    " << fmt(d.D2.norm()) << '\n'
    << "|D4|    " << fmt(d.D4.norm()) << '\n'
    << "roundtrip residual " << fmt(residual) << '\n';
  emit(c, s.str(), out);
  return kSuccess;
}

CouplingVariant parse_variant(const std::string& v) {
  if (v == "literal") return CouplingVariant::Literal;
  if (v == "fitted") return CouplingVariant::Fitted;
  throw InputError("--variant must be literal or fitted");
}

int cmd_coupling(const CliConfig& c, std::ostream& out) {
  if (c.report_diff) {
    emit(c, dump(to_json(coupling_coefficient_diff())), out);
    return kSuccess;
  }
  const std::string& path = require_input(c);
  const Tensor t = read_tensor(path);
  if (t.order() != 3)
    throw InputError(path + ": coupling needs an order-3 tensor, got order " +
                     std::to_string(t.order()));
  const CouplingTensor h(t);
  const CouplingVariant variant = parse_variant(c.variant);
  const CouplingDeviators d = coupling_decompose(h, variant);
  const double residual =
      (coupling_reconstruct(d, variant) - t).norm() / std::max(t.norm(), 1e-300);
  if (!is_text(c, "text")) {
    Json j = to_json(d);
    j["variant"] = c.variant;
    j["roundtrip_residual"] = residual;
    emit(c, dump(j), out);
    return kSuccess;
  }
  std::ostringstream s;
  s << "variant " << c.variant << '\n'
    << "alpha   " << fmt(d.alpha) << '\n'
    << "|v1|    " << fmt(d.v1.norm()) << '\n'
    << "|v2|    " << fmt(d.v2.norm()) << '\n'
    << "|v3|    " << fmt(d.v3.norm()) << '\n'
    << "|D1|    " << fmt(d.D1.norm()) << '\n'
    << "|D2|    " << fmt(d.D2.norm()) << '\n'
    << "|D3|    " << fmt(d.D3.norm()) << '\n'
    << "roundtrip residual " << fmt(residual) << '\n';
  emit(c, s.str(), out);
  return kSuccess;
}

int cmd_random(const CliConfig& c, std::ostream& out) {
  const Tensor t = random_tensor(require_order(c), c.seed);
  emit(c, dump(to_json(t)), out);
  return kSuccess;
}

int cmd_closedform(const CliConfig& c, std::ostream& out) {
  const Json j = closed_form_coefficients_json();
  if (!is_text(c, "text")) {
    emit(c, dump(j), out);
    return kSuccess;
  }
  std::ostringstream s;
  for (const char* key : {"order3", "order4"}) {
    s << key << '\n';
    for (const auto& e : j[key])
      s << "  (" << e["s"].get<int>() << "," << e["J"].get<int>() << ") "
        << std::setw(3) << e["coefficient"].get<double>() << "  "
        << e["term"].get<std::string>() << '\n';
  }
  emit(c, s.str(), out);
  return kSuccess;
}

}  // namespace

int execute(const CliConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (!(c.tolerance > 0.0)) throw InputError("--tolerance must be positive");
    if (!c.format.empty() && c.format != "json" && c.format != "text")
      throw InputError("--format must be json or text");
    if (c.command == "decompose") return cmd_decompose(c, out);
    if (c.command == "reconstruct") return cmd_reconstruct(c, out);
    if (c.command == "verify") return cmd_verify(c, out);
    if (c.command == "counts") return cmd_counts(c, out);
    if (c.command == "stiffness") return cmd_stiffness(c, out);
    if (c.command == "coupling") return cmd_coupling(c, out);
    if (c.command == "random") return cmd_random(c, out);
    if (c.command == "closedform") return cmd_closedform(c, out);
    throw InputError("unknown command \"" + c.command + "\"");
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
  }
  return kInputError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Irreducible (deviatoric) decomposition of 3D tensors", "devdec"};
  app.require_subcommand(1);
  CliConfig c;

  auto io_options = [&](CLI::App* sub, bool input, bool output) {
    if (input) sub->add_option("--input,-i", c.input, "input file")->required();
    if (output) sub->add_option("--output,-o", c.output, "output file (default: stdout)");
    sub->add_option("--format", c.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
  };

  auto* dec = app.add_subcommand("decompose", "decompose a tensor JSON file");
  io_options(dec, true, true);
  auto* rec = app.add_subcommand("reconstruct", "sum the parts of a decomposition file");
  io_options(rec, true, true);
  auto* ver = app.add_subcommand("verify", "check a decomposition file");
  io_options(ver, true, true);
  ver->add_option("--tensor", c.tensor, "original tensor (default: sum of the parts)");
  ver->add_option("--tolerance", c.tolerance, "residual bound")->check(CLI::PositiveNumber);
  auto* cnt = app.add_subcommand("counts", "number of parts per deviator order");
  io_options(cnt, false, true);
  cnt->add_option("--order,-n", c.order, "tensor order")->required();
  auto* stf = app.add_subcommand("stiffness", "decompose a stiffness tensor (Voigt or JSON)");
  io_options(stf, true, true);
  auto* cpl = app.add_subcommand("coupling", "decompose a coupling tensor");
  io_options(cpl, false, true);
  cpl->add_option("--input,-i", c.input, "order-3 tensor JSON file");
  cpl->add_option("--variant", c.variant, "literal or fitted")
      ->check(CLI::IsMember({"literal", "fitted"}));
  cpl->add_flag("--report-diff", c.report_diff,
                "print printed-vs-fitted coefficient differences");
  auto* rnd = app.add_subcommand("random", "seeded random tensor");
  io_options(rnd, false, true);
  rnd->add_option("--order,-n", c.order, "tensor order")->required();
  rnd->add_option("--seed", c.seed, "generator seed");
  auto* cf = app.add_subcommand("closedform", "fitted closed-form coefficients");
  io_options(cf, false, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }
  c.command = app.get_subcommands().front()->get_name();
  return execute(c, out, err);
}

}  // namespace devdec::cli

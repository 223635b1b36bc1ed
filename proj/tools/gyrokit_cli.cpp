// gyrokit command-line front end.
//
// Exit codes: 0 success, 1 negative verdict (not an endomorphism, not
// collinear, failing property, ...), 2 usage or domain error.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "gyrokit/geometry.hpp"
#include "gyrokit/gyrovector.hpp"
#include "gyrokit/json_io.hpp"
#include "gyrokit/matrix_models.hpp"
#include "gyrokit/morphisms.hpp"
#include "gyrokit/verifier.hpp"

namespace {

using namespace gyrokit;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError("cannot parse number '" + std::string(s) + "'");
  }
  return x;
}

/// "0.5,0,-0.1" -> {0.5, 0, -0.1}.
std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_double(std::string_view(text).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

GyroVector parse_point(const std::string& text, const ToleranceConfig& tol) {
  return GyroVector(parse_vector(text), tol.boundary_margin);
}

std::string format_vector(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

/// Inline JSON when the argument starts with '{' or '[', a file path otherwise.
Json load_json(const std::string& arg) {
  std::string text = arg;
  const auto first = arg.find_first_not_of(" \t\n");
  if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot read file '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError("invalid JSON in '" + arg + "': " + e.what());
  }
}

std::uint64_t default_seed() {
  const char* env = std::getenv("GYROKIT_SEED");
  if (!env || !*env) return 7;
  std::uint64_t seed = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError("GYROKIT_SEED must be a non-negative integer, got '" + std::string(s) + "'");
  }
  return seed;
}

void print_json(const Json& j) { std::cout << j.dump() << '\n'; }

struct Options {
  ToleranceConfig tol;
  std::string u, v, w, x, y, z;
  std::string a, b, density;
  std::string map_source;
  std::size_t dim = 3;
  std::size_t samples = 1000;
  std::uint64_t seed = 7;
  bool all = false;
  bool list = false;
  bool parallel = false;
  std::vector<std::string> only;
};

void add_tolerance_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--abs-tol", o.tol.abs_tol, "absolute tolerance")->capture_default_str();
  cmd->add_option("--rel-tol", o.tol.rel_tol, "relative tolerance")->capture_default_str();
  cmd->add_option("--rmax", o.tol.sample_rmax, "sampling radius")->capture_default_str();
}

int run_classify(const Options& o) {
  o.tol.validate();
  const BallMap f = [&] {
    if (o.map_source == "zero") return BallMap::zero(o.dim);
    return BallMap::linear(linear_map_from_json(load_json(o.map_source)),
                           o.tol.boundary_margin);
  }();
  try {
    const MapClassification c = classify_endomorphism(f, o.samples, o.seed, o.tol);
    print_json(to_json(c));
    return c.is_not_endomorphism() ? kNegative : kOk;
  } catch (const ClassificationInconclusive& e) {
    print_json(Json{{"verdict", "inconclusive"}, {"message", e.what()}});
    return kNegative;
  }
}

int run_verify(const Options& o) {
  if (o.list) {
    for (const auto& spec : registry()) std::cout << spec.name << '\n';
    return kOk;
  }
  if (o.all && !o.only.empty()) throw UsageError("--all and --only are exclusive");
  const std::vector<std::string> names = o.only.empty() ? registered_names() : o.only;
  const auto reports =
      run_suite(names, o.samples, o.seed, o.tol, SuiteOptions{.parallel = o.parallel});
  for (const auto& r : reports) print_json(to_json(r));
  return failure_count(reports) == 0 ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  std::function<int()> action;

  CLI::App app{"gyrokit: Einstein gyrogroup arithmetic, geometry and endomorphism checks"};
  app.require_subcommand(1);

  try {
    o.seed = default_seed();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  auto* add = app.add_subcommand("add", "print u (+) v");
  add->add_option("--u", o.u, "comma-separated vector")->required();
  add->add_option("--v", o.v, "comma-separated vector")->required();
  add->callback([&] {
    action = [&] {
      std::cout << format_vector(einstein_add(parse_point(o.u, o.tol), parse_point(o.v, o.tol))
                                     .coords())
                << '\n';
      return kOk;
    };
  });

  auto* gam = app.add_subcommand("gamma", "print the Lorentz factor of u");
  gam->add_option("--u", o.u, "comma-separated vector")->required();
  gam->callback([&] {
    action = [&] {
      std::cout << format_number(gamma(parse_point(o.u, o.tol))) << '\n';
      return kOk;
    };
  });

  auto* gyr = app.add_subcommand("gyr", "print gyr[u,v]w");
  gyr->add_option("--u", o.u)->required();
  gyr->add_option("--v", o.v)->required();
  gyr->add_option("--w", o.w)->required();
  gyr->callback([&] {
    action = [&] {
      std::cout << format_vector(gyration(parse_point(o.u, o.tol), parse_point(o.v, o.tol),
                                          parse_point(o.w, o.tol))
                                     .coords())
                << '\n';
      return kOk;
    };
  });

  auto* dist = app.add_subcommand("dist", "print the Cayley-Klein distance of x and y");
  dist->add_option("--x", o.x)->required();
  dist->add_option("--y", o.y)->required();
  dist->callback([&] {
    action = [&] {
      std::cout << format_number(klein_distance(parse_point(o.x, o.tol), parse_point(o.y, o.tol)))
                << '\n';
      return kOk;
    };
  });

  auto* col = app.add_subcommand("collinear", "test whether x, y, z are collinear");
  col->add_option("--x", o.x)->required();
  col->add_option("--y", o.y)->required();
  col->add_option("--z", o.z)->required();
  add_tolerance_flags(col, o);
  col->callback([&] {
    action = [&] {
      const GyroVector x = parse_point(o.x, o.tol), y = parse_point(o.y, o.tol),
                       z = parse_point(o.z, o.tol);
      const bool g = collinear_gyro(x, y, z, o.tol);
      print_json(Json{{"collinear_gyro", g}, {"collinear_direct", collinear_direct(x, y, z, o.tol)}});
      return g ? kOk : kNegative;
    };
  });

  auto* com = app.add_subcommand("commutes", "test whether u (+) v = v (+) u");
  com->add_option("--u", o.u)->required();
  com->add_option("--v", o.v)->required();
  add_tolerance_flags(com, o);
  com->callback([&] {
    action = [&] {
      const GyroVector u = parse_point(o.u, o.tol), v = parse_point(o.v, o.tol);
      const bool c = commutes(u, v, o.tol);
      print_json(Json{{"commutes", c}, {"linearly_dependent", linearly_dependent(u, v, o.tol)}});
      return c ? kOk : kNegative;
    };
  });

  auto* bloch = app.add_subcommand("bloch", "Bloch vector <-> density matrix");
  auto* bloch_v = bloch->add_option("--v", o.v, "Bloch vector (3 components)");
  auto* bloch_d = bloch->add_option("--density", o.density, "density matrix JSON or file");
  bloch_v->excludes(bloch_d);
  bloch->callback([&] {
    action = [&] {
      if (!o.v.empty()) {
        print_json(to_json(bloch_to_density(parse_point(o.v, o.tol)).matrix()));
      } else if (!o.density.empty()) {
        const DensityMatrix2 m(hermitian_from_json(load_json(o.density)), o.tol);
        std::cout << format_vector(density_to_bloch(m).coords()) << '\n';
      } else {
        throw UsageError("bloch: one of --v or --density is required");
      }
      return kOk;
    };
  });

  auto* od = app.add_subcommand("odot", "print A (.) B for density matrices");
  od->add_option("--a", o.a, "JSON or file")->required();
  od->add_option("--b", o.b, "JSON or file")->required();
  od->callback([&] {
    action = [&] {
      const DensityMatrix2 a(hermitian_from_json(load_json(o.a)), o.tol);
      const DensityMatrix2 b(hermitian_from_json(load_json(o.b)), o.tol);
      print_json(to_json(odot(a, b).matrix()));
      return kOk;
    };
  });

  auto* bd = app.add_subcommand("boxdot", "print A [.] B for det-1 positive definite matrices");
  bd->add_option("--a", o.a, "JSON or file")->required();
  bd->add_option("--b", o.b, "JSON or file")->required();
  bd->callback([&] {
    action = [&] {
      const PosDef2Det1 a(hermitian_from_json(load_json(o.a)), o.tol);
      const PosDef2Det1 b(hermitian_from_json(load_json(o.b)), o.tol);
      print_json(to_json(boxdot(a, b).matrix()));
      return kOk;
    };
  });

  auto* nd = app.add_subcommand("normdet", "print A / sqrt(det A) for a density matrix");
  nd->add_option("--a", o.a, "JSON or file")->required();
  nd->callback([&] {
    action = [&] {
      const DensityMatrix2 a(hermitian_from_json(load_json(o.a)), o.tol);
      print_json(to_json(normalize_det(a).matrix()));
      return kOk;
    };
  });

  auto* cls = app.add_subcommand("classify", "classify a self-map of the ball");
  cls->add_option("map", o.map_source, "matrix JSON file (row-major) or \"zero\"")->required();
  cls->add_option("--dim", o.dim, "dimension for the zero map")->capture_default_str();
  cls->add_option("--samples", o.samples, "random samples")->capture_default_str();
  cls->add_option("--seed", o.seed, "seed (default $GYROKIT_SEED or 7)");
  add_tolerance_flags(cls, o);
  cls->callback([&] { action = [&] { return run_classify(o); }; });

  auto* ver = app.add_subcommand("verify", "run the property suite, one JSON line per property");
  auto* all = ver->add_flag("--all", o.all, "run every registered property");
  ver->add_option("--only", o.only, "run only the named properties")->excludes(all);
  ver->add_flag("--list", o.list, "list registered properties");
  ver->add_flag("--parallel", o.parallel, "run properties concurrently");
  ver->add_option("--samples", o.samples, "samples per property")->capture_default_str();
  ver->add_option("--seed", o.seed, "seed (default $GYROKIT_SEED or 7)");
  add_tolerance_flags(ver, o);
  ver->callback([&] { action = [&] { return run_verify(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}

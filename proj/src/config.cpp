#include "exitwell/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "exitwell/errors.hpp"

namespace exitwell {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Pos {
  const std::string& origin;
  int line;
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
  }
};

double to_double(const std::string& v, const Pos& pos) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) pos.fail("trailing characters after number '" + v + "'");
    if (!std::isfinite(x)) pos.fail("number '" + v + "' is not finite");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    pos.fail("expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& v, const Pos& pos) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) pos.fail("trailing characters after integer '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    pos.fail("expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& v, const Pos& pos) {
  std::string w;
  for (char c : v) w.push_back((char)std::tolower((unsigned char)c));
  if (w == "true" || w == "1" || w == "yes" || w == "on") return true;
  if (w == "false" || w == "0" || w == "no" || w == "off") return false;
  pos.fail("expected a boolean, got '" + v + "'");
}

// whitespace- and/or comma-separated doubles
std::vector<double> to_list(const std::string& v, const Pos& pos) {
  std::string w = v;
  std::replace(w.begin(), w.end(), ',', ' ');
  std::istringstream in(w);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(tok, pos));
  if (out.empty()) pos.fail("expected at least one number");
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    Pos pos{origin, lineno};
    std::string line = raw;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') pos.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"domain",  "potential", "expansion",
                                    "probes",  "mc",        "validate",
                                    "output"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
            return section == k;
          }) == std::end(known))
        pos.fail("unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) pos.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) pos.fail("empty key");
    if (val.empty()) pos.fail("empty value for '" + key + "'");
    if (section.empty()) pos.fail("'" + key + "' appears before any [section]");

    if (section == "domain") {
      cfg.domain.set = true;
      CurveSpec& sp = cfg.domain.spec;
      if (key == "kind") {
        if (val == "circle") sp.kind = CurveSpec::Kind::Circle;
        else if (val == "ellipse") sp.kind = CurveSpec::Kind::Ellipse;
        else if (val == "star") sp.kind = CurveSpec::Kind::FourierStar;
        else pos.fail("domain kind must be circle, ellipse or star");
      } else if (key == "radius") sp.radius = to_double(val, pos);
      else if (key == "a") sp.a = to_double(val, pos);
      else if (key == "b") sp.b = to_double(val, pos);
      else if (key == "r0") sp.r0 = to_double(val, pos);
      else if (key == "cos_coeffs") sp.cos_coeffs = to_list(val, pos);
      else if (key == "sin_coeffs") sp.sin_coeffs = to_list(val, pos);
      else if (key == "grid_size") cfg.domain.grid_size = (int)to_int(val, pos);
      else if (key == "collar_cap") cfg.domain.collar_cap = to_double(val, pos);
      else pos.fail("unknown domain key '" + key + "'");
    } else if (section == "potential") {
      cfg.potential_set = true;
      PotentialSpec& sp = cfg.potential;
      if (key == "kind") {
        if (val == "radial_power") sp.kind = PotentialSpec::Kind::RadialPower;
        else if (val == "quadratic_form") sp.kind = PotentialSpec::Kind::QuadraticForm;
        else if (val == "polynomial") sp.kind = PotentialSpec::Kind::Polynomial;
        else pos.fail("potential kind must be radial_power, quadratic_form or polynomial");
      } else if (key == "power") sp.power = (int)to_int(val, pos);
      else if (key == "scale") sp.scale = to_double(val, pos);
      else if (key == "axx") sp.axx = to_double(val, pos);
      else if (key == "axy") sp.axy = to_double(val, pos);
      else if (key == "ayy") sp.ayy = to_double(val, pos);
      else if (key == "monomials") {
        const std::vector<double> flat = to_list(val, pos);
        if (flat.size() % 3 != 0)
          pos.fail("monomials wants triples: xdeg ydeg coeff, ...");
        for (std::size_t t = 0; t < flat.size(); t += 3) {
          Monomial mo;
          mo.i = (int)std::llround(flat[t]);
          mo.j = (int)std::llround(flat[t + 1]);
          mo.c = flat[t + 2];
          if (mo.i < 0 || mo.j < 0 || flat[t] != mo.i || flat[t + 1] != mo.j)
            pos.fail("monomial exponents must be nonnegative integers");
          sp.monomials.push_back(mo);
        }
      } else pos.fail("unknown potential key '" + key + "'");
    } else if (section == "expansion") {
      if (key == "order") cfg.expansion.order = (int)to_int(val, pos);
      else if (key == "eps") cfg.expansion.eps = to_list(val, pos);
      else if (key == "delta_scale") cfg.expansion.delta_scale = to_double(val, pos);
      else pos.fail("unknown expansion key '" + key + "'");
    } else if (section == "probes") {
      if (key == "points") {
        const std::vector<double> flat = to_list(val, pos);
        if (flat.size() % 2 != 0) pos.fail("points wants pairs: x y, x y, ...");
        for (std::size_t t = 0; t < flat.size(); t += 2)
          cfg.probes.push_back({flat[t], flat[t + 1]});
      } else pos.fail("unknown probes key '" + key + "'");
    } else if (section == "mc") {
      if (key == "enabled") cfg.mc.enabled = to_bool(val, pos);
      else if (key == "dt") cfg.mc.dt = to_list(val, pos);
      else if (key == "n_paths") cfg.mc.n_paths = to_int(val, pos);
      else if (key == "seed") cfg.mc.seed = (std::uint64_t)to_int(val, pos);
      else if (key == "max_steps_per_path") cfg.mc.max_steps_per_path = to_int(val, pos);
      else if (key == "min_eps") cfg.mc.min_eps = to_double(val, pos);
      else if (key == "threads") cfg.mc.threads = (int)to_int(val, pos);
      else pos.fail("unknown mc key '" + key + "'");
    } else if (section == "validate") {
      if (key == "radial_bvp") cfg.validate.radial_bvp = to_bool(val, pos);
      else if (key == "radial_eigen") cfg.validate.radial_eigen = to_bool(val, pos);
      else if (key == "bvp_grid") cfg.validate.bvp_grid = (int)to_int(val, pos);
      else if (key == "eigen_cells") cfg.validate.eigen_cells = (int)to_int(val, pos);
      else pos.fail("unknown validate key '" + key + "'");
    } else if (section == "output") {
      if (key == "json") cfg.output.json = val;
      else if (key == "csv_prefix") cfg.output.csv_prefix = val;
      else pos.fail("unknown output key '" + key + "'");
    }
  }

  Pos end{origin, lineno};
  if (!cfg.domain.set) end.fail("missing [domain] section");
  if (!cfg.potential_set) end.fail("missing [potential] section");
  if (cfg.expansion.order < 0) end.fail("expansion order must be >= 0");
  for (double e : cfg.expansion.eps)
    if (!(e > 0)) end.fail("every eps must be positive");
  for (double d : cfg.mc.dt)
    if (!(d > 0)) end.fail("every mc dt must be positive");

  // canonical eps order: large to small, deduplicated
  std::sort(cfg.expansion.eps.begin(), cfg.expansion.eps.end(),
            std::greater<double>());
  cfg.expansion.eps.erase(
      std::unique(cfg.expansion.eps.begin(), cfg.expansion.eps.end()),
      cfg.expansion.eps.end());
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace exitwell

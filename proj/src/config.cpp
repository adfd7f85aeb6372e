#include "patchtooth/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "patchtooth/microscale.hpp"

namespace patchtooth {

using nlohmann::json;

std::string to_string(Model model) {
  switch (model) {
    case Model::Diffusion1D: return "diffusion1d";
    case Model::Diffusion2D: return "diffusion2d";
    case Model::Wave1D: return "wave1d";
  }
  return "";
}

std::string to_string(Task task) {
  switch (task) {
    case Task::Eigen: return "eigen";
    case Task::Simulate: return "simulate";
    case Task::Homogenize: return "homogenize";
    case Task::Sweep: return "sweep";
    case Task::Check: return "check";
  }
  return "";
}

std::optional<Task> parse_task(const std::string& name) {
  for (Task t : {Task::Eigen, Task::Simulate, Task::Homogenize, Task::Sweep, Task::Check})
    if (to_string(t) == name) return t;
  return std::nullopt;
}

namespace {

class Reader {
 public:
  std::vector<Diagnostic> diagnostics;

  void error(const std::string& field, const std::string& message) {
    diagnostics.push_back({Diagnostic::Severity::Error, field, message});
  }

  void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
      if (!keys.count(key)) error(join(path, key), "unknown field");
  }

  const json* object(const json& parent, const std::string& path, const char* key, bool required) {
    if (!parent.contains(key)) {
      if (required) error(join(path, key), "required field missing");
      return nullptr;
    }
    const json& v = parent.at(key);
    if (!v.is_object()) {
      error(join(path, key), "must be an object");
      return nullptr;
    }
    return &v;
  }

  std::optional<double> number(const json& parent, const std::string& path, const char* key, bool required) {
    if (!parent.contains(key)) {
      if (required) error(join(path, key), "required field missing");
      return std::nullopt;
    }
    const json& v = parent.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      error(join(path, key), "must be a finite number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<long long> integer(const json& parent, const std::string& path, const char* key, bool required) {
    if (!parent.contains(key)) {
      if (required) error(join(path, key), "required field missing");
      return std::nullopt;
    }
    const json& v = parent.at(key);
    if (!v.is_number_integer()) {
      error(join(path, key), "must be an integer");
      return std::nullopt;
    }
    return v.get<long long>();
  }

  std::optional<std::string> string(const json& parent, const std::string& path, const char* key,
                                    std::initializer_list<const char*> choices, bool required) {
    if (!parent.contains(key)) {
      if (required) error(join(path, key), "required field missing");
      return std::nullopt;
    }
    const json& v = parent.at(key);
    std::string list;
    for (const char* c : choices) list += (list.empty() ? "" : ", ") + std::string(c);
    if (!v.is_string()) {
      error(join(path, key), "must be one of: " + list);
      return std::nullopt;
    }
    const auto s = v.get<std::string>();
    for (const char* c : choices)
      if (s == c) return s;
    error(join(path, key), "'" + s + "' is not one of: " + list);
    return std::nullopt;
  }

  std::optional<bool> boolean(const json& parent, const std::string& path, const char* key) {
    if (!parent.contains(key)) return std::nullopt;
    if (!parent.at(key).is_boolean()) {
      error(join(path, key), "must be true or false");
      return std::nullopt;
    }
    return parent.at(key).get<bool>();
  }

  std::optional<std::vector<double>> numbers(const json& parent, const std::string& path, const char* key,
                                             bool required) {
    if (!parent.contains(key)) {
      if (required) error(join(path, key), "required field missing");
      return std::nullopt;
    }
    const json& v = parent.at(key);
    if (!v.is_array()) {
      error(join(path, key), "must be an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        error(join(path, key), "must be an array of finite numbers");
        return std::nullopt;
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::optional<std::vector<int>> integers(const json& parent, const std::string& path, const char* key,
                                           bool required) {
    if (!parent.contains(key)) {
      if (required) error(join(path, key), "required field missing");
      return std::nullopt;
    }
    const json& v = parent.at(key);
    if (!v.is_array()) {
      error(join(path, key), "must be an array of integers");
      return std::nullopt;
    }
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) {
        error(join(path, key), "must be an array of integers");
        return std::nullopt;
      }
      out.push_back(e.get<int>());
    }
    return out;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
};

std::optional<PatchGrid1D> read_axis(Reader& rd, const json& g, const std::string& path) {
  rd.only_keys(g, path, {"L", "N", "n", "r"});
  const auto L = rd.number(g, path, "L", true);
  const auto N = rd.integer(g, path, "N", true);
  const auto n = rd.integer(g, path, "n", true);
  const auto r = rd.number(g, path, "r", true);
  bool ok = L && N && n && r;
  if (L && !(*L > 0.0)) rd.error(path + ".L", "domain length must be positive"), ok = false;
  if (N && (*N < 1 || *N > 100000)) rd.error(path + ".N", "patch count must be at least 1"), ok = false;
  if (n && (*n < 1 || *n > 100000)) rd.error(path + ".n", "patch size must be at least 1"), ok = false;
  if (r && !(*r > 0.0 && *r <= 1.0)) rd.error(path + ".r", "size ratio must lie in (0, 1]"), ok = false;
  if (!ok) return std::nullopt;
  return build_grid_1d(*L, static_cast<int>(*N), static_cast<int>(*n), *r);
}

std::optional<CouplingSpec> read_coupling(Reader& rd, const json& c, const std::string& path) {
  rd.only_keys(c, path, {"scheme", "order"});
  const auto scheme = rd.string(c, path, "scheme", {"spectral", "lagrangian"}, true);
  const auto order = rd.integer(c, path, "order", false);
  if (!scheme) return std::nullopt;
  if (*scheme == "spectral") return CouplingSpec::spectral();
  if (!order) {
    if (!c.contains("order")) rd.error(path + ".order", "required for lagrangian coupling");
    return std::nullopt;
  }
  if (*order < 1 || *order > 1000) {
    rd.error(path + ".order", "must be a positive integer");
    return std::nullopt;
  }
  return CouplingSpec::lagrangian(static_cast<int>(*order));
}

void check_order(Reader& rd, const CouplingSpec& c, const PatchGrid1D& g, const std::string& path) {
  if (c.scheme == CouplingScheme::Lagrangian && 2 * c.order + 1 > g.patches) {
    rd.error(path + ".order", "needs 2P+1 <= N (" + std::to_string(2 * c.order + 1) + " > " +
                                  std::to_string(g.patches) + ")");
  }
}

std::optional<DiffusivityProfile1D> read_profile_1d(Reader& rd, const json& p) {
  rd.only_keys(p, "profile", {"values", "lognormal"});
  if (p.contains("values") == p.contains("lognormal")) {
    rd.error("profile", "give exactly one of 'values' or 'lognormal'");
    return std::nullopt;
  }
  if (p.contains("values")) {
    const auto v = rd.numbers(p, "profile", "values", true);
    if (!v) return std::nullopt;
    if (v->empty()) return rd.error("profile.values", "must not be empty"), std::nullopt;
    for (double x : *v)
      if (!(x > 0.0)) return rd.error("profile.values", "diffusivities must be positive"), std::nullopt;
    return DiffusivityProfile1D(*v);
  }
  const auto* ln = rd.object(p, "profile", "lognormal", true);
  if (!ln) return std::nullopt;
  rd.only_keys(*ln, "profile.lognormal", {"p", "sigma", "seed"});
  const auto period = rd.integer(*ln, "profile.lognormal", "p", true);
  const auto sigma = rd.number(*ln, "profile.lognormal", "sigma", true);
  const auto seed = rd.integer(*ln, "profile.lognormal", "seed", true);
  bool ok = period && sigma && seed;
  if (period && (*period < 1 || *period > 10000)) rd.error("profile.lognormal.p", "must be a positive integer"), ok = false;
  if (sigma && *sigma < 0.0) rd.error("profile.lognormal.sigma", "must be nonnegative"), ok = false;
  if (seed && *seed < 0) rd.error("profile.lognormal.seed", "must be nonnegative"), ok = false;
  if (!ok) return std::nullopt;
  return random_lognormal_profile(static_cast<int>(*period), *sigma, static_cast<std::uint64_t>(*seed));
}

std::optional<DiffusivityProfile2D> read_profile_2d(Reader& rd, const json& p) {
  rd.only_keys(p, "profile", {"kx", "ky", "lognormal"});
  const bool inline_grid = p.contains("kx") || p.contains("ky");
  if (inline_grid == p.contains("lognormal")) {
    rd.error("profile", "give either 'kx' and 'ky' or 'lognormal'");
    return std::nullopt;
  }
  if (inline_grid) {
    auto grid = [&](const char* key) -> std::optional<std::vector<std::vector<double>>> {
      const std::string path = std::string("profile.") + key;
      if (!p.contains(key)) return rd.error(path, "required field missing"), std::nullopt;
      const json& v = p.at(key);
      std::vector<std::vector<double>> out;
      if (!v.is_array() || v.empty()) return rd.error(path, "must be a nonempty array of rows"), std::nullopt;
      for (const auto& row : v) {
        if (!row.is_array() || row.empty()) return rd.error(path, "rows must be nonempty arrays"), std::nullopt;
        std::vector<double> r;
        for (const auto& e : row) {
          if (!e.is_number() || !(e.get<double>() > 0.0) || !std::isfinite(e.get<double>()))
            return rd.error(path, "diffusivities must be positive finite numbers"), std::nullopt;
          r.push_back(e.get<double>());
        }
        out.push_back(std::move(r));
      }
      return out;
    };
    auto kx = grid("kx");
    auto ky = grid("ky");
    if (!kx || !ky) return std::nullopt;
    try {
      return DiffusivityProfile2D(*kx, *ky);
    } catch (const InvalidArgument& e) {
      rd.error("profile", e.what());
      return std::nullopt;
    }
  }
  const auto* ln = rd.object(p, "profile", "lognormal", true);
  if (!ln) return std::nullopt;
  const std::string path = "profile.lognormal";
  rd.only_keys(*ln, path, {"px", "py", "sigma", "seed"});
  const auto px = rd.integer(*ln, path, "px", true);
  const auto py = rd.integer(*ln, path, "py", true);
  const auto sigma = rd.number(*ln, path, "sigma", true);
  const auto seed = rd.integer(*ln, path, "seed", true);
  bool ok = px && py && sigma && seed;
  if (px && (*px < 1 || *px > 1000)) rd.error(path + ".px", "must be a positive integer"), ok = false;
  if (py && (*py < 1 || *py > 1000)) rd.error(path + ".py", "must be a positive integer"), ok = false;
  if (sigma && *sigma < 0.0) rd.error(path + ".sigma", "must be nonnegative"), ok = false;
  if (seed && *seed < 0) rd.error(path + ".seed", "must be nonnegative"), ok = false;
  if (!ok) return std::nullopt;
  return random_lognormal_profile_2d(static_cast<int>(*px), static_cast<int>(*py), *sigma,
                                     static_cast<std::uint64_t>(*seed));
}

void read_simulate(Reader& rd, const json& s, SimulateConfig& out, Model model) {
  const std::string path = "simulate";
  rd.only_keys(s, path, {"method", "times", "dt", "steps", "record_every", "override_stability", "initial"});
  const char* fallback = model == Model::Wave1D ? "rk4" : "exact";
  out.method = rd.string(s, path, "method", {"exact", "rk4"}, false).value_or(fallback);
  if (model == Model::Wave1D && out.method == "exact") {
    rd.error("simulate.method", "the wave system has no symmetric eigendecomposition; use rk4");
  }
  if (out.method == "exact") {
    if (auto t = rd.numbers(s, path, "times", true)) {
      out.times = *t;
      if (t->empty()) rd.error("simulate.times", "must not be empty");
      for (std::size_t k = 0; k < t->size(); ++k) {
        if ((*t)[k] < 0.0 || (k > 0 && !((*t)[k] > (*t)[k - 1]))) {
          rd.error("simulate.times", "must be nonnegative and strictly increasing");
          break;
        }
      }
    }
  } else {
    const auto dt = rd.number(s, path, "dt", true);
    const auto steps = rd.integer(s, path, "steps", true);
    if (dt) {
      if (!(*dt > 0.0)) rd.error("simulate.dt", "must be positive");
      out.dt = *dt;
    }
    if (steps) {
      if (*steps < 1 || *steps > 100000000) rd.error("simulate.steps", "must be a positive integer");
      out.steps = static_cast<int>(*steps);
    }
    if (auto every = rd.integer(s, path, "record_every", false)) {
      if (*every < 1) rd.error("simulate.record_every", "must be a positive integer");
      out.record_every = static_cast<int>(std::max<long long>(1, *every));
    }
    out.override_stability = rd.boolean(s, path, "override_stability").value_or(false);
  }
  if (const auto* ic = rd.object(s, path, "initial", false)) {
    const std::string ip = "simulate.initial";
    rd.only_keys(*ic, ip, {"type", "mode", "amplitude", "center", "width", "noise", "seed"});
    auto& init = out.initial;
    init.type = rd.string(*ic, ip, "type", {"sinusoid", "gaussian", "sinusoid_noise"}, false).value_or("sinusoid");
    if (ic->contains("mode")) {
      if (ic->at("mode").is_number_integer()) {
        init.mode = {ic->at("mode").get<int>(), ic->at("mode").get<int>()};
      } else if (auto m = rd.integers(*ic, ip, "mode", false)) {
        if (m->empty() || m->size() > 2) rd.error(ip + ".mode", "give one or two integers");
        else init.mode = m->size() == 1 ? std::vector<int>{(*m)[0], (*m)[0]} : *m;
      }
    }
    init.amplitude = rd.number(*ic, ip, "amplitude", false).value_or(1.0);
    if (auto c = rd.numbers(*ic, ip, "center", false)) init.center = *c;
    if (auto w = rd.number(*ic, ip, "width", false)) {
      if (!(*w > 0.0)) rd.error(ip + ".width", "must be positive");
      init.width = *w;
    }
    if (auto nz = rd.number(*ic, ip, "noise", false)) {
      if (*nz < 0.0) rd.error(ip + ".noise", "must be nonnegative");
      init.noise = *nz;
    }
    if (auto sd = rd.integer(*ic, ip, "seed", false)) {
      if (*sd < 0) rd.error(ip + ".seed", "must be nonnegative");
      init.seed = static_cast<std::uint64_t>(std::max<long long>(0, *sd));
    }
  }
}

}  // namespace

ParseResult parse_config(const json& doc) {
  Reader rd;
  ParseResult result;
  if (!doc.is_object()) {
    rd.error("", "configuration must be a JSON object");
    result.diagnostics = rd.diagnostics;
    return result;
  }
  rd.only_keys(doc, "", {"$schema", "model", "task", "grid", "profile", "coupling", "coupling_y", "ensemble",
                         "allow_asymmetric", "epsilon", "eigen", "simulate", "sweep", "homogenize", "output"});

  RunConfig cfg;
  const auto model = rd.string(doc, "", "model", {"diffusion1d", "diffusion2d", "wave1d"}, true);
  if (model) cfg.model = *model == "diffusion1d" ? Model::Diffusion1D
                         : *model == "diffusion2d" ? Model::Diffusion2D
                                                   : Model::Wave1D;
  const auto task = rd.string(doc, "", "task", {"eigen", "simulate", "homogenize", "sweep", "check"}, false);
  cfg.task = task ? *parse_task(*task) : Task::Eigen;
  const bool two_d = cfg.model == Model::Diffusion2D;

  cfg.ensemble = rd.boolean(doc, "", "ensemble").value_or(false);
  cfg.allow_asymmetric = rd.boolean(doc, "", "allow_asymmetric").value_or(false);
  if (auto eps = rd.number(doc, "", "epsilon", false)) {
    if (*eps < 0.0) rd.error("epsilon", "damping must be nonnegative");
    if (cfg.model != Model::Wave1D) rd.error("epsilon", "only meaningful for model wave1d");
    cfg.epsilon = *eps;
  }

  // Grid: optional for homogenize (which then needs homogenize.d).
  bool grid_ok = false;
  const bool grid_required = !(cfg.task == Task::Homogenize && model);
  if (const auto* g = rd.object(doc, "", "grid", grid_required)) {
    cfg.has_grid = true;
    if (two_d) {
      rd.only_keys(*g, "grid", {"x", "y"});
      const auto* gx = rd.object(*g, "grid", "x", true);
      const auto* gy = rd.object(*g, "grid", "y", true);
      std::optional<PatchGrid1D> x, y;
      if (gx) x = read_axis(rd, *gx, "grid.x");
      if (gy) y = read_axis(rd, *gy, "grid.y");
      if (x && y) cfg.grid_x = *x, cfg.grid_y = *y, grid_ok = true;
    } else if (auto x = read_axis(rd, *g, "grid")) {
      cfg.grid_x = *x;
      grid_ok = true;
    }
  }

  bool profile_ok = false;
  if (const auto* p = rd.object(doc, "", "profile", true)) {
    if (two_d) {
      cfg.profile_2d = read_profile_2d(rd, *p);
      profile_ok = cfg.profile_2d.has_value();
    } else {
      cfg.profile_1d = read_profile_1d(rd, *p);
      profile_ok = cfg.profile_1d.has_value();
    }
  }

  bool coupling_ok = true;
  if (const auto* c = rd.object(doc, "", "coupling", false)) {
    if (auto spec = read_coupling(rd, *c, "coupling")) cfg.coupling = *spec;
    else coupling_ok = false;
  }
  cfg.coupling_y = cfg.coupling;
  if (const auto* c = rd.object(doc, "", "coupling_y", false)) {
    if (!two_d) rd.error("coupling_y", "only meaningful for model diffusion2d");
    if (auto spec = read_coupling(rd, *c, "coupling_y")) cfg.coupling_y = *spec;
    else coupling_ok = false;
  }
  if (grid_ok && coupling_ok) {
    check_order(rd, cfg.coupling, cfg.grid_x, "coupling");
    if (two_d) check_order(rd, cfg.coupling_y, cfg.grid_y, doc.contains("coupling_y") ? "coupling_y" : "coupling");
  }

  if (grid_ok && profile_ok && !cfg.allow_asymmetric) {
    auto diags = two_d ? validate_compatibility(cfg.grid_2d(), *cfg.profile_2d, cfg.ensemble)
                       : validate_compatibility(cfg.grid_x, *cfg.profile_1d, cfg.ensemble);
    rd.diagnostics.insert(rd.diagnostics.end(), diags.begin(), diags.end());
  }

  if (const auto* e = rd.object(doc, "", "eigen", false)) {
    rd.only_keys(*e, "eigen", {"macro_count"});
    if (auto m = rd.integer(*e, "eigen", "macro_count", false)) {
      if (*m < 0) rd.error("eigen.macro_count", "must be nonnegative");
      cfg.macro_count = static_cast<int>(*m);
    }
  }

  if (cfg.task == Task::Simulate) {
    if (const auto* s = rd.object(doc, "", "simulate", true)) read_simulate(rd, *s, cfg.simulate, cfg.model);
  }

  if (cfg.task == Task::Homogenize) {
    if (cfg.model != Model::Diffusion1D) rd.error("model", "homogenize needs model diffusion1d");
    if (const auto* h = rd.object(doc, "", "homogenize", false)) {
      rd.only_keys(*h, "homogenize", {"nodes", "samples", "d"});
      if (auto n = rd.numbers(*h, "homogenize", "nodes", false)) cfg.homogenize.nodes = *n;
      if (auto s = rd.numbers(*h, "homogenize", "samples", false)) cfg.homogenize.samples = *s;
      if (auto d = rd.number(*h, "homogenize", "d", false)) {
        if (!(*d > 0.0)) rd.error("homogenize.d", "must be positive");
        cfg.homogenize.d = *d;
      }
    }
    if (!cfg.has_grid && !cfg.homogenize.d) rd.error("homogenize.d", "required when no grid is given");
  }

  if (cfg.task == Task::Sweep) {
    if (cfg.model == Model::Wave1D) rd.error("model", "sweep supports the diffusion models");
    if (const auto* s = rd.object(doc, "", "sweep", true)) {
      rd.only_keys(*s, "sweep", {"axis", "values", "reference", "modes"});
      cfg.sweep.axis = rd.string(*s, "sweep", "axis", {"order", "patches"}, true).value_or("order");
      cfg.sweep.reference = rd.string(*s, "sweep", "reference", {"spectral", "lattice"}, false).value_or("spectral");
      if (auto v = rd.integers(*s, "sweep", "values", true)) {
        cfg.sweep.values = *v;
        if (v->empty()) rd.error("sweep.values", "must not be empty");
        for (int x : *v)
          if (x < 1) rd.error("sweep.values", "must be positive integers");
      }
      if (auto m = rd.integer(*s, "sweep", "modes", false)) {
        if (*m < 1) rd.error("sweep.modes", "must be a positive integer");
        cfg.sweep.modes = static_cast<int>(std::max<long long>(1, *m));
      }
      if (two_d && cfg.sweep.axis == "patches") rd.error("sweep.axis", "patch sweeps are one dimensional");
      if (two_d && cfg.sweep.reference == "lattice") rd.error("sweep.reference", "lattice reference is one dimensional");
    }
  }

  if (const auto* o = rd.object(doc, "", "output", false)) {
    rd.only_keys(*o, "output", {"dir", "matrix"});
    if (o->contains("dir")) {
      if (!o->at("dir").is_string() || o->at("dir").get<std::string>().empty()) rd.error("output.dir", "must be a nonempty string");
      else cfg.output_dir = o->at("dir").get<std::string>();
    }
    if (o->contains("matrix")) {
      const auto& m = o->at("matrix");
      if (!m.is_string() || (m != "none" && m != "csv" && m != "binary")) {
        rd.error("output.matrix", "must be one of none, csv, binary");
      } else {
        cfg.matrix_format = m.get<std::string>();
      }
    }
  }

  result.diagnostics = rd.diagnostics;
  if (!has_errors(result.diagnostics)) result.config = std::move(cfg);
  return result;
}

}  // namespace patchtooth

#include "liouville/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "liouville/errors.hpp"

#ifndef LIOUVILLE_PRESET_DIR
#define LIOUVILLE_PRESET_DIR ""
#endif

namespace liouville {

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double need_num(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError(where + ": missing numeric '" + key + "'");
  return j[key].get<double>();
}

Domain2D parse_domain(const json& j, double* h_out, ProblemConfig::DomainKind* kind) {
  reject_unknown(j, {"kind", "radius", "center", "xmin", "xmax", "ymin", "ymax",
                     "vertices", "r_inner", "r_outer", "h", "m"},
                 "domain");
  const std::string k = j.value("kind", "");
  if (k == "ball") {
    *kind = ProblemConfig::DomainKind::Ball2m;
    if (h_out && j.contains("h")) *h_out = j["h"].get<double>();
    return Domain2D::disc(Vec2(0, 0), 1.0);  // placeholder footprint
  }
  *kind = ProblemConfig::DomainKind::Planar;
  if (h_out && j.contains("h")) *h_out = need_num(j, "h", "domain");
  if (k == "disc") {
    Vec2 c(0, 0);
    if (j.contains("center")) {
      c.x() = j["center"].at(0).get<double>();
      c.y() = j["center"].at(1).get<double>();
    }
    return Domain2D::disc(c, j.value("radius", 1.0));
  }
  if (k == "rectangle")
    return Domain2D::rectangle(
        Vec2(need_num(j, "xmin", "domain"), need_num(j, "ymin", "domain")),
        Vec2(need_num(j, "xmax", "domain"), need_num(j, "ymax", "domain")));
  if (k == "polygon") {
    std::vector<Vec2> vs;
    for (const auto& v : j.at("vertices"))
      vs.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    return Domain2D::polygon(vs);
  }
  if (k == "annulus") {
    Vec2 c(0, 0);
    if (j.contains("center")) {
      c.x() = j["center"].at(0).get<double>();
      c.y() = j["center"].at(1).get<double>();
    }
    return Domain2D::annulus(c, need_num(j, "r_inner", "domain"),
                             need_num(j, "r_outer", "domain"));
  }
  throw ConfigError("domain: unknown kind '" + k + "'");
}

}  // namespace

Potential parse_potential(const json& j) {
  reject_unknown(j, {"type", "value", "c", "gx", "gy", "centers", "amps", "widths",
                     "ring_radius_sq", "strength"},
                 "potential");
  const std::string t = j.value("type", "constant");
  if (t == "constant") return Potential::constant(j.value("value", 1.0));
  if (t == "affine")
    return Potential::affine(j.value("c", 1.0), j.value("gx", 0.0), j.value("gy", 0.0));
  if (t == "bumps") {
    std::vector<Vec2> cs;
    std::vector<double> as, ws;
    for (const auto& c : j.at("centers"))
      cs.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    for (const auto& a : j.at("amps")) as.push_back(a.get<double>());
    for (const auto& w : j.at("widths")) ws.push_back(w.get<double>());
    return Potential::bumps(cs, as, ws);
  }
  throw ConfigError("potential: unknown type '" + t + "'");
}

Domain2D ProblemConfig::planar_domain() const {
  if (!planar) throw ConfigError("configuration has no planar domain");
  return *planar;
}

ProblemConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"m", "k", "bc", "domain", "potential", "eps", "eps_sweep", "delta0",
                  "seed", "seed_xi", "green_method", "out_dir", "tolerances", "solver"},
                 "config");
  ProblemConfig c;
  c.m = j.value("m", 1);
  if (c.m < 1) throw ConfigError("config: m must be >= 1");
  c.k = j.value("k", 1);
  if (c.k < 1) throw ConfigError("config: k must be >= 1");
  const std::string bc = j.value("bc", "dirichlet");
  if (bc == "dirichlet")
    c.bc = greens::BoundaryCondition::Dirichlet;
  else if (bc == "navier")
    c.bc = greens::BoundaryCondition::Navier;
  else
    throw ConfigError("config: bc must be 'dirichlet' or 'navier'");

  if (j.contains("domain")) {
    c.planar = parse_domain(j["domain"], &c.h, &c.domain_kind);
    if (c.domain_kind == ProblemConfig::DomainKind::Ball2m) c.planar.reset();
  }
  if (c.domain_kind == ProblemConfig::DomainKind::Planar && !c.planar)
    c.planar = Domain2D::disc(Vec2(0, 0), 1.0);
  if (c.domain_kind == ProblemConfig::DomainKind::Planar && c.m != 1)
    throw ConfigError("config: planar domains require m = 1");

  c.potential_spec = j.value("potential", c.potential_spec);
  c.V = parse_potential(c.potential_spec);

  c.eps = j.value("eps", 0.05);
  if (!(c.eps > 0)) throw ConfigError("config: eps must be positive");
  if (j.contains("eps_sweep"))
    for (const auto& e : j["eps_sweep"]) c.eps_sweep.push_back(e.get<double>());
  c.delta0 = j.value("delta0", 0.25);
  c.seed = j.value("seed", std::uint64_t{12345});
  if (j.contains("seed_xi"))
    for (const auto& p : j["seed_xi"]) {
      std::vector<double> pt;
      for (const auto& v : p) pt.push_back(v.get<double>());
      c.seed_xi.push_back(pt);
    }
  c.green_method = j.value("green_method", "auto");
  c.out_dir = j.value("out_dir", "out");

  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    reject_unknown(t, {"grad", "multiplier", "quad_rel", "fixed_point"}, "tolerances");
    c.tol.grad = t.value("grad", c.tol.grad);
    c.tol.multiplier = t.value("multiplier", c.tol.multiplier);
    c.tol.quad_rel = t.value("quad_rel", c.tol.quad_rel);
    c.tol.fixed_point = t.value("fixed_point", c.tol.fixed_point);
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    reject_unknown(s, {"R0", "max_iterations", "residual_mode", "h_solve",
                       "truncation_degree"},
                   "solver");
    c.solver.R0 = s.value("R0", c.solver.R0);
    c.solver.max_iterations = s.value("max_iterations", c.solver.max_iterations);
    c.solver.residual_mode = s.value("residual_mode", c.solver.residual_mode);
    if (c.solver.residual_mode != "discrete" && c.solver.residual_mode != "exact")
      throw ConfigError("solver: residual_mode must be 'discrete' or 'exact'");
    c.solver.h_solve = s.value("h_solve", c.solver.h_solve);
    c.solver.truncation_degree = s.value("truncation_degree", c.solver.truncation_degree);
  }
  return c;
}

ProblemConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ProblemConfig& c) {
  json j;
  j["m"] = c.m;
  j["k"] = c.k;
  j["bc"] = c.bc == greens::BoundaryCondition::Dirichlet ? "dirichlet" : "navier";
  if (c.domain_kind == ProblemConfig::DomainKind::Ball2m) {
    j["domain"] = {{"kind", "ball"}, {"m", c.m}};
  } else {
    const Domain2D d = c.planar_domain();
    json dj;
    switch (d.kind()) {
      case Domain2D::Kind::Disc:
        dj = {{"kind", "disc"},
              {"radius", d.radius()},
              {"center", {d.center().x(), d.center().y()}}};
        break;
      case Domain2D::Kind::Rectangle:
        dj = {{"kind", "rectangle"},
              {"xmin", d.bbox_lo().x()},
              {"xmax", d.bbox_hi().x()},
              {"ymin", d.bbox_lo().y()},
              {"ymax", d.bbox_hi().y()}};
        break;
      case Domain2D::Kind::Annulus:
        dj = {{"kind", "annulus"},
              {"r_inner", d.inner_radius()},
              {"r_outer", d.radius()},
              {"center", {d.center().x(), d.center().y()}}};
        break;
      case Domain2D::Kind::Polygon: {
        json vs = json::array();
        for (const auto& v : d.vertices()) vs.push_back({v.x(), v.y()});
        dj = {{"kind", "polygon"}, {"vertices", vs}};
        break;
      }
    }
    dj["h"] = c.h;
    j["domain"] = dj;
  }
  j["potential"] = c.potential_spec;
  j["eps"] = c.eps;
  if (!c.eps_sweep.empty()) j["eps_sweep"] = c.eps_sweep;
  j["delta0"] = c.delta0;
  j["seed"] = c.seed;
  if (!c.seed_xi.empty()) j["seed_xi"] = c.seed_xi;
  j["green_method"] = c.green_method;
  j["out_dir"] = c.out_dir;
  j["tolerances"] = {{"grad", c.tol.grad},
                     {"multiplier", c.tol.multiplier},
                     {"quad_rel", c.tol.quad_rel},
                     {"fixed_point", c.tol.fixed_point}};
  j["solver"] = {{"R0", c.solver.R0},
                 {"max_iterations", c.solver.max_iterations},
                 {"residual_mode", c.solver.residual_mode},
                 {"h_solve", c.solver.h_solve},
                 {"truncation_degree", c.solver.truncation_degree}};
  return j;
}

greens::GreenModel make_green_model(const ProblemConfig& c) {
  std::string method = c.green_method;
  if (method == "auto") {
    if (c.domain_kind == ProblemConfig::DomainKind::Ball2m)
      method = c.bc == greens::BoundaryCondition::Navier && c.m == 2 ? "navier" : "boggio";
    else if (c.planar_domain().kind() == Domain2D::Kind::Disc &&
             c.planar_domain().radius() == 1.0 && c.planar_domain().center().norm() == 0.0)
      method = "disc_images";
    else
      method = "grid2d";
  }
  if (method == "disc_images") return greens::GreenModel::disc_images();
  if (method == "boggio") return greens::GreenModel::boggio_ball(c.m);
  if (method == "navier")
    return greens::GreenModel::navier_ball4(c.solver.truncation_degree);
  if (method == "grid2d") return greens::GreenModel::grid2d(c.planar_domain(), c.h);
  throw ConfigError("unknown green_method '" + method + "'");
}

json load_preset(const std::string& name, const std::string& preset_dir) {
  std::vector<std::string> candidates;
  if (!preset_dir.empty()) candidates.push_back(preset_dir);
  if (const char* env = std::getenv("LIOUVILLE_PRESET_DIR")) candidates.push_back(env);
  const std::string compiled = LIOUVILLE_PRESET_DIR;
  if (!compiled.empty()) candidates.push_back(compiled);
  candidates.push_back("presets");
  for (const auto& dir : candidates) {
    const auto path = std::filesystem::path(dir) / (name + ".json");
    std::ifstream f(path);
    if (f) {
      json j;
      try {
        f >> j;
      } catch (const std::exception& e) {
        throw ConfigError("preset parse error in " + path.string() + ": " + e.what());
      }
      return j;
    }
  }
  throw ConfigError("preset '" + name + "' not found");
}

}  // namespace liouville

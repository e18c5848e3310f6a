#include "sobolev/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "sobolev/errors.hpp"

namespace sobolev::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open for writing: " + path.string());
  return f;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_grid_csv(const calculus::GridFunction& u, const std::filesystem::path& path) {
  auto f = open_out(path);
  const int d = u.ball->spec().coord_dim();
  for (int k = 0; k < d; ++k) f << "x" << k << ",";
  f << "value\n";
  for (cayley::VertexIndex i = 0; i < u.ball->size(); ++i) {
    for (auto c : u.ball->element(i)) f << c << ",";
    f << format_double(u.values[i]) << "\n";
  }
}

void write_edge_csv(const calculus::EdgeFunction& a, const std::filesystem::path& path) {
  auto f = open_out(path);
  const int d = a.ball->spec().coord_dim();
  for (int k = 0; k < d; ++k) f << "from_x" << k << ",";
  for (int k = 0; k < d; ++k) f << "to_x" << k << ",";
  f << "value\n";
  const auto& edges = a.ball->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (auto c : a.ball->element(edges[e].tail)) f << c << ",";
    for (auto c : a.ball->element(edges[e].head)) f << c << ",";
    f << format_double(a.values[e]) << "\n";
  }
}

void write_ball_csv(const cayley::CayleyBall& ball, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << "index,";
  const int d = ball.spec().coord_dim();
  for (int k = 0; k < d; ++k) f << "x" << k << ",";
  f << "distance\n";
  for (cayley::VertexIndex i = 0; i < ball.size(); ++i) {
    f << i << ",";
    for (auto c : ball.element(i)) f << c << ",";
    f << ball.distance(i) << "\n";
  }
}

void write_decay_csv(const cutoff::DecayTable& table, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << "R,loglog_ratio,norm,kind\n";
  for (const auto& row : table.rows)
    f << format_double(row.R) << "," << format_double(row.loglog_ratio) << ","
      << format_double(row.value) << "," << row.kind << "\n";
}

void write_decay_plot(const cutoff::DecayTable& table, const std::string& kind,
                      const std::filesystem::path& path) {
  auto f = open_out(path);
  for (const auto& row : table.rows)
    if (row.kind == kind && row.value > 0)
      f << format_double(row.loglog_ratio) << " " << format_double(std::log(row.value)) << "\n";
}

void write_tail_csv(const variational::TailProfile& prof, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << "radius,mu,nu\n";
  for (std::size_t i = 0; i < prof.radii.size(); ++i)
    f << format_double(prof.radii[i]) << "," << format_double(prof.mu[i]) << ","
      << format_double(prof.nu[i]) << "\n";
}

void write_json(const json& j, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << j.dump(2) << "\n";
}

calculus::GridFunction read_grid_csv(const cayley::BallPtr& ball,
                                     const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open: " + path.string());
  std::string line;
  std::getline(f, line);  // header
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ball->size());
  const int d = ball->spec().coord_dim();
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    cayley::GroupElement e;
    for (int k = 0; k < d; ++k) {
      std::getline(ss, cell, ',');
      e.push_back(std::stoll(cell));
    }
    std::getline(ss, cell, ',');
    auto idx = ball->index_of(e);
    if (!idx) throw UsageError("read_grid_csv: coordinates outside the ball in " + path.string());
    v[*idx] = std::stod(cell);
  }
  return calculus::GridFunction(ball, std::move(v));
}

namespace {

const std::vector<std::string> kConfigKeys = {"group", "N",    "p",        "q",       "radius",
                                              "init",  "seed", "tol_grad", "max_iter"};

}  // namespace

variational::MinimizationConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw UsageError("config: malformed line: " + line);
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end())
      throw UsageError("config: unknown key: " + key);
    if (kv.count(key)) throw UsageError("config: duplicate key: " + key);
    kv[key] = val;
  }
  for (const auto& key : kConfigKeys)
    if (!kv.count(key)) throw UsageError("config: missing key: " + key);

  variational::MinimizationConfig cfg;
  const std::string group = kv["group"];
  const int N = std::stoi(kv["N"]);
  if (group == "lattice") {
    cfg.spec = cayley::GroupSpec::lattice(N);
  } else if (group == "heisenberg") {
    if (N != 4)
      throw UsageError("config: heisenberg has homogeneous dimension 4; set N = 4");
    cfg.spec = cayley::GroupSpec::heisenberg();
  } else {
    throw UsageError("config: group must be 'lattice' or 'heisenberg', got: " + group);
  }
  cfg.p = std::stod(kv["p"]);
  cfg.q = std::stod(kv["q"]);
  cfg.domain_radius = std::stoi(kv["radius"]);
  if (kv["init"] == "radial-bump")
    cfg.init = variational::InitKind::RadialBump;
  else if (kv["init"] == "random")
    cfg.init = variational::InitKind::Random;
  else
    throw UsageError("config: init must be 'radial-bump' or 'random', got: " + kv["init"]);
  cfg.seed = std::stoull(kv["seed"]);
  cfg.tol_grad = std::stod(kv["tol_grad"]);
  cfg.max_iter = std::stoi(kv["max_iter"]);
  if (const char* cap = std::getenv("SOBOLEV_VERTEX_CAP")) cfg.vertex_cap = std::atoll(cap);
  cfg.validate();
  return cfg;
}

variational::MinimizationConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

json config_echo(const variational::MinimizationConfig& cfg) {
  json j;
  j["group"] = cfg.spec.kind == cayley::GroupKind::IntegerLattice ? "lattice" : "heisenberg";
  j["N"] = cfg.spec.homogeneous_dim();
  j["p"] = cfg.p;
  j["q"] = cfg.q;
  j["radius"] = cfg.domain_radius;
  j["init"] = cfg.init == variational::InitKind::RadialBump ? "radial-bump" : "random";
  j["seed"] = cfg.seed;
  j["tol_grad"] = cfg.tol_grad;
  j["max_iter"] = cfg.max_iter;
  return j;
}

RunManifest::RunManifest(std::string command, const std::filesystem::path& out_dir)
    : out_dir_(out_dir) {
  std::filesystem::create_directories(out_dir_);
  j_["command"] = std::move(command);
  std::time_t t = 0;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
    t = static_cast<std::time_t>(std::atoll(sde));
  else
    t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  j_["timestamp"] = buf;
  j_["versions"] = {{"artifact", "0.1.0"},
                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                  std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)}};
  j_["outputs"] = json::array();
  j_["status"] = "incomplete";
}

void RunManifest::set_config(const json& cfg) { j_["config"] = cfg; }
void RunManifest::set_seed(std::uint64_t seed) { j_["seed"] = seed; }
void RunManifest::add_output(const std::filesystem::path& p) {
  j_["outputs"].push_back(p.filename().string());
}
void RunManifest::set_summary(const json& s) { j_["summary"] = s; }
void RunManifest::set_status(const std::string& status) { j_["status"] = status; }

void RunManifest::write() {
  auto f = open_out(out_dir_ / "manifest.json");
  f << j_.dump(2) << "\n";
}

}  // namespace sobolev::io

#include "fp/trajectory_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace fp {

namespace {

constexpr char kMagic[8] = {'F', 'P', 'T', 'R', 'J', '0', '0', '1'};
constexpr int kFormatVersion = 1;

using json = nlohmann::json;

void write_raw(std::ostream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_raw(std::istream& is, void* p, std::size_t n) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!is) throw std::runtime_error("trajectory file truncated");
}

json flow_to_json(const FlowConfig& c) {
  json j{{"integrator", to_string(c.integrator)},
         {"step_size", c.step_size},
         {"total_steps", c.total_steps},
         {"checkpoint_stride", c.checkpoint_stride},
         {"seed", c.seed}};
  if (c.trajectory_bound) j["trajectory_bound"] = *c.trajectory_bound;
  return j;
}

FlowConfig flow_from_json(const json& j) {
  FlowConfig c;
  c.integrator = integrator_from_string(j.at("integrator").get<std::string>());
  c.step_size = j.at("step_size").get<double>();
  c.total_steps = j.at("total_steps").get<std::int64_t>();
  c.checkpoint_stride = j.at("checkpoint_stride").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("trajectory_bound")) c.trajectory_bound = j.at("trajectory_bound").get<double>();
  return c;
}

}  // namespace

void save_trajectory(const std::string& path, const TrajectoryRecord& record) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open trajectory file for writing: " + path);

  const std::size_t n = record.checkpoints.empty() ? network_size(record.spec)
                                                   : record.checkpoints.front().theta.size();
  json header{{"format_version", kFormatVersion},
              {"n_params", n},
              {"n_checkpoints", record.checkpoints.size()},
              {"spec", {{"widths", record.spec.widths}, {"activation", to_string(record.spec.activation)}}},
              {"loss", {{"family", to_string(record.loss.family)}, {"p", record.loss.p}}},
              {"flow", flow_to_json(record.config)},
              {"trivial_dynamics", record.trivial_dynamics},
              {"bound_exceeded", record.bound_exceeded},
              {"checkpoint_block", "t:f64 loss:f64 theta:f64[n_params] dtheta_dt:f64[n_params] flags:u32"}};
  const std::string htext = header.dump();

  write_raw(os, kMagic, sizeof(kMagic));
  const std::uint64_t hlen = htext.size();
  write_raw(os, &hlen, sizeof(hlen));
  write_raw(os, htext.data(), htext.size());

  for (const Checkpoint& cp : record.checkpoints) {
    if (cp.theta.size() != n || cp.dtheta_dt.size() != n)
      throw std::runtime_error("checkpoint block size mismatch");
    write_raw(os, &cp.t, sizeof(double));
    write_raw(os, &cp.loss, sizeof(double));
    write_raw(os, cp.theta.data(), n * sizeof(double));
    write_raw(os, cp.dtheta_dt.data(), n * sizeof(double));
    write_raw(os, &cp.flags, sizeof(std::uint32_t));
  }
  if (!os) throw std::runtime_error("trajectory write failed: " + path);
}

TrajectoryRecord load_trajectory(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open trajectory file: " + path);

  char magic[8];
  read_raw(is, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a trajectory file: " + path);

  std::uint64_t hlen = 0;
  read_raw(is, &hlen, sizeof(hlen));
  std::string htext(hlen, '\0');
  read_raw(is, htext.data(), hlen);
  const json header = json::parse(htext);
  if (header.at("format_version").get<int>() != kFormatVersion)
    throw std::runtime_error("unsupported trajectory format version");

  TrajectoryRecord rec;
  rec.spec.widths = header.at("spec").at("widths").get<std::vector<int>>();
  rec.spec.activation = activation_from_string(header.at("spec").at("activation").get<std::string>());
  rec.loss.family = loss_family_from_string(header.at("loss").at("family").get<std::string>());
  rec.loss.p = header.at("loss").at("p").get<double>();
  rec.config = flow_from_json(header.at("flow"));
  rec.trivial_dynamics = header.at("trivial_dynamics").get<bool>();
  rec.bound_exceeded = header.at("bound_exceeded").get<bool>();

  const std::size_t n = header.at("n_params").get<std::size_t>();
  const std::size_t count = header.at("n_checkpoints").get<std::size_t>();
  rec.checkpoints.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    Checkpoint& cp = rec.checkpoints[c];
    read_raw(is, &cp.t, sizeof(double));
    read_raw(is, &cp.loss, sizeof(double));
    cp.theta.resize(n);
    cp.dtheta_dt.resize(n);
    read_raw(is, cp.theta.data(), n * sizeof(double));
    read_raw(is, cp.dtheta_dt.data(), n * sizeof(double));
    read_raw(is, &cp.flags, sizeof(std::uint32_t));
  }
  return rec;
}

}  // namespace fp

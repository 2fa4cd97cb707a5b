#include "spinmf/error.hpp"
#include "spinmf/pipeline.hpp"

#include <functional>

namespace spinmf {

namespace {

NetworkSpec make_spec(Topology topology, int n, CouplingProfile profile = CouplingProfile::Uniform,
                      std::optional<Bias> bias = std::nullopt) {
  NetworkSpec s;
  s.topology = topology;
  s.n = n;
  s.coupling_profile = profile;
  s.bias = bias;
  return s;
}

std::vector<SweepEntry> sizes(Topology topology, std::initializer_list<int> ns,
                              CouplingProfile profile = CouplingProfile::Uniform) {
  std::vector<SweepEntry> out;
  for (int n : ns) {
    NetworkSpec s = make_spec(topology, n, profile);
    out.push_back({s.label(), s});
  }
  return out;
}

std::vector<SweepEntry> biases(int n, int node, std::initializer_list<double> magnitudes) {
  std::vector<SweepEntry> out;
  for (double b : magnitudes) {
    NetworkSpec s = make_spec(Topology::Ring, n, CouplingProfile::Uniform, Bias{node, b});
    out.push_back({s.label(), s});
  }
  return out;
}

struct Preset {
  const char* name;
  const char* description;
  std::function<std::vector<SweepEntry>()> entries;
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"fig3a", "uniform XX chains, N = 100..150 (11 sizes)",
       [] { return sizes(Topology::Chain, {100, 102, 106, 108, 112, 126, 130, 136, 138, 148, 150}); }},
      {"fig3d", "uniform XX chains, N = 700..796 (14 sizes)",
       [] {
         return sizes(Topology::Chain, {700, 708, 718, 726, 732, 738, 742, 750, 756, 760, 768, 772, 786, 796});
       }},
      {"fig4", "uniform and engineered chains side by side (9 sizes)",
       [] {
         std::vector<SweepEntry> out;
         for (int n : {105, 505, 506, 106, 508, 700, 545, 555, 581}) {
           NetworkSpec u = make_spec(Topology::Chain, n);
           NetworkSpec e = make_spec(Topology::Chain, n, CouplingProfile::Engineered);
           out.push_back({u.label(), u});
           out.push_back({e.label(), e});
         }
         return out;
       }},
      {"fig5a", "uniform XX chains, N = 105..149 (5 sizes)",
       [] { return sizes(Topology::Chain, {105, 115, 119, 129, 149}); }},
      {"fig5c", "uniform XX rings, N = 100..148 (5 sizes)",
       [] { return sizes(Topology::Ring, {100, 108, 112, 136, 148}); }},
      {"fig5e", "uniform XX rings, N = 102..140 (5 sizes)",
       [] { return sizes(Topology::Ring, {102, 126, 130, 138, 140}); }},
      {"fig5f", "uniform XX rings, N = 102..150 (7 sizes)",
       [] { return sizes(Topology::Ring, {102, 106, 126, 130, 138, 140, 150}); }},
      {"fig6a", "ring N = 102, bias 0..10 on node 100",
       [] { return biases(102, 100, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}); }},
      {"fig6b", "ring N = 102, bias 0, 2, 3, 4, 6, 8, 10 on node 100",
       [] { return biases(102, 100, {0, 2, 3, 4, 6, 8, 10}); }},
      {"fig6c", "ring N = 102, bias 0..100 on node 100",
       [] { return biases(102, 100, {0, 5, 10, 20, 50, 100}); }},
      {"fig6e", "ring N = 500, bias 0..100 on node 100",
       [] { return biases(500, 100, {0, 1, 5, 10, 50, 100}); }},
  };
  return table;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& p : presets()) out.push_back({p.name, p.description});
  return out;
}

SweepSpec make_preset(const std::string& name, const std::filesystem::path& output_dir,
                      const AnalysisOptions& options) {
  for (const auto& p : presets()) {
    if (name != p.name) continue;
    SweepSpec sweep;
    sweep.entries = p.entries();
    sweep.options = options;
    sweep.output_dir = output_dir;
    return sweep;
  }
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + std::string(p.name);
  fail(ErrorKind::Argument, "unknown preset '" + name + "'; available presets: " + known);
}

}  // namespace spinmf

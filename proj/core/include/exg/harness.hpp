#ifndef EXG_HARNESS_HPP
#define EXG_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace exg {

// flat key = value configuration, '#' comments
using Config = std::map<std::string, std::string>;
Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);
void apply_overrides(Config& config, const std::vector<std::string>& key_eq_value);

double config_get(const Config& c, const std::string& key, double fallback);
int64_t config_get_int(const Config& c, const std::string& key, int64_t fallback);
std::vector<double> config_get_list(const Config& c, const std::string& key,
                                    const std::vector<double>& fallback);

struct CheckRecord {
  std::string check;
  std::string params;      // compact key=value summary
  double statistic = 0.0;  // measured value
  double bound = 0.0;      // the pinned tolerance/threshold it is tested against
  bool pass = false;
  bool statistical = false;  // false: machine-precision identity
};

struct RunManifest {
  std::string preset;
  Config config;
  uint64_t master_seed = 0;
  int replicas = 0;
  std::string version;
  double wall_clock_s = 0.0;
  uint64_t events_total = 0;
  std::vector<CheckRecord> checks;
  bool all_passed() const;
  int exit_code() const;  // 0 pass, 2 statistical fail, 3 identity fail
  std::string to_json() const;
};

// replicas executed across a worker pool; the result vector is indexed by
// replica and reduced in index order, so the outcome is independent of the
// worker count
std::vector<std::vector<double>> run_replicas(
    int count, int workers,
    const std::function<std::vector<double>(int replica)>& body);

// presets (one per experiment family; the acceptance criteria are all
// computed through these)
RunManifest run_preset(const std::string& name, const Config& overrides,
                       const std::string& out_dir);
std::vector<std::string> preset_names();

// writes manifest.json, results.csv and plotdata/ under
// out_dir/<preset>-<seed>-<timestamp>/ and returns the run directory
std::string persist_run(const RunManifest& manifest, const std::string& out_dir,
                        const std::vector<std::pair<std::string, std::string>>& extra_files);

std::string manifest_summary(const RunManifest& manifest);

}  // namespace exg

#endif

#include "llbcs/report.hpp"

#include <json.hpp>
#include <sstream>

#include "llbcs/csv.hpp"

namespace llbcs {

using nlohmann::json;

std::string sweep_csv_text(const SweepResult& sweep) {
  std::ostringstream os;
  os << "sinr_db,method,rmse_eq28_s,rmse_std_s,trials,k\n";
  const int k = sweep.config.channel.k;
  for (std::size_t si = 0; si < sweep.sinr_db.size(); ++si) {
    for (std::size_t mi = 0; mi < sweep.methods.size(); ++mi) {
      const SweepCell& c = sweep.cell(si, mi);
      os << format_double(c.sinr_db) << ',' << method_name(c.method) << ','
         << format_double(c.rmse.flat) << ','
         << format_double(c.rmse.conventional) << ',' << sweep.trials << ','
         << k << '\n';
    }
  }
  return os.str();
}

std::string sweep_json_text(const SweepResult& sweep) {
  json j;
  j["config"] = json::parse(config_to_json_text(sweep.config));
  j["sinr_db"] = sweep.sinr_db;
  std::vector<std::string> names;
  for (Method m : sweep.methods) names.push_back(method_name(m));
  j["methods"] = names;
  j["trials"] = sweep.trials;

  json records = json::array();
  const std::size_t trials = static_cast<std::size_t>(sweep.trials);
  for (std::size_t task = 0; task < sweep.records.size(); ++task) {
    const TrialResult& r = sweep.records[task];
    const std::size_t cell = task / trials;
    const std::size_t si = cell / sweep.methods.size();
    records.push_back({{"sinr_db", sweep.sinr_db[si]},
                       {"method", r.method},
                       {"trial", task % trials},
                       {"seed", r.seed},
                       {"true_delays_s", r.true_delays_s},
                       {"est_delays_s", r.est_delays_s},
                       {"converged", r.converged},
                       {"iterations", r.iterations}});
  }
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

void write_sweep_outputs(const std::filesystem::path& dir,
                         const SweepResult& sweep) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "sweep.csv", sweep_csv_text(sweep));
  write_text_file(dir / "sweep_records.json", sweep_json_text(sweep));
  write_text_file(dir / "resolved_config.json",
                  config_to_json_text(sweep.config));
}

}  // namespace llbcs

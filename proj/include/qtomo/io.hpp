#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qtomo/chronocyclic.hpp"
#include "qtomo/fock.hpp"
#include "qtomo/indicators.hpp"
#include "qtomo/timeseries.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

// ---- formatting & hashing ----
std::string fmt_g9(double v);  // 9 significant digits, %g style
std::string sha256_hex(const std::string& data);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// ---- density-matrix persistence ----
// JSON object {"dims": [...], "re": [[...]], "im": [[...]]}; export -> ingest
// -> export is byte-identical.
std::string density_to_json(const DensityMatrix& rho);
DensityMatrix parse_density_json(const std::string& text);
// Reads, repairs within tight tolerances (Hermitize when the asymmetry is
// below 1e-6, renormalize a trace within 1e-6 of one, clamp eigenvalues above
// -1e-6), and rejects anything further from a valid state.
DensityMatrix ingest_density(const std::string& path);

// ---- plot-ready emission ----
std::string tomogram_to_csv(const Tomogram& t);
Tomogram tomogram_from_csv(const std::string& text);
std::string tomogram2_to_csv(const Tomogram2& t);
std::string spin_tomogram_to_csv(const SpinTomogram& t);
std::string indicator_series_to_csv(const IndicatorSeries& s);
std::string tt_profile_to_csv(const TTProfile& p);
std::string spectrum_to_csv(const Spectrum& s);
std::string series_to_csv(const ScalarSeries& s);        // columns t,value
ScalarSeries series_from_csv(const std::string& text);

// ---- configuration ----
// key = value lines, '#' comments.  Values may carry a unit suffix that is
// folded into the number: frequencies given per 2pi (Hz_over_2pi, kHz_over_2pi,
// MHz_over_2pi, GHz_over_2pi, THz_over_2pi) become angular rad/s; times (fs,
// ps, ns, us, ms, s) become seconds; "pi" multiplies by pi.
double parse_quantity(const std::string& text);

class ConfigMap {
   public:
    void set(const std::string& key, const std::string& value);  // insert or replace
    // CLI-flag merge: keeps the existing (config-file) value on conflict and
    // records a warning instead.
    void set_default(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    unsigned long long get_seed(const std::string& key, unsigned long long fallback) const;
    std::vector<double> get_list(const std::string& key) const;  // comma separated

    std::string resolved_text() const;  // sorted key = value lines
    const std::vector<std::string>& warnings() const { return warnings_; }

   private:
    std::map<std::string, std::string> entries_;
    std::vector<std::string> warnings_;
};

ConfigMap parse_config(const std::string& text);
ConfigMap load_config(const std::string& path);

// ---- scenario orchestration ----
struct RunProduct {
    std::string name;   // file name within the run directory
    std::string bytes;  // exact file content
};
struct RunResult {
    std::string out_dir;
    std::vector<RunProduct> products;  // excludes the manifest itself
};

// Executes the scenario named by cfg["scenario"], writes every product plus
// resolved_config.txt and manifest.json (content hashes) into a fresh
// directory under out_root named by the config hash.
RunResult run_scenario(const ConfigMap& cfg, const std::string& out_root);
RunResult run_scenario_file(const std::string& config_path, const std::string& out_root);

}  // namespace qtomo

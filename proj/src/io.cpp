#include "qtomo/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qtomo/moments.hpp"
#include "qtomo/protocols.hpp"

namespace qtomo {

std::string fmt_g9(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of zero: "-0" would not survive a round trip
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// ---- SHA-256 ----

namespace {

constexpr uint32_t kSha256K[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

inline uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void sha256_block(uint32_t h[8], const unsigned char* p) {
    uint32_t w[64];
    for (int i = 0; i < 16; ++i)
        w[i] = (uint32_t)p[4 * i] << 24 | (uint32_t)p[4 * i + 1] << 16 |
               (uint32_t)p[4 * i + 2] << 8 | (uint32_t)p[4 * i + 3];
    for (int i = 16; i < 64; ++i) {
        uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6], hh = h[7];
    for (int i = 0; i < 64; ++i) {
        uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        uint32_t ch = (e & f) ^ (~e & g);
        uint32_t t1 = hh + s1 + ch + kSha256K[i] + w[i];
        uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        uint32_t mj = (a & b) ^ (a & c) ^ (b & c);
        uint32_t t2 = s0 + mj;
        hh = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
    uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                     0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    const unsigned char* p = (const unsigned char*)data.data();
    size_t n = data.size();
    size_t full = n / 64;
    for (size_t i = 0; i < full; ++i) sha256_block(h, p + 64 * i);
    unsigned char tail[128];
    size_t rem = n - 64 * full;
    std::memcpy(tail, p + 64 * full, rem);
    tail[rem] = 0x80;
    size_t padded = (rem + 9 <= 64) ? 64 : 128;
    std::memset(tail + rem + 1, 0, padded - rem - 9);
    uint64_t bits = (uint64_t)n * 8;
    for (int i = 0; i < 8; ++i) tail[padded - 1 - i] = (unsigned char)(bits >> (8 * i));
    sha256_block(h, tail);
    if (padded == 128) sha256_block(h, tail + 64);
    static const char* hex = "0123456789abcdef";
    std::string out(64, '0');
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) out[(size_t)(8 * i + j)] = hex[(h[i] >> (28 - 4 * j)) & 0xf];
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write file: " + path);
    out << content;
    if (!out) fail("write failed: " + path);
}

// ---- density-matrix persistence ----

std::string density_to_json(const DensityMatrix& rho) {
    // Hermitize before writing: (a_ij + conj(a_ji))/2 is bitwise symmetric in
    // re and antisymmetric in im, so the file parses back bitwise Hermitian
    // and the ingest-side Hermitization is an exact no-op (byte-stable round
    // trip).
    MatrixXcd m = 0.5 * (rho.mat() + rho.mat().adjoint());
    std::ostringstream out;
    out << "{\n  \"dims\": [";
    const auto& dims = rho.space().dims;
    for (size_t i = 0; i < dims.size(); ++i) out << (i ? ", " : "") << dims[i];
    out << "],\n";
    auto emit_part = [&](const char* key, bool imag) {
        out << "  \"" << key << "\": [\n";
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            out << "    [";
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                out << (c ? ", " : "") << fmt_g9(imag ? m(r, c).imag() : m(r, c).real());
            out << (r + 1 < m.rows() ? "],\n" : "]\n");
        }
        out << "  ]";
    };
    emit_part("re", false);
    out << ",\n";
    emit_part("im", true);
    out << "\n}\n";
    return out.str();
}

namespace {

MatrixXcd density_matrix_from_json(const std::string& text, ModeSpace& space_out) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail(std::string("density file is not valid JSON: ") + e.what());
    }
    if (!j.contains("dims") || !j.contains("re") || !j.contains("im"))
        fail("density file needs dims, re, im fields");
    std::vector<int> dims;
    for (const auto& d : j["dims"]) {
        int v = d.get<int>();
        if (v < 1) fail("density dims must be positive");
        dims.push_back(v);
    }
    space_out = ModeSpace(dims);
    long long n = space_out.total_dim();
    const auto& re = j["re"];
    const auto& im = j["im"];
    if ((long long)re.size() != n || (long long)im.size() != n)
        fail("density matrix size does not match dims");
    MatrixXcd m(n, n);
    for (long long r = 0; r < n; ++r) {
        if ((long long)re[(size_t)r].size() != n || (long long)im[(size_t)r].size() != n)
            fail("density matrix rows must all have length equal to the dimension");
        for (long long c = 0; c < n; ++c)
            m(r, c) = cplx(re[(size_t)r][(size_t)c].get<double>(),
                           im[(size_t)r][(size_t)c].get<double>());
    }
    return m;
}

}  // namespace

DensityMatrix parse_density_json(const std::string& text) {
    ModeSpace space;
    MatrixXcd m = density_matrix_from_json(text, space);
    double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym >= 1e-6)
        fail("density matrix asymmetry " + fmt_g9(asym) + " exceeds the 1e-6 repair limit");
    m = 0.5 * (m + m.adjoint()).eval();
    double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-6)
        fail("density matrix trace " + fmt_g9(tr) + " is more than 1e-6 away from one");
    // Drift at or below 1e-8 is indistinguishable from the 9-digit export
    // rounding; leave those bytes untouched so export -> ingest -> export is
    // the identity.  Larger drift (still under 1e-6) gets renormalized.
    if (std::abs(tr - 1.0) > 1e-8) m /= tr;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    double lo = es.eigenvalues().minCoeff();
    if (lo < -1e-6)
        fail("density matrix has eigenvalue " + fmt_g9(lo) + " below the -1e-6 repair limit");
    if (lo < -1e-12) {  // below solver roundoff: clamp and rebuild
        VectorXd lam = es.eigenvalues().cwiseMax(0.0);
        lam /= lam.sum();
        m = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    }
    return DensityMatrix(space, m);
}

DensityMatrix ingest_density(const std::string& path) {
    return parse_density_json(read_text_file(path));
}

// ---- CSV emission ----

std::string tomogram_to_csv(const Tomogram& t) {
    std::ostringstream out;
    out << "theta,x,w\n";
    std::vector<double> xs = t.grid.xs();
    for (size_t ti = 0; ti < t.thetas().size(); ++ti)
        for (int xi = 0; xi < t.grid.n_x; ++xi)
            out << fmt_g9(t.thetas()[ti]) << ',' << fmt_g9(xs[(size_t)xi]) << ','
                << fmt_g9(t.values((Eigen::Index)ti, xi)) << '\n';
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

double to_double(const std::string& s) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
        if (pos != s.size()) fail("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail("malformed number in CSV: '" + s + "'");
    }
}

}  // namespace

Tomogram tomogram_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "theta,x,w")
        fail("tomogram CSV must start with header theta,x,w");
    std::vector<std::string> theta_keys;
    std::vector<std::vector<double>> rows;
    std::vector<double> xs_first, xs_cur;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 3) fail("tomogram CSV rows need 3 columns");
        if (theta_keys.empty() || f[0] != theta_keys.back()) {
            theta_keys.push_back(f[0]);
            rows.push_back({});
            xs_cur.clear();
        }
        xs_cur.push_back(to_double(f[1]));
        rows.back().push_back(to_double(f[2]));
        if (theta_keys.size() == 1) xs_first = xs_cur;
    }
    if (rows.empty()) fail("tomogram CSV has no data rows");
    int n_x = (int)xs_first.size();
    for (const auto& r : rows)
        if ((int)r.size() != n_x) fail("tomogram CSV blocks have unequal grid sizes");
    std::vector<double> thetas;
    for (const auto& k : theta_keys) thetas.push_back(to_double(k));
    Tomogram t;
    t.grid = QuadGrid(xs_first.front(), xs_first.back(), n_x, thetas);
    t.values.resize((Eigen::Index)rows.size(), n_x);
    for (size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < n_x; ++c) t.values((Eigen::Index)r, c) = rows[r][(size_t)c];
    return t;
}

std::string tomogram2_to_csv(const Tomogram2& t) {
    std::ostringstream out;
    out << "theta_a,theta_b,x_a,x_b,w\n";
    std::vector<double> xa = t.grid_a.xs(), xb = t.grid_b.xs();
    for (size_t ia = 0; ia < t.grid_a.thetas.size(); ++ia)
        for (size_t ib = 0; ib < t.grid_b.thetas.size(); ++ib) {
            const MatrixXd& s = t.slice((int)ia, (int)ib);
            for (int r = 0; r < t.grid_a.n_x; ++r)
                for (int c = 0; c < t.grid_b.n_x; ++c)
                    out << fmt_g9(t.grid_a.thetas[ia]) << ',' << fmt_g9(t.grid_b.thetas[ib]) << ','
                        << fmt_g9(xa[(size_t)r]) << ',' << fmt_g9(xb[(size_t)c]) << ','
                        << fmt_g9(s(r, c)) << '\n';
        }
    return out.str();
}

std::string spin_tomogram_to_csv(const SpinTomogram& t) {
    std::ostringstream out;
    out << "set";
    for (int q = 0; q < t.n_qubits; ++q) out << ",theta_" << q << ",phi_" << q;
    out << ",outcome,p\n";
    for (size_t s = 0; s < t.axis_sets.size(); ++s) {
        for (size_t o = 0; o < t.probs[s].size(); ++o) {
            out << s;
            for (int q = 0; q < t.n_qubits; ++q)
                out << ',' << fmt_g9(t.axis_sets[s][(size_t)q].first) << ','
                    << fmt_g9(t.axis_sets[s][(size_t)q].second);
            std::string bits(t.n_qubits, '0');
            for (int q = 0; q < t.n_qubits; ++q)
                if ((o >> (t.n_qubits - 1 - q)) & 1) bits[(size_t)q] = '1';
            out << ',' << bits << ',' << fmt_g9(t.probs[s][o]) << '\n';
        }
    }
    return out.str();
}

std::string indicator_series_to_csv(const IndicatorSeries& s) {
    std::ostringstream out;
    out << s.axis_name;
    for (const auto& c : IndicatorSeries::column_names()) out << ',' << c;
    out << '\n';
    for (const auto& r : s.rows) {
        out << fmt_g9(r.axis);
        out << ',' << fmt_g9(r.xi_tei) << ',' << fmt_g9(r.xi_tei_prime) << ',' << fmt_g9(r.xi_ipr)
            << ',' << fmt_g9(r.xi_pcc) << ',' << fmt_g9(r.xi_bd) << ',' << fmt_g9(r.xi_svne) << ','
            << fmt_g9(r.xi_sle) << ',' << fmt_g9(r.xi_qmi) << ',' << fmt_g9(r.negativity) << ','
            << fmt_g9(r.d1) << ',' << fmt_g9(r.d2) << ',' << fmt_g9(r.d3) << ','
            << fmt_g9(r.delta) << '\n';
    }
    return out.str();
}

std::string tt_profile_to_csv(const TTProfile& p) {
    std::ostringstream out;
    out << "delta_t,w\n";
    long long n = p.grid.n_t;
    double dt = p.grid.dt();
    for (long long k = -(n - 1); k <= n - 1; ++k)
        out << fmt_g9(k * dt) << ',' << fmt_g9(p.values[(size_t)(k + n - 1)]) << '\n';
    return out.str();
}

std::string spectrum_to_csv(const Spectrum& s) {
    std::ostringstream out;
    out << "freq,power\n";
    for (size_t i = 0; i < s.freq.size(); ++i)
        out << fmt_g9(s.freq[i]) << ',' << fmt_g9(s.power[i]) << '\n';
    return out.str();
}

std::string series_to_csv(const ScalarSeries& s) {
    std::ostringstream out;
    out << "t,value\n";
    for (size_t i = 0; i < s.values.size(); ++i)
        out << fmt_g9((double)i * s.dt) << ',' << fmt_g9(s.values[i]) << '\n';
    return out.str();
}

ScalarSeries series_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) fail("empty series CSV");
    bool header = line.find("value") != std::string::npos || line.find("t,") == 0;
    ScalarSeries s;
    std::vector<double> ts;
    auto take = [&](const std::string& l) {
        if (l.empty()) return;
        auto f = split_csv_line(l);
        if (f.size() == 1) {
            ts.push_back((double)ts.size());
            s.values.push_back(to_double(f[0]));
        } else {
            ts.push_back(to_double(f[0]));
            s.values.push_back(to_double(f[1]));
        }
    };
    if (!header) take(line);
    while (std::getline(in, line)) take(line);
    if (s.values.size() < 2) fail("series CSV needs at least two samples");
    s.dt = ts[1] - ts[0];
    if (!(s.dt > 0.0)) fail("series CSV time column must increase");
    for (size_t i = 2; i < ts.size(); ++i)
        if (std::abs(ts[i] - ts[i - 1] - s.dt) > 1e-6 * std::max(1.0, std::abs(s.dt)))
            fail("series CSV must be uniformly sampled");
    return s;
}

// ---- configuration ----

double parse_quantity(const std::string& text) {
    size_t i = 0;
    while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
    size_t j = text.size();
    while (j > i && std::isspace((unsigned char)text[j - 1])) --j;
    std::string body = text.substr(i, j - i);
    if (body.empty()) fail("empty numeric value");
    char* end = nullptr;
    double v = std::strtod(body.c_str(), &end);
    if (end == body.c_str()) fail("malformed number: '" + body + "'");
    std::string unit(end);
    size_t k = 0;
    while (k < unit.size() && std::isspace((unsigned char)unit[k])) ++k;
    unit = unit.substr(k);
    if (unit.empty()) return v;
    const double two_pi = 2.0 * kPi;
    static const std::vector<std::pair<std::string, double>> units = {
        {"Hz_over_2pi", two_pi},          {"kHz_over_2pi", two_pi * 1e3},
        {"MHz_over_2pi", two_pi * 1e6},   {"GHz_over_2pi", two_pi * 1e9},
        {"THz_over_2pi", two_pi * 1e12},  {"fs", 1e-15},
        {"ps", 1e-12},                    {"ns", 1e-9},
        {"us", 1e-6},                     {"ms", 1e-3},
        {"s", 1.0},                       {"pi", kPi},
    };
    for (const auto& [name, scale] : units)
        if (unit == name) return v * scale;
    fail("unknown unit suffix '" + unit + "' in value '" + body + "'");
}

void ConfigMap::set(const std::string& key, const std::string& value) { entries_[key] = value; }

void ConfigMap::set_default(const std::string& key, const std::string& value) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        entries_[key] = value;
    } else if (it->second != value) {
        warnings_.push_back("config file value " + key + " = " + it->second +
                            " overrides flag value " + value);
    }
}

bool ConfigMap::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) fail("missing required config key: " + key);
    return it->second;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key) const {
    return parse_quantity(get_string(key));
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    return has(key) ? parse_quantity(get_string(key)) : fallback;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    double v = parse_quantity(get_string(key));
    int n = (int)std::llround(v);
    if (std::abs(v - n) > 1e-9) fail("config key " + key + " must be an integer");
    return n;
}

unsigned long long ConfigMap::get_seed(const std::string& key,
                                       unsigned long long fallback) const {
    if (!has(key)) return fallback;
    try {
        return std::stoull(get_string(key));
    } catch (const std::exception&) {
        fail("config key " + key + " must be a nonnegative integer seed");
    }
}

std::vector<double> ConfigMap::get_list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get_string(key));
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_quantity(tok));
    if (out.empty()) fail("config key " + key + " has an empty list");
    return out;
}

std::string ConfigMap::resolved_text() const {
    std::ostringstream out;
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
    return out.str();
}

ConfigMap parse_config(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail("config line " + std::to_string(line_no) + " is not key = value");
        auto trim = [](std::string s) {
            size_t x = s.find_first_not_of(" \t\r");
            size_t y = s.find_last_not_of(" \t\r");
            return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail("config line " + std::to_string(line_no) + " has an empty key");
        cfg.set(key, val);
    }
    return cfg;
}

ConfigMap load_config(const std::string& path) { return parse_config(read_text_file(path)); }

// ---- scenario orchestration ----

namespace {

QuadGrid grid_from_cfg(const ConfigMap& cfg, int default_n_theta) {
    double x_min = cfg.get_double("x_min", -10.0);
    double x_max = cfg.get_double("x_max", 10.0);
    int n_x = cfg.get_int("n_x", 1001);
    int n_theta = cfg.get_int("n_theta", default_n_theta);
    std::vector<double> thetas;
    for (int j = 0; j < n_theta; ++j) thetas.push_back(j * kPi / n_theta);
    return QuadGrid(x_min, x_max, n_x, thetas);
}

cplx alpha_from_cfg(const ConfigMap& cfg, const std::string& prefix) {
    const double root5 = std::sqrt(5.0);
    return {cfg.get_double(prefix + "_re", root5), cfg.get_double(prefix + "_im", root5)};
}

PureState single_mode_state_from_cfg(const ConfigMap& cfg, int n_max) {
    std::string state = cfg.get_string("state", "coherent");
    if (state == "coherent") return make_coherent(alpha_from_cfg(cfg, "alpha"), n_max);
    if (state == "pacs")
        return make_pacs(alpha_from_cfg(cfg, "alpha"), cfg.get_int("photon_added", 1), n_max);
    if (state == "fock") return make_fock(cfg.get_int("fock_n", 0), n_max);
    fail("unknown single-mode state recipe: " + state);
}

BECWell bec_from_cfg(const ConfigMap& cfg) {
    BECWell spec;
    spec.omega0 = cfg.get_double("omega0", 10.0);
    spec.omega1 = cfg.get_double("omega1", 3.0);
    spec.U = cfg.get_double("U", 1.0);
    spec.lambda = cfg.get_double("lambda", 4.0);
    return spec;
}

BellKind bell_from_cfg(const ConfigMap& cfg, const std::string& key) {
    std::string v = cfg.get_string(key, "psi_plus");
    if (v == "psi_plus") return BellKind::psi_plus;
    if (v == "phi_plus") return BellKind::phi_plus;
    fail("config key " + key + " must be psi_plus or phi_plus");
}

std::string hq_series_csv(const std::vector<HQPoint>& pts) {
    std::ostringstream out;
    out << "g0t,xi_tei,xi_tei_prime,xi_qmi\n";
    for (const auto& p : pts)
        out << fmt_g9(p.g0t) << ',' << fmt_g9(p.xi_tei) << ',' << fmt_g9(p.xi_tei_prime) << ','
            << fmt_g9(p.xi_qmi) << '\n';
    return out.str();
}

std::vector<RunProduct> scenario_tomogram(const ConfigMap& cfg) {
    std::vector<RunProduct> out;
    std::string system = cfg.get_string("system", "kerr_cubic");
    if (system == "kerr_cubic") {
        double chi1 = cfg.get_double("chi1", 0.0);
        double chi2 = cfg.get_double("chi2", 1.0);
        int n_max = cfg.get_int("n_max", 60);
        cplx alpha = alpha_from_cfg(cfg, "alpha");
        QuadGrid grid = grid_from_cfg(cfg, 32);
        if (cfg.get_string("gallery", "") == "cubic") {
            auto trev = revival_time(KerrCubic{chi1, chi2});
            if (!trev) fail("gallery needs couplings with a revival time");
            for (int ell : revival_gallery_divisors()) {
                Tomogram t = kerr_cubic_tomogram(alpha, chi1, chi2, *trev / ell, n_max, grid);
                out.push_back({"tomogram_trev_over_" + std::to_string(ell) + ".csv",
                               tomogram_to_csv(t)});
            }
        } else {
            double t = cfg.get_double("t");
            Tomogram tomo = kerr_cubic_tomogram(alpha, chi1, chi2, t, n_max, grid);
            out.push_back({"tomogram.csv", tomogram_to_csv(tomo)});
        }
        return out;
    }
    if (system == "bec_well") {
        BECWell spec = bec_from_cfg(cfg);
        double t = cfg.get_double("t");
        int n_max = cfg.get_int("n_max", 30);
        double x_half = cfg.get_double("x_half", 8.0);
        int n_x = cfg.get_int("n_x", 321);
        QuadGrid g(-x_half, x_half, n_x, {0.0});
        PureState psi = bec_analytic_state(alpha_from_cfg(cfg, "alpha_a"),
                                           alpha_from_cfg(cfg, "alpha_b"), 0, 0, spec, t, n_max,
                                           n_max);
        Tomogram2 tomo = tomogram_two_mode(psi, g, g);
        out.push_back({"section.csv", tomogram2_to_csv(tomo)});
        return out;
    }
    fail("tomogram scenario does not support system " + system);
}

std::vector<RunProduct> scenario_evolve(const ConfigMap& cfg) {
    std::string system = cfg.get_string("system", "kerr_cubic");
    double t = cfg.get_double("t", 0.0);
    DensityMatrix rho = [&]() -> DensityMatrix {
        if (system == "kerr_cubic") {
            int n_max = cfg.get_int("n_max", 60);
            PureState psi0 = single_mode_state_from_cfg(cfg, n_max);
            double chi1 = cfg.get_double("chi1", 1.0);
            double chi2 = cfg.get_double("chi2", 0.0);
            return to_density(evolve(psi0, KerrCubic{chi1, chi2}, t));
        }
        if (system == "bec_well") {
            int n_max = cfg.get_int("n_max", 24);
            PureState psi = bec_analytic_state(alpha_from_cfg(cfg, "alpha_a"),
                                               alpha_from_cfg(cfg, "alpha_b"),
                                               cfg.get_int("added_a", 0), cfg.get_int("added_b", 0),
                                               bec_from_cfg(cfg), t, n_max, n_max);
            return to_density(psi);
        }
        if (system == "nmr_spin") return nmr_rho_t(cfg.get_double("chi_s", 1.0), t);
        if (system == "double_jc") {
            int n_ph = cfg.get_int("n_ph_dim", 9);
            DoubleJC spec{cfg.get_double("chi_f", 1.0), cfg.get_double("chi0", 1.0),
                          cfg.get_double("g0", 1.0)};
            ModeSpace sp({n_ph, n_ph, 2, 2});
            Propagator prop(spec, sp);
            return to_density(prop.at(djc_initial(bell_from_cfg(cfg, "bell"), n_ph), t));
        }
        if (system == "double_tc") {
            int n_ph = cfg.get_int("n_ph_dim", 9);
            DoubleTC spec{cfg.get_double("chi_f", 1.0), cfg.get_double("chi0", 1.0),
                          cfg.get_double("g0", 1.0)};
            ModeSpace sp({n_ph, n_ph, 2, 2, 2, 2});
            Propagator prop(spec, sp);
            return to_density(prop.at(
                dtc_initial(bell_from_cfg(cfg, "bell"), bell_from_cfg(cfg, "bell2"), n_ph), t));
        }
        fail("evolve scenario does not support system " + system);
    }();
    return {{"density.json", density_to_json(rho)}};
}

std::vector<RunProduct> scenario_indicators(const ConfigMap& cfg) {
    std::string system = cfg.get_string("system", "bec_well");
    int xi_pairs = cfg.get_int("xi_pairs", 5);
    if (system == "bec_well") {
        BECWell spec = bec_from_cfg(cfg);
        int n_max = cfg.get_int("n_max", 24);
        double x_half = cfg.get_double("x_half", 8.0);
        int n_x = cfg.get_int("n_x", 201);
        QuadGrid grid(-x_half, x_half, n_x, xi_angle_grid(xi_pairs));
        IndicatorSeries series;
        series.axis_name = "t";
        for (double t : cfg.get_list("t_list")) {
            PureState psi = bec_analytic_state(alpha_from_cfg(cfg, "alpha_a"),
                                               alpha_from_cfg(cfg, "alpha_b"), 0, 0, spec, t,
                                               n_max, n_max);
            series.rows.push_back(indicator_row_for_pure(psi, grid, t));
        }
        return {{"indicators.csv", indicator_series_to_csv(series)}};
    }
    if (system == "double_jc" || system == "double_tc") {
        int n_instants = cfg.get_int("n_instants", 300);
        double step = cfg.get_double("step_pi_units", 0.02);
        int n_ph = cfg.get_int("n_ph_dim", 9);
        HQSeries s;
        if (system == "double_jc") {
            DoubleJC spec{cfg.get_double("chi_f", 1.0), cfg.get_double("chi0", 1.0),
                          cfg.get_double("g0", 1.0)};
            s = djc_series(spec, bell_from_cfg(cfg, "bell"), n_instants, step, xi_pairs, n_ph);
        } else {
            DoubleTC spec{cfg.get_double("chi_f", 1.0), cfg.get_double("chi0", 1.0),
                          cfg.get_double("g0", 1.0)};
            s = dtc_series(spec, bell_from_cfg(cfg, "bell"), bell_from_cfg(cfg, "bell2"),
                           n_instants, step, xi_pairs, n_ph);
        }
        return {{"field_series.csv", hq_series_csv(s.field)},
                {"atom_series.csv", hq_series_csv(s.atom)}};
    }
    if (system == "nmr_spin") {
        auto pts = nmr_series(cfg.get_double("chi_st_max", kPi / 8.0), cfg.get_int("n_points", 17));
        std::ostringstream csv;
        csv << "chi_st,var1,var2,sq1,sq2,negativity,xi_tei,xi_qmi\n";
        for (const auto& p : pts)
            csv << fmt_g9(p.chi_st) << ',' << fmt_g9(p.var1) << ',' << fmt_g9(p.var2) << ','
                << fmt_g9(p.sq1()) << ',' << fmt_g9(p.sq2()) << ',' << fmt_g9(p.neg) << ','
                << fmt_g9(p.xi_tei) << ',' << fmt_g9(p.xi_qmi) << '\n';
        return {{"nmr_series.csv", csv.str()}};
    }
    fail("indicators scenario does not support system " + system);
}

std::vector<RunProduct> scenario_sweep(const ConfigMap& cfg) {
    BECWell base;
    base.omega0 = cfg.get_double("omega0", 1.0);
    base.U = cfg.get_double("U", 1.0);
    base.lambda = cfg.get_double("lambda", 0.25);
    double lo = cfg.get_double("omega1_min", -0.99);
    double hi = cfg.get_double("omega1_max", 0.99);
    double step = cfg.get_double("omega1_step", 0.02);
    if (!(step > 0.0)) fail("omega1_step must be positive");
    std::vector<double> values;
    for (double v = lo; v <= hi + 1e-12; v += step) values.push_back(v);
    IndicatorSeries series = bec_indicator_sweep(
        base, cfg.get_int("N_sector", 4), cfg.get_int("k_state", 2), values,
        cfg.get_int("xi_pairs", 5), cfg.get_double("x_half", 6.0), cfg.get_int("n_x", 201));
    return {{"indicators.csv", indicator_series_to_csv(series)}};
}

std::vector<RunProduct> scenario_squeeze(const ConfigMap& cfg) {
    int q_max = cfg.get_int("q_max", 4);
    if (q_max < 1) fail("q_max must be at least 1");
    int n_max = cfg.get_int("n_max", 60);
    PureState psi0 = single_mode_state_from_cfg(cfg, n_max);
    double chi1 = cfg.get_double("chi1", 1.0);
    double chi2 = cfg.get_double("chi2", 0.0);
    double t = cfg.get_double("t", 0.0);
    PureState psi = evolve(psi0, KerrCubic{chi1, chi2}, t);

    double x_min = cfg.get_double("x_min", -10.0);
    double x_max = cfg.get_double("x_max", 10.0);
    int n_x = cfg.get_int("n_x", 1001);
    QuadGrid grid(x_min, x_max, n_x, union_quorum_thetas(2 * q_max));
    Tomogram tomo = tomogram_pure_single(psi, grid);

    std::ostringstream csv;
    csv << "kind,q,value,threshold,squeezed\n";
    auto row = [&](const std::string& kind, int q, double value, double threshold) {
        csv << kind << ',' << q << ',' << fmt_g9(value) << ',' << fmt_g9(threshold) << ','
            << (value < threshold ? 1 : 0) << '\n';
    };
    for (int q = 1; q <= q_max; ++q) {
        double hm = hong_mandel_moment(tomo, 0.0, q);
        row("hong_mandel", q, hm, hong_mandel_threshold(q, 0.5));
        SqueezeReport tg = hillery_dq(tomo, q, Quadrature::z1);
        row("hillery_tomogram", q, tg.value, tg.threshold);
        SqueezeReport st = hillery_dq(psi, q, Quadrature::z1);
        row("hillery_state", q, st.value, st.threshold);
    }
    row("entropic_theta0", 1, tomographic_entropy_slice(tomo, 0.0), entropic_threshold());
    row("entropic_theta_half_pi", 1, tomographic_entropy_slice(tomo, kPi / 2.0),
        entropic_threshold());
    return {{"squeeze.csv", csv.str()}};
}

std::vector<RunProduct> scenario_timeseries(const ConfigMap& cfg) {
    ScalarSeries series;
    if (cfg.has("series_file")) {
        series = series_from_csv(read_text_file(cfg.get_string("series_file")));
    } else {
        std::string synth = cfg.get_string("synth", "logistic");
        if (synth != "logistic") fail("unknown synthetic series: " + synth);
        double r = cfg.get_double("r", 4.0);
        int n = cfg.get_int("n", 20000);
        double x = cfg.get_double("x0", 0.6347);
        series.dt = 1.0;
        for (int i = 0; i < n; ++i) {
            series.values.push_back(x);
            x = r * x * (1.0 - x);
        }
    }
    unsigned long long seed = cfg.get_seed("seed", 12345);
    int tau = mi_delay(series);
    EmbedDimResult ed = embed_dim(series, tau, cfg.get_int("d_max", 8), 1000, seed);
    Embedding emb{tau, ed.d_emb};
    JacobianSet js = local_jacobians(series, emb, cfg.get_int("k_neighbors", 0), seed + 1);
    std::vector<std::pair<int, double>> pairs;
    std::ostringstream lcsv;
    lcsv << "L,lambda_L\n";
    int l_min = cfg.get_int("l_min", 25), l_max = cfg.get_int("l_max", 207),
        l_step = cfg.get_int("l_step", 14);
    for (int L = l_min; L <= l_max; L += l_step) {
        double lam = lambda_L(js, L, 100, seed + 2);
        pairs.push_back({L, lam});
        lcsv << L << ',' << fmt_g9(lam) << '\n';
    }
    LambdaFit fit = fit_lambda_inf(pairs);
    std::ostringstream j;
    j << "{\n  \"tau_d\": " << tau << ",\n  \"d_emb\": " << ed.d_emb
      << ",\n  \"saturated\": " << (ed.saturated ? "true" : "false")
      << ",\n  \"lambda_inf\": " << fmt_g9(fit.lambda_inf) << ",\n  \"m\": " << fmt_g9(fit.m)
      << ",\n  \"q\": " << fmt_g9(fit.q) << ",\n  \"fit_residual\": " << fmt_g9(fit.residual)
      << ",\n  \"jacobians_skipped\": " << js.n_skipped << "\n}\n";
    Spectrum spec = power_spectrum(series);
    return {{"lambda_L.csv", lcsv.str()},
            {"lambda_fit.json", j.str()},
            {"spectrum.csv", spectrum_to_csv(spec)}};
}

std::vector<RunProduct> scenario_chrono(const ConfigMap& cfg) {
    CombParams p = CombParams::experiment_values();
    if (cfg.has("omega_bar")) p.omega_bar = cfg.get_double("omega_bar");
    if (cfg.has("d_omega")) p.d_omega = cfg.get_double("d_omega");
    if (cfg.has("Omega_0")) p.Omega_0 = cfg.get_double("Omega_0");
    if (cfg.has("d_Omega")) p.d_Omega = cfg.get_double("d_Omega");
    if (cfg.has("n_window")) p.n_window = cfg.get_int("n_window", p.n_window);
    TTGrid g = TTGrid::defaults();
    if (cfg.has("t_max")) g.t_max = cfg.get_double("t_max");
    if (cfg.has("t_min")) g.t_min = cfg.get_double("t_min");
    if (cfg.has("n_t")) g.n_t = cfg.get_int("n_t", g.n_t);
    TTProfile wa = tt_tomogram(CombKind::alpha, p, g);
    TTProfile wb = tt_tomogram(CombKind::beta, p, g);
    double ea = chrono_eps_tei(wa), eb = chrono_eps_tei(wb);
    std::ostringstream j;
    j << "{\n  \"eps_tei_alpha\": " << fmt_g9(ea) << ",\n  \"eps_tei_beta\": " << fmt_g9(eb)
      << ",\n  \"norm_alpha\": " << fmt_g9(comb_norm_constant(CombKind::alpha, p))
      << ",\n  \"norm_beta\": " << fmt_g9(comb_norm_constant(CombKind::beta, p)) << "\n}\n";
    return {{"profile_alpha.csv", tt_profile_to_csv(wa)},
            {"profile_beta.csv", tt_profile_to_csv(wb)},
            {"chrono.json", j.str()}};
}

std::vector<RunProduct> scenario_ingest(const ConfigMap& cfg) {
    DensityMatrix rho = ingest_density(cfg.get_string("input"));
    return {{"density.json", density_to_json(rho)}};
}

}  // namespace

RunResult run_scenario(const ConfigMap& cfg, const std::string& out_root) {
    std::string scenario = cfg.get_string("scenario");
    std::vector<RunProduct> products;
    if (scenario == "tomogram")
        products = scenario_tomogram(cfg);
    else if (scenario == "evolve")
        products = scenario_evolve(cfg);
    else if (scenario == "indicators")
        products = scenario_indicators(cfg);
    else if (scenario == "sweep")
        products = scenario_sweep(cfg);
    else if (scenario == "squeeze")
        products = scenario_squeeze(cfg);
    else if (scenario == "timeseries")
        products = scenario_timeseries(cfg);
    else if (scenario == "chrono")
        products = scenario_chrono(cfg);
    else if (scenario == "ingest")
        products = scenario_ingest(cfg);
    else if (scenario == "none")
        products = {};
    else
        fail("unknown scenario: " + scenario);

    std::sort(products.begin(), products.end(),
              [](const RunProduct& a, const RunProduct& b) { return a.name < b.name; });
    std::string resolved = cfg.resolved_text();
    std::string cfg_hash = sha256_hex(resolved);
    std::filesystem::path dir = std::filesystem::path(out_root) / ("run_" + cfg_hash.substr(0, 12));
    std::filesystem::create_directories(dir);
    write_text_file((dir / "resolved_config.txt").string(), resolved);
    std::ostringstream manifest;
    manifest << "{\n  \"scenario\": \"" << scenario << "\",\n  \"config_sha256\": \"" << cfg_hash
             << "\",\n  \"outputs\": [";
    for (size_t i = 0; i < products.size(); ++i) {
        write_text_file((dir / products[i].name).string(), products[i].bytes);
        manifest << (i ? "," : "") << "\n    {\"file\": \"" << products[i].name
                 << "\", \"sha256\": \"" << sha256_hex(products[i].bytes)
                 << "\", \"bytes\": " << products[i].bytes.size() << "}";
    }
    manifest << (products.empty() ? "]\n}\n" : "\n  ]\n}\n");
    write_text_file((dir / "manifest.json").string(), manifest.str());
    return {dir.string(), std::move(products)};
}

RunResult run_scenario_file(const std::string& config_path, const std::string& out_root) {
    return run_scenario(load_config(config_path), out_root);
}

}  // namespace qtomo

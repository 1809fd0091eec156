#include "geomorph/output.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace geomorph {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
        return r;
    }
    return v;
}

std::ofstream open_out(const fs::path& path) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw OutputError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path.string());
    return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw OutputError("error while writing " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    close_checked(out, path);
}

std::string member_suffix(int member) {
    if (member < 0) return "";
    char buf[16];
    std::snprintf(buf, sizeof buf, "_m%02d", member);
    return buf;
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

} // namespace

const MetricRow& ExperimentReport::metric(const std::string& stage, const std::string& variable) const {
    for (const auto& m : metrics) {
        if (m.stage == stage && m.variable == variable) return m;
    }
    throw std::out_of_range("no metric for stage '" + stage + "' variable '" + variable + "'");
}

void write_raw_field(const ScalarField& field, const fs::path& path) {
    auto out = open_out(path);
    std::vector<std::uint64_t> words;
    words.reserve(field.size());
    for (double v : field.values()) words.push_back(to_little_endian(std::bit_cast<std::uint64_t>(v)));
    out.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
    close_checked(out, path);
}

ScalarField read_raw_field(const fs::path& path, const GridSpec& grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OutputError("cannot read " + path.string());
    std::vector<std::uint64_t> words(grid.size());
    in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
    if (in.gcount() != static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)) || in.peek() != EOF) {
        throw OutputError(path.string() + ": size does not match a " + std::to_string(grid.nx) + "x" +
                          std::to_string(grid.ny) + " field");
    }
    std::vector<double> values(words.size());
    for (std::size_t k = 0; k < words.size(); ++k) values[k] = std::bit_cast<double>(to_little_endian(words[k]));
    return ScalarField(grid, std::move(values));
}

ScalarField read_field_dump(const fs::path& raw_path) {
    fs::path sidecar = raw_path;
    sidecar.replace_extension(".json");
    std::ifstream in(sidecar);
    if (!in) throw OutputError("cannot read " + sidecar.string());
    const json h = json::parse(in);
    const GridSpec grid(h.at("nx").get<int>(), h.at("ny").get<int>(), h.at("lx").get<double>(), h.at("ly").get<double>());
    return read_raw_field(raw_path, grid);
}

void write_pgm(const ScalarField& field, const fs::path& path) {
    const GridSpec& g = field.grid();
    const double lo = field.min();
    const double hi = field.max();
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    std::ostringstream header;
    header << std::setprecision(17) << "P5\n# min " << lo << " max " << hi << "\n" << g.nx << ' ' << g.ny << "\n255\n";
    std::string pixels(g.size(), '\0');
    std::size_t p = 0;
    for (int j = g.ny - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx; ++i) {
            pixels[p++] = static_cast<char>(static_cast<unsigned char>(std::lround((field(i, j) - lo) * scale)));
        }
    }
    auto out = open_out(path);
    out << header.str();
    out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
    close_checked(out, path);
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OutputError("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md.data(), &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int k = 0; k < len; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
    return hex.str();
}

std::vector<ManifestEntry> emit_outputs(const ExperimentReport& report, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory " + dir.string());

    std::vector<std::string> written;
    auto record = [&](const fs::path& rel) { written.push_back(rel.generic_string()); };

    if (!report.config_json.empty()) {
        write_text(dir / "config.json", report.config_json);
        record("config.json");
    }

    for (const auto& f : report.fields) {
        const fs::path base = fs::path("fields") / f.stage / (f.name + member_suffix(f.member));
        const GridSpec& g = f.field.grid();
        write_raw_field(f.field, dir / base.string().append(".f64"));
        const json header = {{"name", f.name}, {"nx", g.nx}, {"ny", g.ny}, {"lx", g.lx},
                             {"ly", g.ly},     {"stage", f.stage}, {"member", f.member}};
        write_text(dir / base.string().append(".json"), header.dump(2) + "\n");
        write_pgm(f.field, dir / base.string().append(".pgm"));
        for (const char* ext : {".f64", ".json", ".pgm"}) record(base.string().append(ext));
    }

    if (!report.metrics.empty()) {
        std::ostringstream s;
        s << "stage,variable,mean_member_mse,ensemble_mean_mse\n";
        for (const auto& m : report.metrics) {
            s << m.stage << ',' << m.variable << ',' << csv_number(m.mean_member_mse) << ','
              << csv_number(m.ensemble_mean_mse) << '\n';
        }
        write_text(dir / "metrics.csv", s.str());
        record("metrics.csv");
    }

    if (!report.totals.empty()) {
        std::ostringstream s;
        s << "stage,member,mass,vorticity_total,buoyancy_integral\n";
        for (const auto& t : report.totals) {
            s << t.stage << ',' << t.member << ',' << csv_number(t.totals.mass) << ',' << csv_number(t.totals.vorticity)
              << ',' << csv_number(t.totals.buoyancy_integral) << '\n';
        }
        write_text(dir / "totals.csv", s.str());
        record("totals.csv");
    }

    for (const auto& t : report.traces) {
        const fs::path rel = fs::path("traces") / (t.stage + member_suffix(t.member) + ".csv");
        std::ostringstream s;
        t.trace.write_csv(s);
        write_text(dir / rel, s.str());
        record(rel);
    }

    std::sort(written.begin(), written.end());
    std::vector<ManifestEntry> entries;
    json artifacts = json::array();
    for (const auto& rel : written) {
        ManifestEntry e{rel, fs::file_size(dir / rel), sha256_file(dir / rel)};
        artifacts.push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
        entries.push_back(std::move(e));
    }
    const json manifest = {{"schema_version", 1}, {"artifacts", artifacts}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    return entries;
}

std::vector<ManifestEntry> read_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw OutputError("cannot read " + manifest_path.string());
    const json m = json::parse(in);
    std::vector<ManifestEntry> entries;
    for (const auto& a : m.at("artifacts")) {
        entries.push_back({a.at("path").get<std::string>(), a.at("bytes").get<std::uintmax_t>(), a.at("sha256").get<std::string>()});
    }
    return entries;
}

} // namespace geomorph

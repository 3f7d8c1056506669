#include "gmflou/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gmflou {

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_paths_csv(std::ostream& os, const PathEnsemble& ens) {
    std::string line = "t";
    for (std::size_t r = 0; r < ens.replicas; ++r) line += ",rep_" + std::to_string(r);
    os << line << '\n';
    for (std::size_t i = 0; i < ens.points(); ++i) {
        line = format_double(ens.times[i]);
        for (std::size_t r = 0; r < ens.replicas; ++r) {
            line += ',';
            line += format_double(ens.at(r, i));
        }
        os << line << '\n';
    }
}

void write_paths_gnuplot(std::ostream& os, const PathEnsemble& ens) {
    for (std::size_t r = 0; r < ens.replicas; ++r) {
        if (r > 0) os << "\n\n";
        os << "# rep_" << r << '\n';
        for (std::size_t i = 0; i < ens.points(); ++i) os << format_double(ens.times[i]) << ' ' << format_double(ens.at(r, i)) << '\n';
    }
}

void write_lambda_csv(std::ostream& os, const LambdaSample& sample) {
    os << "lambda\n";
    for (double l : sample.values) os << format_double(l) << '\n';
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

nlohmann::json sidecar(const nlohmann::json& config, std::uint64_t seed) {
    return {{"config", config}, {"seed", seed}, {"config_hash", hex64(fnv1a64(config.dump()))}, {"version", kVersion}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace gmflou

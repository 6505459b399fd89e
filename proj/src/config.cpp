#include "gkdcv/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gkdcv/error.hpp"

namespace gkdcv {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error("config", "invalid numeric value '" + value + "' for " + key);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error("config", "invalid integer value '" + value + "' for " + key);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw Error("config", "invalid boolean value '" + value + "' for " + key + " (use true/false)");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void PipelineConfig::validate() const {
    gabor.validate();
    block.validate();
    kernel.validate();
    if (support < 1 || support % 2 == 0) {
        throw Error("config", "gabor.support must be a positive odd integer");
    }
    if (!(rank_tol > 0.0)) throw Error("config", "rank_tol must be positive");
    if (image_height < 1 || image_width < 1) {
        throw Error("config", "image dimensions must be positive");
    }
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error("config", "line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "gabor.kmax") cfg.gabor.k_max = parse_double(key, value);
        else if (key == "gabor.spacing") cfg.gabor.spacing = parse_double(key, value);
        else if (key == "gabor.sigma") cfg.gabor.sigma = parse_double(key, value);
        else if (key == "gabor.scales") cfg.gabor.num_scales = parse_int(key, value);
        else if (key == "gabor.orientations") cfg.gabor.num_orientations = parse_int(key, value);
        else if (key == "gabor.support") cfg.support = parse_int(key, value);
        else if (key == "block.omega") cfg.block.omega = parse_int(key, value);
        else if (key == "block.side") cfg.block.block_side = parse_int(key, value);
        else if (key == "kernel.type") cfg.kernel.kind = parse_kernel_kind(value);
        else if (key == "kernel.normalize") cfg.kernel.normalize = parse_bool(key, value);
        else if (key == "kernel.sigma") cfg.kernel.rbf_sigma = parse_double(key, value);
        else if (key == "kernel.degree") cfg.kernel.poly_degree = parse_int(key, value);
        else if (key == "kernel.offset") cfg.kernel.poly_offset = parse_double(key, value);
        else if (key == "measure") cfg.measure = parse_measure(value);
        else if (key == "rank_tol") cfg.rank_tol = parse_double(key, value);
        else if (key == "image.height") cfg.image_height = parse_int(key, value);
        else if (key == "image.width") cfg.image_width = parse_int(key, value);
        else throw Error("config", "unknown key '" + key + "' at line " + std::to_string(line_no));
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", path + ": cannot open config file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const Error& e) {
        throw Error(e.category(), path + ": " + e.what());
    }
}

std::string serialize_config(const PipelineConfig& cfg) {
    std::ostringstream out;
    out << "image.height=" << cfg.image_height << "\n";
    out << "image.width=" << cfg.image_width << "\n";
    out << "gabor.kmax=" << format_double(cfg.gabor.k_max) << "\n";
    out << "gabor.spacing=" << format_double(cfg.gabor.spacing) << "\n";
    out << "gabor.sigma=" << format_double(cfg.gabor.sigma) << "\n";
    out << "gabor.scales=" << cfg.gabor.num_scales << "\n";
    out << "gabor.orientations=" << cfg.gabor.num_orientations << "\n";
    out << "gabor.support=" << cfg.support << "\n";
    out << "block.omega=" << cfg.block.omega << "\n";
    out << "block.side=" << cfg.block.block_side << "\n";
    out << "kernel.type=" << kernel_kind_name(cfg.kernel.kind) << "\n";
    out << "kernel.normalize=" << (cfg.kernel.normalize ? "true" : "false") << "\n";
    out << "kernel.sigma=" << format_double(cfg.kernel.rbf_sigma) << "\n";
    out << "kernel.degree=" << cfg.kernel.poly_degree << "\n";
    out << "kernel.offset=" << format_double(cfg.kernel.poly_offset) << "\n";
    out << "measure=" << measure_name(cfg.measure) << "\n";
    out << "rank_tol=" << format_double(cfg.rank_tol) << "\n";
    return out.str();
}

}  // namespace gkdcv

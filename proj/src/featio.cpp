#include "gkdcv/featio.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gkdcv/error.hpp"
#include "gkdcv/image.hpp"

namespace gkdcv {

namespace {

static_assert(std::endian::native == std::endian::little,
              "feature file formats assume a little-endian host");

void write_all(std::ofstream& out, const void* data, std::size_t size, const std::string& path) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw Error("io", path + ": write failed");
}

void read_all(std::ifstream& in, void* data, std::size_t size, const std::string& path) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in.gcount()) != size) throw Error("format", path + ": truncated file");
}

}  // namespace

void write_feature_matrix(const Eigen::MatrixXd& rows_by_dim, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", path + ": cannot open for writing");
    out.write("FEATMAT1", 8);
    const std::uint32_t rows = static_cast<std::uint32_t>(rows_by_dim.rows());
    const std::uint32_t cols = static_cast<std::uint32_t>(rows_by_dim.cols());
    write_all(out, &rows, 4, path);
    write_all(out, &cols, 4, path);
    for (Eigen::Index r = 0; r < rows_by_dim.rows(); ++r) {
        for (Eigen::Index c = 0; c < rows_by_dim.cols(); ++c) {
            const double v = rows_by_dim(r, c);
            write_all(out, &v, sizeof(double), path);
        }
    }
}

Eigen::MatrixXd read_feature_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", path + ": cannot open");
    char magic[8];
    read_all(in, magic, 8, path);
    if (std::memcmp(magic, "FEATMAT1", 8) != 0) throw Error("format", path + ": not a FEATMAT1 file");
    std::uint32_t rows = 0, cols = 0;
    read_all(in, &rows, 4, path);
    read_all(in, &cols, 4, path);
    Eigen::MatrixXd m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c) {
            double v;
            read_all(in, &v, sizeof(double), path);
            m(r, c) = v;
        }
    }
    return m;
}

void write_feature_sidecar(const std::vector<FeatureRowInfo>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("io", path + ": cannot open for writing");
    for (const auto& r : rows) out << r.row << "," << r.source_path << "," << r.class_id << "\n";
    if (!out) throw Error("io", path + ": write failed");
}

std::vector<FeatureRowInfo> read_feature_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", path + ": cannot open");
    std::vector<FeatureRowInfo> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto first = line.find(',');
        const auto last = line.rfind(',');
        if (first == std::string::npos || last == first) {
            throw Error("format", path + ":" + std::to_string(line_no) + ": expected row,path,class");
        }
        FeatureRowInfo info;
        try {
            info.row = std::stoi(line.substr(0, first));
            info.class_id = std::stoi(line.substr(last + 1));
        } catch (const std::exception&) {
            throw Error("format", path + ":" + std::to_string(line_no) + ": invalid numeric field");
        }
        info.source_path = line.substr(first + 1, last - first - 1);
        rows.push_back(std::move(info));
    }
    return rows;
}

void write_plane(const std::vector<double>& plane, int height, int width, const std::string& path) {
    if (plane.size() != static_cast<std::size_t>(height) * width) {
        throw Error("dimension", path + ": plane size does not match dimensions");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", path + ": cannot open for writing");
    out.write("GWTPLANE", 8);
    const std::uint32_t h = static_cast<std::uint32_t>(height);
    const std::uint32_t w = static_cast<std::uint32_t>(width);
    write_all(out, &h, 4, path);
    write_all(out, &w, 4, path);
    write_all(out, plane.data(), plane.size() * sizeof(double), path);
}

std::vector<double> read_plane(const std::string& path, int* height, int* width) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", path + ": cannot open");
    char magic[8];
    read_all(in, magic, 8, path);
    if (std::memcmp(magic, "GWTPLANE", 8) != 0) throw Error("format", path + ": not a GWTPLANE file");
    std::uint32_t h = 0, w = 0;
    read_all(in, &h, 4, path);
    read_all(in, &w, 4, path);
    std::vector<double> plane(static_cast<std::size_t>(h) * w);
    read_all(in, plane.data(), plane.size() * sizeof(double), path);
    if (height) *height = static_cast<int>(h);
    if (width) *width = static_cast<int>(w);
    return plane;
}

void write_plane_pgm(const std::vector<double>& plane, int height, int width,
                     const std::string& path) {
    double max_v = 0.0;
    for (double v : plane) max_v = std::max(max_v, v);
    GrayImage img;
    img.height = height;
    img.width = width;
    img.pixels.resize(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) {
        img.pixels[i] = max_v > 0.0 ? plane[i] / max_v : 0.0;
    }
    save_pgm(img, path, true);
}

}  // namespace gkdcv

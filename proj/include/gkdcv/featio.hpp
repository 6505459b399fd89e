#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gkdcv {

/// FEATMAT1: magic "FEATMAT1", u32 rows, u32 cols, f64 little-endian
/// row-major; one feature vector per row.
void write_feature_matrix(const Eigen::MatrixXd& rows_by_dim, const std::string& path);
Eigen::MatrixXd read_feature_matrix(const std::string& path);

/// Sidecar CSV lines `<row>,<path>,<class_id>` describing a feature matrix.
struct FeatureRowInfo {
    int row = 0;
    std::string source_path;
    int class_id = 0;
};
void write_feature_sidecar(const std::vector<FeatureRowInfo>& rows, const std::string& path);
std::vector<FeatureRowInfo> read_feature_sidecar(const std::string& path);

/// GWTPLANE: magic "GWTPLANE", u32 height, u32 width, f64 little-endian
/// row-major plane values.
void write_plane(const std::vector<double>& plane, int height, int width, const std::string& path);
std::vector<double> read_plane(const std::string& path, int* height, int* width);

/// Plane rescaled to 0..255 (by its maximum) and written as binary PGM.
void write_plane_pgm(const std::vector<double>& plane, int height, int width,
                     const std::string& path);

}  // namespace gkdcv

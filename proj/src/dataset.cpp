#include "gkdcv/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gkdcv/error.hpp"

namespace fs = std::filesystem;

namespace gkdcv {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm" || ext == ".png";
}

}  // namespace

const char* role_name(Role role) {
    switch (role) {
        case Role::Train: return "train";
        case Role::ProbeGenuine: return "probe-genuine";
        case Role::ProbeImpostor: return "probe-impostor";
    }
    return "?";
}

Role parse_role(const std::string& text) {
    if (text == "train") return Role::Train;
    if (text == "probe-genuine") return Role::ProbeGenuine;
    if (text == "probe-impostor") return Role::ProbeImpostor;
    throw Error("format", "unknown role '" + text + "'");
}

int DatasetManifest::num_classes() const {
    int max_id = -1;
    for (const auto& e : entries) max_id = std::max(max_id, e.class_id);
    return max_id + 1;
}

std::vector<ManifestEntry> DatasetManifest::with_role(Role role) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries) {
        if (e.role == role) out.push_back(e);
    }
    return out;
}

std::string DatasetManifest::resolve_path(const ManifestEntry& entry) const {
    fs::path p(entry.path);
    if (p.is_absolute() || base_dir.empty()) return entry.path;
    return (fs::path(base_dir) / p).string();
}

void validate_manifest(const DatasetManifest& manifest) {
    std::set<int> ids;
    std::map<int, int> train_counts;
    for (const auto& e : manifest.entries) {
        if (e.class_id < 0) throw Error("format", "negative class id " + std::to_string(e.class_id));
        ids.insert(e.class_id);
        if (e.role == Role::Train) ++train_counts[e.class_id];
    }
    int expected = 0;
    for (int id : ids) {
        if (id != expected++) {
            throw Error("format", "class ids are not contiguous from 0 (missing id " +
                                      std::to_string(expected - 1) + ")");
        }
    }
    for (const auto& [id, count] : train_counts) {
        if (count < 2) {
            throw Error("format", "class " + std::to_string(id) + " has only " + std::to_string(count) +
                                      " training entry; at least 2 are required");
        }
    }
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", path + ": cannot open manifest");

    DatasetManifest manifest;
    manifest.base_dir = fs::path(path).parent_path().string();

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        std::vector<std::string> fields;
        std::stringstream ss(stripped);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (fields.size() != 3) {
            throw Error("format", path + ":" + std::to_string(line_no) +
                                      ": expected `<path>,<class_id>,<role>`, got " +
                                      std::to_string(fields.size()) + " fields");
        }
        ManifestEntry entry;
        entry.path = fields[0];
        try {
            std::size_t used = 0;
            entry.class_id = std::stoi(fields[1], &used);
            if (used != fields[1].size()) throw std::invalid_argument(fields[1]);
        } catch (const std::exception&) {
            throw Error("format",
                        path + ":" + std::to_string(line_no) + ": invalid class id '" + fields[1] + "'");
        }
        try {
            entry.role = parse_role(fields[2]);
        } catch (const Error&) {
            throw Error("format",
                        path + ":" + std::to_string(line_no) + ": unknown role '" + fields[2] + "'");
        }
        manifest.entries.push_back(std::move(entry));
    }
    validate_manifest(manifest);
    return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("io", path + ": cannot open manifest for writing");
    for (const auto& e : manifest.entries) {
        out << e.path << "," << e.class_id << "," << role_name(e.role) << "\n";
    }
    if (!out) throw Error("io", path + ": write failed");
}

DatasetManifest first_k_split(const std::string& root_dir, int k) {
    if (k < 1) throw Error("usage", "split requires k >= 1");
    if (!fs::is_directory(root_dir)) throw Error("io", root_dir + ": not a directory");

    std::vector<fs::path> class_dirs;
    for (const auto& de : fs::directory_iterator(root_dir)) {
        if (de.is_directory()) class_dirs.push_back(de.path());
    }
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty()) throw Error("io", root_dir + ": no class subdirectories found");

    DatasetManifest manifest;
    int class_id = 0;
    for (const auto& dir : class_dirs) {
        std::vector<fs::path> files;
        for (const auto& de : fs::directory_iterator(dir)) {
            if (de.is_regular_file() && is_image_file(de.path())) files.push_back(de.path());
        }
        std::sort(files.begin(), files.end());
        if (static_cast<int>(files.size()) <= k) {
            throw Error("format", dir.string() + ": class has " + std::to_string(files.size()) +
                                      " images, need more than k=" + std::to_string(k) +
                                      " to leave probe samples");
        }
        for (std::size_t i = 0; i < files.size(); ++i) {
            manifest.entries.push_back({files[i].string(), class_id,
                                        static_cast<int>(i) < k ? Role::Train : Role::ProbeGenuine});
        }
        ++class_id;
    }
    validate_manifest(manifest);
    return manifest;
}

}  // namespace gkdcv

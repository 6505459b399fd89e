#pragma once

#include <string>
#include <vector>

namespace gkdcv {

enum class Role { Train, ProbeGenuine, ProbeImpostor };

const char* role_name(Role role);
Role parse_role(const std::string& text);

struct ManifestEntry {
    std::string path;
    int class_id = 0;
    Role role = Role::Train;

    bool operator==(const ManifestEntry&) const = default;
};

/// Labeled image list. Class ids must be contiguous 0..C-1 and every class
/// that appears with role=train needs at least two training entries.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    /// Directory relative entry paths are resolved against (set by
    /// load_manifest, empty otherwise). Not serialized.
    std::string base_dir;

    int num_classes() const;
    std::vector<ManifestEntry> with_role(Role role) const;
    /// Entry path joined with base_dir when relative.
    std::string resolve_path(const ManifestEntry& entry) const;
};

/// Checks contiguity of class ids and the two-training-samples rule.
void validate_manifest(const DatasetManifest& manifest);

/// Parses CSV lines `<path>,<class_id>,<role>`; '#' starts a comment.
DatasetManifest load_manifest(const std::string& path);

void save_manifest(const DatasetManifest& manifest, const std::string& path);

/// Builds a manifest from a directory of per-class subdirectories: the first
/// k images of each class (lexicographic) become training entries, the rest
/// probe-genuine. Classes are numbered by sorted directory name.
DatasetManifest first_k_split(const std::string& root_dir, int k);

}  // namespace gkdcv

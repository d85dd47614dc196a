#ifndef BRAUN_VALIDATION_HPP
#define BRAUN_VALIDATION_HPP

#include <optional>
#include <string>

namespace braun {

/// First structural violation found by a heap validation walk.
/// `path` locates the offending node from the root, e.g. "root.left.right".
struct ValidationIssue {
    std::string path;
    std::string what;
};

using ValidationResult = std::optional<ValidationIssue>;

inline std::string child_path(const std::string& base, bool is_right) {
    return base + (is_right ? ".right" : ".left");
}

}  // namespace braun

#endif  // BRAUN_VALIDATION_HPP

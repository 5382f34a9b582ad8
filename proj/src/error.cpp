#include "cadclust/error.hpp"

namespace cadclust {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_spec: return "invalid-spec";
        case ErrorKind::parse: return "parse";
        case ErrorKind::io: return "io";
        case ErrorKind::shape: return "shape";
        case ErrorKind::insufficient_data: return "insufficient-data";
        case ErrorKind::degenerate_data: return "degenerate-data";
        case ErrorKind::empty_cluster: return "empty-cluster";
        case ErrorKind::tau_too_small: return "tau-too-small";
        case ErrorKind::degenerate_assignment: return "degenerate-assignment";
        case ErrorKind::all_failed: return "all-failed";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

}  // namespace cadclust

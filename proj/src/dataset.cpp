#include "cadclust/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "cadclust/error.hpp"
#include "cadclust/rng.hpp"

namespace cadclust {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::invalid_spec, what); }

void check_nonneg(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        invalid(std::string(name) + " must be a finite value >= 0");
    }
}

}  // namespace

Dataset::Dataset(std::string name, std::size_t d, std::vector<double> points,
                 std::optional<std::vector<int>> labels)
    : name_(std::move(name)), d_(d), points_(std::move(points)), labels_(std::move(labels)) {
    if (d_ == 0) {
        throw Error(ErrorKind::shape, "dataset dimensionality must be >= 1");
    }
    if (points_.empty() || points_.size() % d_ != 0) {
        throw Error(ErrorKind::shape, "point buffer of size " + std::to_string(points_.size()) +
                                          " is not a non-empty multiple of d=" + std::to_string(d_));
    }
    n_ = points_.size() / d_;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i])) {
            throw Error(ErrorKind::invalid_spec, "non-finite coordinate at row " + std::to_string(i / d_) +
                                                     ", column " + std::to_string(i % d_));
        }
    }
    if (labels_) {
        if (labels_->size() != n_) {
            throw Error(ErrorKind::shape, "label vector has length " + std::to_string(labels_->size()) +
                                              ", expected " + std::to_string(n_));
        }
        int max_label = -1;
        for (int l : *labels_) {
            if (l < 0) {
                throw Error(ErrorKind::invalid_spec, "negative label " + std::to_string(l));
            }
            max_label = std::max(max_label, l);
        }
        std::vector<bool> seen(static_cast<std::size_t>(max_label) + 1, false);
        for (int l : *labels_) {
            seen[static_cast<std::size_t>(l)] = true;
        }
        for (std::size_t c = 0; c < seen.size(); ++c) {
            if (!seen[c]) {
                throw Error(ErrorKind::invalid_spec, "label " + std::to_string(c) + " has no members");
            }
        }
    }
}

int Dataset::num_classes() const {
    if (!labels_) {
        return 0;
    }
    int max_label = -1;
    for (int l : *labels_) {
        max_label = std::max(max_label, l);
    }
    return max_label + 1;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<double> pts;
    pts.reserve(indices.size() * d_);
    std::optional<std::vector<int>> lab;
    if (labels_) {
        lab.emplace();
        lab->reserve(indices.size());
    }
    for (std::size_t i : indices) {
        if (i >= n_) {
            throw Error(ErrorKind::shape, "row index " + std::to_string(i) + " out of range");
        }
        auto r = row(i);
        pts.insert(pts.end(), r.begin(), r.end());
        if (lab) {
            lab->push_back((*labels_)[i]);
        }
    }
    if (lab) {
        *lab = densify_labels(*lab);
    }
    return Dataset(name_, d_, std::move(pts), std::move(lab));
}

std::vector<int> densify_labels(std::span<const int> raw) {
    std::unordered_map<int, int> ids;
    std::vector<int> out;
    out.reserve(raw.size());
    for (int l : raw) {
        auto [it, inserted] = ids.try_emplace(l, static_cast<int>(ids.size()));
        out.push_back(it->second);
    }
    return out;
}

Dataset gen_two_crescents(std::size_t n_total, double noise, std::uint64_t seed) {
    if (n_total < 2) {
        invalid("two_crescents needs n_total >= 2");
    }
    if (n_total % 2 != 0) {
        invalid("two_crescents needs an even n_total");
    }
    check_nonneg(noise, "noise");
    const std::size_t per_arm = n_total / 2;
    Rng rng(seed);
    std::vector<double> pts;
    pts.reserve(n_total * 2);
    std::vector<int> labels;
    labels.reserve(n_total);
    for (int arm = 0; arm < 2; ++arm) {
        for (std::size_t i = 0; i < per_arm; ++i) {
            const double theta = std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(per_arm);
            double x = std::cos(theta);
            double y = std::sin(theta);
            if (arm == 1) {
                x = 1.0 - x;
                y = -y;
            }
            x += noise * rng.normal();
            y += noise * rng.normal();
            pts.push_back(x);
            pts.push_back(y);
            labels.push_back(arm);
        }
    }
    return Dataset("2Crescents", 2, std::move(pts), std::move(labels));
}

Dataset gen_blobs(std::span<const BlobSpec> specs, std::uint64_t seed) {
    if (specs.empty()) {
        invalid("blobs needs at least one spec");
    }
    const std::size_t d = specs.front().center.size();
    if (d == 0) {
        invalid("blob center must have at least one coordinate");
    }
    std::size_t total = 0;
    for (const auto& s : specs) {
        if (s.center.size() != d) {
            invalid("blob centers must share one dimensionality");
        }
        if (s.count < 1) {
            invalid("blob count must be >= 1");
        }
        check_nonneg(s.stddev, "blob stddev");
        total += s.count;
    }
    Rng rng(seed);
    std::vector<double> pts;
    pts.reserve(total * d);
    std::vector<int> labels;
    labels.reserve(total);
    for (std::size_t c = 0; c < specs.size(); ++c) {
        for (std::size_t i = 0; i < specs[c].count; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                pts.push_back(specs[c].center[j] + specs[c].stddev * rng.normal());
            }
            labels.push_back(static_cast<int>(c));
        }
    }
    return Dataset("blobs", d, std::move(pts), std::move(labels));
}

Dataset gen_spiral(std::size_t n_per_arm, std::size_t arms, double noise, std::uint64_t seed) {
    if (arms < 1 || n_per_arm < 1) {
        invalid("spiral needs arms >= 1 and n_per_arm >= 1");
    }
    check_nonneg(noise, "noise");
    constexpr double inner_radius = 0.1;
    constexpr double growth = 1.0;
    constexpr double sweep = 1.5 * std::numbers::pi;
    Rng rng(seed);
    std::vector<double> pts;
    pts.reserve(n_per_arm * arms * 2);
    std::vector<int> labels;
    labels.reserve(n_per_arm * arms);
    for (std::size_t a = 0; a < arms; ++a) {
        const double offset = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(arms);
        for (std::size_t i = 0; i < n_per_arm; ++i) {
            const double frac = n_per_arm == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n_per_arm - 1);
            const double theta = sweep * frac;
            const double r = inner_radius + growth * frac;
            pts.push_back(r * std::cos(theta + offset) + noise * rng.normal());
            pts.push_back(r * std::sin(theta + offset) + noise * rng.normal());
            labels.push_back(static_cast<int>(a));
        }
    }
    return Dataset("spiral", 2, std::move(pts), std::move(labels));
}

Dataset gen_rings_gaussians(std::span<const RingSpec> rings, std::span<const BlobSpec> blobs,
                            std::uint64_t seed) {
    if (rings.empty() && blobs.empty()) {
        invalid("rings_gaussians needs at least one ring or blob");
    }
    for (const auto& r : rings) {
        if (r.center.size() != 2) {
            invalid("ring centers must be 2-D");
        }
        if (r.count < 1) {
            invalid("ring count must be >= 1");
        }
        check_nonneg(r.radius, "ring radius");
        check_nonneg(r.radial_stddev, "ring radial stddev");
    }
    for (const auto& b : blobs) {
        if (b.center.size() != 2) {
            invalid("blob centers must be 2-D alongside rings");
        }
        if (b.count < 1) {
            invalid("blob count must be >= 1");
        }
        check_nonneg(b.stddev, "blob stddev");
    }
    Rng rng(seed);
    std::vector<double> pts;
    std::vector<int> labels;
    int label = 0;
    for (const auto& r : rings) {
        for (std::size_t i = 0; i < r.count; ++i) {
            const double angle = 2.0 * std::numbers::pi * rng.uniform();
            const double radius = r.radius + r.radial_stddev * rng.normal();
            pts.push_back(r.center[0] + radius * std::cos(angle));
            pts.push_back(r.center[1] + radius * std::sin(angle));
            labels.push_back(label);
        }
        ++label;
    }
    for (const auto& b : blobs) {
        for (std::size_t i = 0; i < b.count; ++i) {
            pts.push_back(b.center[0] + b.stddev * rng.normal());
            pts.push_back(b.center[1] + b.stddev * rng.normal());
            labels.push_back(label);
        }
        ++label;
    }
    return Dataset("RingG", 2, std::move(pts), std::move(labels));
}

Dataset gen_subspace_gaussians(std::size_t dim_total, std::size_t dim_sub, std::size_t n_per_cluster,
                               double stddev, std::uint64_t seed) {
    if (dim_sub < 1 || 2 * dim_sub != dim_total) {
        invalid("subspace_gaussians needs dim_total == 2 * dim_sub with dim_sub >= 1");
    }
    if (n_per_cluster < 1) {
        invalid("n_per_cluster must be >= 1");
    }
    check_nonneg(stddev, "stddev");
    Rng rng(seed);
    std::vector<double> pts(2 * n_per_cluster * dim_total, 0.0);
    std::vector<int> labels;
    labels.reserve(2 * n_per_cluster);
    for (int c = 0; c < 2; ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * dim_sub;
        for (std::size_t i = 0; i < n_per_cluster; ++i) {
            const std::size_t row = static_cast<std::size_t>(c) * n_per_cluster + i;
            for (std::size_t j = begin; j < begin + dim_sub; ++j) {
                pts[row * dim_total + j] = stddev * rng.normal();
            }
            labels.push_back(c);
        }
    }
    return Dataset("w100Gaussians", dim_total, std::move(pts), std::move(labels));
}

Family parse_family(std::string_view name) {
    std::string key(name);
    for (auto& c : key) {
        if (c == '-') {
            c = '_';
        }
    }
    if (key == "two_crescents") return Family::two_crescents;
    if (key == "blobs") return Family::blobs;
    if (key == "spiral") return Family::spiral;
    if (key == "rings_gaussians") return Family::rings_gaussians;
    if (key == "subspace_gaussians") return Family::subspace_gaussians;
    invalid("unknown generator family '" + std::string(name) + "'");
}

std::string to_string(Family family) {
    switch (family) {
        case Family::two_crescents: return "two_crescents";
        case Family::blobs: return "blobs";
        case Family::spiral: return "spiral";
        case Family::rings_gaussians: return "rings_gaussians";
        case Family::subspace_gaussians: return "subspace_gaussians";
    }
    return "unknown";
}

Dataset generate(const GenSpec& spec) {
    switch (spec.family) {
        case Family::two_crescents: return gen_two_crescents(spec.n_total, spec.noise, spec.seed);
        case Family::blobs: return gen_blobs(spec.blobs, spec.seed);
        case Family::spiral: return gen_spiral(spec.n_per_arm, spec.arms, spec.spiral_noise, spec.seed);
        case Family::rings_gaussians: return gen_rings_gaussians(spec.rings, spec.ring_blobs, spec.seed);
        case Family::subspace_gaussians:
            return gen_subspace_gaussians(spec.dim_total, spec.dim_sub, spec.n_per_cluster, spec.stddev, spec.seed);
    }
    invalid("unknown generator family");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void parse_error(std::size_t row, const std::string& what) {
    throw Error(ErrorKind::parse, "row " + std::to_string(row) + ": " + what);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::parse, "cannot open " + path.string());
    }
    if (options.label_column && !options.has_header) {
        throw Error(ErrorKind::invalid_spec, "a label column can only be named when the file has a header");
    }

    std::vector<std::string> header;
    std::optional<std::size_t> label_idx;
    std::size_t expected = 0;
    std::size_t row = 0;
    std::string line;

    if (options.has_header) {
        while (std::getline(in, line)) {
            ++row;
            if (!trim(line).empty()) {
                break;
            }
        }
        if (trim(line).empty()) {
            throw Error(ErrorKind::parse, path.string() + ": missing header");
        }
        for (auto f : split(line)) {
            header.emplace_back(f);
        }
        expected = header.size();
        std::optional<std::string> wanted = options.label_column;
        if (!wanted && options.detect_label) {
            for (const auto& h : header) {
                if (h == "label") {
                    wanted = h;
                }
            }
        }
        if (wanted) {
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (header[i] == *wanted) {
                    label_idx = i;
                    break;
                }
            }
            if (!label_idx) {
                throw Error(ErrorKind::parse, "label column '" + *wanted + "' not found in header");
            }
        }
    }

    std::vector<double> pts;
    std::vector<std::string> raw_labels;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(line);
        if (expected == 0) {
            expected = fields.size();
        }
        if (fields.size() != expected) {
            parse_error(row, "expected " + std::to_string(expected) + " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (label_idx && c == *label_idx) {
                raw_labels.emplace_back(fields[c]);
                continue;
            }
            double value = 0.0;
            const auto f = fields[c];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
            if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty() || !std::isfinite(value)) {
                const std::string col = header.empty() ? std::to_string(c) : "'" + header[c] + "'";
                parse_error(row, "column " + col + ": non-numeric value '" + std::string(f) + "'");
            }
            pts.push_back(value);
        }
        ++n;
    }
    if (n == 0) {
        throw Error(ErrorKind::parse, path.string() + ": no data rows");
    }
    const std::size_t d = expected - (label_idx ? 1 : 0);
    if (d == 0) {
        throw Error(ErrorKind::parse, path.string() + ": no feature columns");
    }

    std::optional<std::vector<int>> labels;
    if (label_idx) {
        std::unordered_map<std::string, int> ids;
        labels.emplace();
        labels->reserve(n);
        for (const auto& s : raw_labels) {
            auto [it, inserted] = ids.try_emplace(s, static_cast<int>(ids.size()));
            labels->push_back(it->second);
        }
    }
    return Dataset(path.stem().string(), d, std::move(pts), std::move(labels));
}

void save_csv(const Dataset& data, std::ostream& out) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
        if (j > 0) {
            out << ',';
        }
        out << 'f' << j;
    }
    if (data.has_labels()) {
        out << ",label";
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto r = data.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j > 0) {
                out << ',';
            }
            const auto res = std::to_chars(buf, buf + sizeof(buf), r[j]);
            out.write(buf, res.ptr - buf);
        }
        if (data.has_labels()) {
            out << ',' << data.labels()[i];
        }
        out << '\n';
    }
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write " + path.string());
    }
    save_csv(data, out);
    if (!out) {
        throw Error(ErrorKind::io, "failed writing " + path.string());
    }
}

}  // namespace cadclust

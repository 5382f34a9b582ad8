#ifndef CADCLUST_DATASET_HPP
#define CADCLUST_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <vector>

namespace cadclust {

/**
 * An n x d matrix of finite reals stored row-major, with optional ground-truth
 * labels in [0, c) where every id appears at least once.
 */
class Dataset {
public:
    Dataset() = default;

    /// Validates shape, finiteness and label density; throws Error otherwise.
    Dataset(std::string name, std::size_t d, std::vector<double> points,
            std::optional<std::vector<int>> labels = std::nullopt);

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    std::size_t size() const { return n_; }
    std::size_t dim() const { return d_; }

    std::span<const double> row(std::size_t i) const { return {points_.data() + i * d_, d_}; }
    const std::vector<double>& points() const { return points_; }

    bool has_labels() const { return labels_.has_value(); }
    const std::vector<int>& labels() const { return labels_.value(); }

    /// Number of distinct ground-truth labels, or 0 when unlabeled.
    int num_classes() const;

    /// Rows selected by `indices`, in that order; labels are carried over and re-densified.
    Dataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const Dataset& other) const = default;

private:
    std::string name_;
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<double> points_;
    std::optional<std::vector<int>> labels_;
};

/// Maps arbitrary ids to dense ids [0, c) in first-appearance order.
std::vector<int> densify_labels(std::span<const int> raw);

struct BlobSpec {
    std::vector<double> center;
    double stddev = 1.0;
    std::size_t count = 1;
};

struct RingSpec {
    std::vector<double> center{0.0, 0.0};
    double radius = 1.0;
    double radial_stddev = 0.0;
    std::size_t count = 1;
};

/// Two interlocking half circles of radius 1: the upper arc centred at the
/// origin, the lower arc centred at (1, 0). Angles sit at the midpoints
/// of `n_total / 2` equal slices of [0, pi].
Dataset gen_two_crescents(std::size_t n_total, double noise, std::uint64_t seed);

/// One isotropic Gaussian per spec; labels follow spec order.
Dataset gen_blobs(std::span<const BlobSpec> specs, std::uint64_t seed);

/// Archimedean spiral arms sweeping three quarters of a turn, r = 0.1 + f and
/// theta = 1.5 pi f for f = i / (n - 1); arm j is rotated by 2 pi j / arms.
Dataset gen_spiral(std::size_t n_per_arm, std::size_t arms, double noise, std::uint64_t seed);

/// Annuli (uniform angle, Gaussian radial jitter) followed by Gaussian blobs.
Dataset gen_rings_gaussians(std::span<const RingSpec> rings, std::span<const BlobSpec> blobs,
                            std::uint64_t seed);

/// Two Gaussian clusters living on disjoint coordinate blocks [0, dim_sub) and
/// [dim_sub, dim_total); every other coordinate is exactly zero.
Dataset gen_subspace_gaussians(std::size_t dim_total, std::size_t dim_sub, std::size_t n_per_cluster,
                               double stddev, std::uint64_t seed);

enum class Family { two_crescents, blobs, spiral, rings_gaussians, subspace_gaussians };

/// Accepts "two_crescents" or "two-crescents" style names.
Family parse_family(std::string_view name);
std::string to_string(Family family);

/// Parameters for one generator family; unused fields are ignored. Defaults
/// reproduce the benchmark sizes (2Crescents 1200, Diff-Sizes 900, spiral 312,
/// RingG 1536, w100Gaussians 1000).
struct GenSpec {
    Family family = Family::two_crescents;
    std::uint64_t seed = 0;

    std::size_t n_total = 1200;  // two_crescents
    double noise = 0.08;

    std::vector<BlobSpec> blobs = {{{0.0, 0.0}, 2.0, 800}, {{10.0, -2.0}, 0.4, 50}, {{10.0, 2.0}, 0.4, 50}};

    std::size_t n_per_arm = 104;  // spiral
    std::size_t arms = 3;
    double spiral_noise = 0.02;

    std::vector<RingSpec> rings = {{{0.0, 0.0}, 1.0, 0.1, 384}, {{0.0, 0.0}, 3.0, 0.1, 384}};
    std::vector<BlobSpec> ring_blobs = {{{7.0, 0.0}, 0.5, 384}, {{-7.0, 0.0}, 0.5, 384}};

    std::size_t dim_total = 200;  // subspace_gaussians
    std::size_t dim_sub = 100;
    std::size_t n_per_cluster = 500;
    double stddev = 1.0;
};

Dataset generate(const GenSpec& spec);

struct CsvOptions {
    bool has_header = true;
    /// Header name of the label column; requires has_header.
    std::optional<std::string> label_column;
    /// Without an explicit label_column, use a header column named "label" if present.
    bool detect_label = false;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes `f0,...,f{d-1}[,label]` then one row per point using shortest round-trip decimals.
void save_csv(const Dataset& data, const std::filesystem::path& path);
void save_csv(const Dataset& data, std::ostream& out);

}  // namespace cadclust

#endif  // CADCLUST_DATASET_HPP

#include "cadclust/plot.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "cadclust/error.hpp"

namespace cadclust {

const std::array<const char*, 20> plot_palette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
};

std::vector<std::array<double, 2>> project_2d(const Dataset& data) {
    const std::size_t n = data.size();
    const std::size_t d = data.dim();
    std::vector<std::array<double, 2>> out(n);
    if (d <= 2) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = data.row(i);
            out[i] = {r[0], d == 2 ? r[1] : 0.0};
        }
        return out;
    }

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
        data.points().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centred = x.rowwise() - mean;
    const Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(std::max<std::size_t>(n, 1));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    // Eigenvalues come back ascending.
    Eigen::MatrixXd axes(static_cast<Eigen::Index>(d), 2);
    axes.col(0) = solver.eigenvectors().col(static_cast<Eigen::Index>(d) - 1);
    axes.col(1) = solver.eigenvectors().col(static_cast<Eigen::Index>(d) - 2);
    for (Eigen::Index c = 0; c < 2; ++c) {
        const double scale = axes.col(c).cwiseAbs().maxCoeff();
        for (Eigen::Index j = 0; j < axes.rows(); ++j) {
            if (std::abs(axes(j, c)) > 1e-12 * scale) {
                if (axes(j, c) < 0.0) {
                    axes.col(c) = -axes.col(c);
                }
                break;
            }
        }
    }
    const Eigen::MatrixXd projected = centred * axes;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = {projected(static_cast<Eigen::Index>(i), 0), projected(static_cast<Eigen::Index>(i), 1)};
    }
    return out;
}

std::string render_svg(const Dataset& data, std::span<const int> labels, const std::string& title) {
    if (labels.size() != data.size()) {
        throw Error(ErrorKind::shape, "plot needs one label per point");
    }
    constexpr double size = 640.0;
    constexpr double margin = 24.0;
    const auto pts = project_2d(data);

    double lo_x = std::numeric_limits<double>::infinity();
    double lo_y = lo_x;
    double hi_x = -lo_x;
    double hi_y = -lo_x;
    for (const auto& p : pts) {
        lo_x = std::min(lo_x, p[0]);
        hi_x = std::max(hi_x, p[0]);
        lo_y = std::min(lo_y, p[1]);
        hi_y = std::max(hi_y, p[1]);
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    const double scale = (size - 2.0 * margin) / span;
    const double off_x = margin + 0.5 * ((size - 2.0 * margin) - (hi_x - lo_x) * scale);
    const double off_y = margin + 0.5 * ((size - 2.0 * margin) - (hi_y - lo_y) * scale);

    std::string svg;
    svg.reserve(pts.size() * 64 + 512);
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 640 640\">\n";
    svg += "<rect width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n";
    if (!title.empty()) {
        std::string escaped;
        for (char c : title) {
            switch (c) {
                case '<': escaped += "&lt;"; break;
                case '>': escaped += "&gt;"; break;
                case '&': escaped += "&amp;"; break;
                case '"': escaped += "&quot;"; break;
                default: escaped += c;
            }
        }
        svg += "<text x=\"320\" y=\"16\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
               escaped + "</text>\n";
    }
    char buf[128];
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double cx = off_x + (pts[i][0] - lo_x) * scale;
        const double cy = size - (off_y + (pts[i][1] - lo_y) * scale);  // y grows downward in SVG
        const auto colour = plot_palette[static_cast<std::size_t>(std::max(labels[i], 0)) % plot_palette.size()];
        std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n", cx, cy, colour);
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

void plot(const Dataset& data, std::span<const int> labels, const std::filesystem::path& out_path,
          const std::string& title) {
    const std::string svg = render_svg(data, labels, title);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write " + out_path.string());
    }
    out << svg;
    if (!out) {
        throw Error(ErrorKind::io, "failed writing " + out_path.string());
    }
}

}  // namespace cadclust

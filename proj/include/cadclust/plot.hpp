#ifndef CADCLUST_PLOT_HPP
#define CADCLUST_PLOT_HPP

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cadclust/dataset.hpp"

namespace cadclust {

/// 20 fixed colours, cycled by label id.
extern const std::array<const char*, 20> plot_palette;

/**
 * 2-D coordinates for plotting. d = 1 pads a zero second axis, d = 2 is the
 * identity, d > 2 projects the centred data onto the two leading principal
 * axes, each flipped so its first nonzero component is positive.
 */
std::vector<std::array<double, 2>> project_2d(const Dataset& data);

/// Scatter plot, one <circle> per point, fill keyed by label.
std::string render_svg(const Dataset& data, std::span<const int> labels, const std::string& title = {});

void plot(const Dataset& data, std::span<const int> labels, const std::filesystem::path& out_path,
          const std::string& title = {});

}  // namespace cadclust

#endif  // CADCLUST_PLOT_HPP

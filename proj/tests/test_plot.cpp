#include "doctest.h"

#include "cadclust/error.hpp"
#include "cadclust/plot.hpp"
#include "support.hpp"

using namespace cadclust;
using namespace testsupport;

namespace {

std::size_t count_of(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("one circle per point, deterministic") {
    const auto d = gen_two_crescents(300, 0.05, 1);
    const auto svg = render_svg(d, d.labels(), "crescents");
    CHECK(count_of(svg, "<circle") == 300);
    CHECK(svg == render_svg(d, d.labels(), "crescents"));
    CHECK(svg.find(plot_palette[0]) != std::string::npos);
    CHECK(svg.find(plot_palette[1]) != std::string::npos);
    CHECK(svg.find(plot_palette[2]) == std::string::npos);
}

TEST_CASE("palette cycles by label") {
    const Dataset d("d", 1, {0, 1});
    const auto a = render_svg(d, std::vector<int>{0, 20});
    CHECK(count_of(a, plot_palette[0]) == 2);
    CHECK(plot_palette.size() == 20);
}

TEST_CASE("title is escaped") {
    const Dataset d("d", 2, {0, 0});
    const auto svg = render_svg(d, std::vector<int>{0}, "a<b & \"c\"");
    CHECK(svg.find("a&lt;b &amp; &quot;c&quot;") != std::string::npos);
    CHECK(count_of(render_svg(d, std::vector<int>{0}), "<text") == 0);
}

TEST_CASE("projection rules") {
    const Dataset line("line", 1, {1, 2, 3});
    const auto p1 = project_2d(line);
    CHECK(p1[2][0] == 3.0);
    CHECK(p1[2][1] == 0.0);

    // Symmetric point pairs on each axis give an exactly diagonal covariance
    // with variance largest along axis 2, then axis 0.
    const Dataset d("d", 3, {0, 0, 10, 0, 0, -10, 3, 0, 0, -3, 0, 0, 0, 1, 0, 0, -1, 0});
    const auto proj = project_2d(d);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(proj[i][0] == doctest::Approx(d.row(i)[2]).epsilon(1e-12));
        CHECK(proj[i][1] == doctest::Approx(d.row(i)[0]).epsilon(1e-12));
    }

    const auto w = gen_subspace_gaussians(200, 100, 50, 1.0, 9);
    CHECK(count_of(render_svg(w, w.labels()), "<circle") == 100);
}

TEST_CASE("plot errors") {
    const Dataset d("d", 2, {0, 0, 1, 1});
    CHECK_THROWS_AS(render_svg(d, std::vector<int>{0}), Error);
    try {
        plot(d, std::vector<int>{0, 1}, "/nonexistent/dir/out.svg");
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io);
    }
}

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rodbif {

/// Minimal hand-emitted SVG line plot: fixed 800x600 viewBox, framed axes with
/// tick labels, optional legend. Enough to display branch diagrams and centerline
/// projections without a plotting dependency.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel);

    void add_polyline(const std::vector<double>& x, const std::vector<double>& y,
                      const std::string& color, bool dashed, const std::string& label);
    void add_markers(const std::vector<double>& x, const std::vector<double>& y,
                     const std::string& color, const std::string& label);

    void write(const std::filesystem::path& file) const;
    std::string render() const;

private:
    struct Series {
        std::vector<double> x, y;
        std::string color;
        bool dashed = false;
        bool markers = false;
        std::string label;
    };
    std::string title_, xlabel_, ylabel_;
    std::vector<Series> series_;
};

/// Three orthographic projections (xy, xz, yz) of space curves, side by side in
/// one 800x600 canvas. Each curve is (label, color, dashed, 3xN points flattened
/// as x[], y[], z[]).
struct ProjectedCurve {
    std::vector<double> x, y, z;
    std::string color;
    bool dashed = false;
    std::string label;
};

std::string render_projections(const std::string& title,
                               const std::vector<ProjectedCurve>& curves);
void write_projections(const std::string& title, const std::vector<ProjectedCurve>& curves,
                       const std::filesystem::path& file);

}  // namespace rodbif

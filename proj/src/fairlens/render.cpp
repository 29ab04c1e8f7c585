#include "fairlens/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "fairlens/error.hpp"

namespace fairlens {

namespace {

std::string printf_string(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string printf_string(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  const int n = std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  if (n < 0) throw Error(ErrorKind::Internal, "formatting failed");
  if (static_cast<std::size_t>(n) < sizeof buf) return std::string(buf, static_cast<std::size_t>(n));
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  va_start(args, fmt);
  std::vsnprintf(out.data(), out.size(), fmt, args);
  va_end(args);
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr std::array<std::array<int, 3>, 5> kAnchors{{
    {0x44, 0x01, 0x54},
    {0x3b, 0x52, 0x8b},
    {0x21, 0x91, 0x8c},
    {0x5e, 0xc9, 0x62},
    {0xfd, 0xe7, 0x25},
}};

// Categorical colors for groups.
constexpr std::array<const char*, 10> kGroupColors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

double text_width(const std::string& s, double font_size) { return 0.6 * font_size * static_cast<double>(s.size()); }

std::string svg_open(double width, double height) {
  return printf_string(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %.1f %.1f\" width=\"%.1f\" height=\"%.1f\" "
      "font-family=\"sans-serif\">\n"
      "<rect x=\"0\" y=\"0\" width=\"%.1f\" height=\"%.1f\" fill=\"#ffffff\"/>\n",
      width, height, width, height, width, height);
}

/// Readable text color over a fill of the sequential scale.
const char* text_color_for(double v) { return v > 0.55 ? "#000000" : "#ffffff"; }

struct DendroNode {
  double position = 0.0;
  double height = 0.0;
};

std::vector<DendroNode> dendrogram_nodes(const Linkage& linkage, const std::vector<std::size_t>& order) {
  std::vector<DendroNode> nodes(linkage.leaves + linkage.merges.size());
  for (std::size_t slot = 0; slot < order.size(); ++slot) nodes[order[slot]].position = static_cast<double>(slot) + 0.5;
  for (std::size_t i = 0; i < linkage.merges.size(); ++i) {
    const Merge& m = linkage.merges[i];
    nodes[linkage.leaves + i] = {(nodes[m.left].position + nodes[m.right].position) / 2.0, m.height};
  }
  return nodes;
}

double max_height(const Linkage& linkage) {
  double h = 0.0;
  for (const auto& m : linkage.merges) h = std::max(h, m.height);
  return h > 0.0 ? h : 1.0;
}

void append_colorbar(std::string& svg, double x, double y, double width, const char* low, const char* mid,
                     const char* high) {
  svg += "<defs><linearGradient id=\"scale\" x1=\"0\" x2=\"1\" y1=\"0\" y2=\"0\">";
  for (std::size_t i = 0; i < kAnchors.size(); ++i) {
    svg += printf_string("<stop offset=\"%.2f\" stop-color=\"#%02x%02x%02x\"/>", static_cast<double>(i) / 4.0,
                         kAnchors[i][0], kAnchors[i][1], kAnchors[i][2]);
  }
  svg += "</linearGradient></defs>\n";
  svg += printf_string(
      "<rect class=\"colorbar\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"12\" fill=\"url(#scale)\" "
      "stroke=\"#333333\" stroke-width=\"0.5\"/>\n",
      x, y, width);
  svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"start\">%s</text>\n", x, y + 24, low);
  svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"middle\">%s</text>\n",
                       x + width / 2, y + 24, mid);
  svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"end\">%s</text>\n", x + width,
                       y + 24, high);
}

}  // namespace

std::string sequential_color(double v) {
  if (!std::isfinite(v)) v = 0.0;
  v = std::clamp(v, 0.0, 1.0);
  const double scaled = v * 4.0;
  const auto lo = std::min<std::size_t>(static_cast<std::size_t>(scaled), 3);
  const double t = scaled - static_cast<double>(lo);
  std::array<int, 3> rgb{};
  for (std::size_t c = 0; c < 3; ++c) {
    const double value = kAnchors[lo][c] + t * (kAnchors[lo + 1][c] - kAnchors[lo][c]);
    rgb[c] = static_cast<int>(std::lround(value));
  }
  return printf_string("#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
}

std::string render_clustermap_svg(const MetricsMatrix& m, const Linkage& columns, const Linkage& rows,
                                  const Eigen::VectorXd& variances, const std::string& title) {
  const std::size_t n_rows = m.row_count();
  const auto n_cols = static_cast<std::size_t>(m.values.cols());
  if (n_rows < 2) throw invalid_argument("clustermap needs at least two rows");
  if (columns.leaves != n_cols || rows.leaves != n_rows) {
    throw invalid_argument("clustermap: linkages do not match the matrix dimensions");
  }
  if (static_cast<std::size_t>(variances.size()) != n_cols) {
    throw invalid_argument("clustermap: one variance per column expected");
  }

  const std::vector<std::size_t> col_order = leaf_order(columns);
  const std::vector<std::size_t> row_order = leaf_order(rows);

  constexpr double kMargin = 12, kCellW = 46, kCellH = 24, kTopDendro = 90, kLeftDendro = 110, kGap = 4;
  std::vector<std::string> col_labels(n_cols);
  double col_label_height = 0;
  for (std::size_t j = 0; j < n_cols; ++j) {
    col_labels[j] = std::string(metric_name(j)) + printf_string(" (%.3f)", variances(static_cast<Eigen::Index>(j)));
    col_label_height = std::max(col_label_height, text_width(col_labels[j], 11));
  }
  double row_label_width = 0;
  for (const auto& r : m.rows) row_label_width = std::max(row_label_width, text_width(r.label(), 11));

  const double title_h = title.empty() ? 0 : 24;
  const double heat_x = kMargin + kLeftDendro + kGap;
  const double heat_y = kMargin + title_h + kTopDendro + kGap;
  const double heat_w = kCellW * static_cast<double>(n_cols);
  const double heat_h = kCellH * static_cast<double>(n_rows);
  const double width = std::max(heat_x + heat_w + 8 + row_label_width + kMargin, heat_x + 260);
  const double colorbar_y = heat_y + heat_h + 8 + col_label_height + 12;
  const double height = colorbar_y + 30 + kMargin;

  std::string svg = svg_open(width, height);
  svg +=
      "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\" "
      "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#ffffff\" "
      "stroke-width=\"2\" opacity=\"0.8\"/></pattern></defs>\n";
  if (!title.empty()) {
    svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\" font-weight=\"bold\">%s</text>\n", kMargin,
                         kMargin + 14, xml_escape(title).c_str());
  }

  svg += "<g class=\"heatmap\">\n";
  for (std::size_t ri = 0; ri < n_rows; ++ri) {
    const std::size_t i = row_order[ri];
    for (std::size_t cj = 0; cj < n_cols; ++cj) {
      const std::size_t j = col_order[cj];
      const double v = m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double x = heat_x + kCellW * static_cast<double>(cj);
      const double y = heat_y + kCellH * static_cast<double>(ri);
      svg += printf_string(
          "<rect class=\"cell\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"%s\" "
          "data-row=\"%zu\" data-col=\"%zu\"/>\n",
          x, y, kCellW, kCellH, sequential_color(v).c_str(), i, j);
      if (m.imputed[i][j]) {
        svg += printf_string(
            "<rect class=\"flag\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"url(#hatch)\"/>\n", x, y,
            kCellW, kCellH);
      }
      svg += printf_string(
          "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"middle\" fill=\"%s\">%.2f</text>\n",
          x + kCellW / 2, y + kCellH / 2 + 3.5, text_color_for(v), v);
    }
  }
  svg += "</g>\n";

  svg += "<g class=\"row-labels\">\n";
  for (std::size_t ri = 0; ri < n_rows; ++ri) {
    svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\">%s</text>\n", heat_x + heat_w + 6,
                         heat_y + kCellH * (static_cast<double>(ri) + 0.5) + 4,
                         xml_escape(m.rows[row_order[ri]].label()).c_str());
  }
  svg += "</g>\n<g class=\"column-labels\">\n";
  for (std::size_t cj = 0; cj < n_cols; ++cj) {
    const double x = heat_x + kCellW * (static_cast<double>(cj) + 0.5) + 4;
    const double y = heat_y + heat_h + 6;
    svg += printf_string(
        "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" transform=\"rotate(90 %.1f %.1f)\">%s</text>\n", x, y, x, y,
        xml_escape(col_labels[col_order[cj]]).c_str());
  }
  svg += "</g>\n";

  // Column dendrogram: leaves touch the heatmap top, the root sits at the top margin.
  {
    const auto nodes = dendrogram_nodes(columns, col_order);
    const double top = kMargin + title_h;
    const double scale = kTopDendro / max_height(columns);
    auto px = [&](std::size_t node) { return heat_x + kCellW * nodes[node].position; };
    auto py = [&](std::size_t node) { return top + kTopDendro - scale * nodes[node].height; };
    svg += "<g class=\"column-dendrogram\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\">\n";
    for (std::size_t k = 0; k < columns.merges.size(); ++k) {
      const Merge& mg = columns.merges[k];
      const double y = top + kTopDendro - scale * mg.height;
      svg += printf_string("<path class=\"col-merge\" d=\"M%.2f %.2fV%.2fH%.2fV%.2f\"/>\n", px(mg.left), py(mg.left), y,
                           px(mg.right), py(mg.right));
    }
    svg += "</g>\n";
  }
  // Row dendrogram: leaves touch the heatmap's left edge.
  {
    const auto nodes = dendrogram_nodes(rows, row_order);
    const double right = heat_x - kGap;
    const double scale = kLeftDendro / max_height(rows);
    auto px = [&](std::size_t node) { return right - scale * nodes[node].height; };
    auto py = [&](std::size_t node) { return heat_y + kCellH * nodes[node].position; };
    svg += "<g class=\"row-dendrogram\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\">\n";
    for (std::size_t k = 0; k < rows.merges.size(); ++k) {
      const Merge& mg = rows.merges[k];
      const double x = right - scale * mg.height;
      svg += printf_string("<path class=\"row-merge\" d=\"M%.2f %.2fH%.2fV%.2fH%.2f\"/>\n", px(mg.left), py(mg.left), x,
                           py(mg.right), px(mg.right));
    }
    svg += "</g>\n";
  }

  append_colorbar(svg, heat_x, colorbar_y, 240, "0", "0.5", "1");
  svg += "</svg>\n";
  return svg;
}

namespace {

std::string marker_shape(std::size_t model, double x, double y, const char* color) {
  constexpr double r = 6;
  switch (model % 6) {
    case 0:
      return printf_string("<circle class=\"marker\" cx=\"%.2f\" cy=\"%.2f\" r=\"%.1f\" fill=\"%s\"", x, y, r, color);
    case 1:
      return printf_string("<rect class=\"marker\" x=\"%.2f\" y=\"%.2f\" width=\"%.1f\" height=\"%.1f\" fill=\"%s\"",
                           x - r, y - r, 2 * r, 2 * r, color);
    case 2:
      return printf_string("<path class=\"marker\" d=\"M%.2f %.2fL%.2f %.2fL%.2f %.2fZ\" fill=\"%s\"", x, y - r * 1.2,
                           x + r * 1.1, y + r * 0.8, x - r * 1.1, y + r * 0.8, color);
    case 3:
      return printf_string("<path class=\"marker\" d=\"M%.2f %.2fL%.2f %.2fL%.2f %.2fL%.2f %.2fZ\" fill=\"%s\"", x,
                           y - r * 1.3, x + r * 1.3, y, x, y + r * 1.3, x - r * 1.3, y, color);
    case 4:
      return printf_string("<path class=\"marker\" d=\"M%.2f %.2fL%.2f %.2fL%.2f %.2fZ\" fill=\"%s\"", x, y + r * 1.2,
                           x + r * 1.1, y - r * 0.8, x - r * 1.1, y - r * 0.8, color);
    default:
      return printf_string(
          "<path class=\"marker\" d=\"M%.2f %.2fh%.1fv%.1fh%.1fv%.1fh%.1fv%.1fh%.1fv%.1fh%.1fv%.1fh%.1fZ\" fill=\"%s\"",
          x - r, y - r / 3, 2 * r / 3, -2 * r / 3, 2 * r / 3, 2 * r / 3, 2 * r / 3, 2 * r / 3, -2 * r / 3, 2 * r / 3,
          -2 * r / 3, -2 * r / 3, -2 * r / 3, color);
  }
}

constexpr std::array<const char*, 6> kShapeNames{"circle", "square", "triangle", "diamond", "inverted triangle",
                                                 "cross"};

}  // namespace

std::string render_pca_scatter_svg(const AlignedProjection& projection, std::span<const std::string> models,
                                   const std::string& title) {
  if (projection.component_count() < 2) {
    throw invalid_argument("PCA scatter needs two components, projection has " +
                           std::to_string(projection.component_count()));
  }
  std::vector<std::size_t> plotted;
  if (models.empty()) {
    for (std::size_t l = 0; l < projection.models.size(); ++l) plotted.push_back(l);
  } else {
    for (const auto& name : models) {
      const auto it = std::find(projection.models.begin(), projection.models.end(), name);
      if (it == projection.models.end()) throw invalid_argument("PCA scatter: unknown model '" + name + "'");
      plotted.push_back(static_cast<std::size_t>(it - projection.models.begin()));
    }
  }
  const std::size_t groups = projection.groups.size();

  double extent = 0.0;
  for (const std::size_t l : plotted) {
    extent = std::max(extent, projection.coordinates[l].leftCols(2).cwiseAbs().maxCoeff());
  }
  if (!(extent > 0.0)) extent = 1.0;
  extent *= 1.12;

  constexpr double kMargin = 12, kPlot = 420, kAxisLabel = 40, kLegendGap = 24;
  const double title_h = title.empty() ? 0 : 24;
  const double plot_x = kMargin + kAxisLabel;
  const double plot_y = kMargin + title_h;
  double legend_w = text_width("Groups", 11);
  for (const auto& g : projection.groups) {
    const std::string text = g == projection.reference_group ? g + " (reference)" : g;
    legend_w = std::max(legend_w, 22 + text_width(text, 11));
  }
  for (std::size_t pi = 0; pi < plotted.size(); ++pi) {
    const std::string text = projection.models[plotted[pi]] + " (" + kShapeNames[pi % 6] + ")";
    legend_w = std::max(legend_w, 22 + text_width(text, 11));
  }
  const double legend_x = plot_x + kPlot + kLegendGap;
  const double width = legend_x + legend_w + kMargin;
  const double legend_h = 18.0 * static_cast<double>(groups + plotted.size() + 3);
  const double height = std::max(plot_y + kPlot + kAxisLabel, plot_y + legend_h) + kMargin;

  auto sx = [&](double v) { return plot_x + kPlot / 2 + v / extent * (kPlot / 2); };
  auto sy = [&](double v) { return plot_y + kPlot / 2 - v / extent * (kPlot / 2); };

  std::string svg = svg_open(width, height);
  if (!title.empty()) {
    svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\" font-weight=\"bold\">%s</text>\n", kMargin,
                         kMargin + 14, xml_escape(title).c_str());
  }
  svg += printf_string(
      "<rect class=\"frame\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"#333333\"/>\n",
      plot_x, plot_y, kPlot, kPlot);
  svg += printf_string(
      "<line class=\"crosshair\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#888888\" "
      "stroke-dasharray=\"4 3\"/>\n",
      plot_x, sy(0), plot_x + kPlot, sy(0));
  svg += printf_string(
      "<line class=\"crosshair\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#888888\" "
      "stroke-dasharray=\"4 3\"/>\n",
      sx(0), plot_y, sx(0), plot_y + kPlot);

  const double r1 = projection.explained_variance_ratios(0);
  const double r2 = projection.explained_variance_ratios(1);
  svg += printf_string(
      "<text class=\"axis-label\" x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\">PC1 "
      "(explained variance %.3f)</text>\n",
      plot_x + kPlot / 2, plot_y + kPlot + 28, r1);
  const double ly = plot_y + kPlot / 2;
  const double lx = plot_x - 16;
  svg += printf_string(
      "<text class=\"axis-label\" x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 %.1f %.1f)\">PC2 (explained variance %.3f)</text>\n",
      lx, ly, lx, ly, r2);

  svg += "<g class=\"markers\" stroke=\"#222222\" stroke-width=\"0.8\" fill-opacity=\"0.85\">\n";
  for (std::size_t pi = 0; pi < plotted.size(); ++pi) {
    const std::size_t l = plotted[pi];
    for (std::size_t g = 0; g < groups; ++g) {
      const auto gi = static_cast<Eigen::Index>(g);
      const double x = projection.coordinates[l](gi, 0);
      const double y = projection.coordinates[l](gi, 1);
      svg += marker_shape(pi, sx(x), sy(y), kGroupColors[g % kGroupColors.size()]);
      svg += printf_string("><title>%s / %s (%.4f, %.4f)</title></%s>\n", xml_escape(projection.models[l]).c_str(),
                           xml_escape(projection.groups[g]).c_str(), x, y,
                           pi % 6 == 0 ? "circle" : (pi % 6 == 1 ? "rect" : "path"));
    }
  }
  svg += "</g>\n";

  svg += "<g class=\"legend\" font-size=\"11\">\n";
  double y = plot_y + 12;
  svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-weight=\"bold\">Groups</text>\n", legend_x, y);
  for (std::size_t g = 0; g < groups; ++g) {
    y += 18;
    const bool ref = projection.groups[g] == projection.reference_group;
    svg += printf_string("<rect x=\"%.1f\" y=\"%.1f\" width=\"12\" height=\"12\" fill=\"%s\"/>\n", legend_x, y - 10,
                         kGroupColors[g % kGroupColors.size()]);
    svg += printf_string("<text x=\"%.1f\" y=\"%.1f\">%s%s</text>\n", legend_x + 18, y,
                         xml_escape(projection.groups[g]).c_str(), ref ? " (reference)" : "");
  }
  y += 26;
  svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-weight=\"bold\">Models</text>\n", legend_x, y);
  for (std::size_t pi = 0; pi < plotted.size(); ++pi) {
    y += 18;
    svg += "<g class=\"legend-marker\" stroke=\"#222222\" stroke-width=\"0.8\">";
    std::string shape = marker_shape(pi, legend_x + 6, y - 4, "#bbbbbb");
    shape.replace(shape.find("class=\"marker\""), 14, "class=\"key\"");
    svg += shape + "/></g>\n";
    svg += printf_string("<text x=\"%.1f\" y=\"%.1f\">%s (%s)</text>\n", legend_x + 18, y,
                         xml_escape(projection.models[plotted[pi]]).c_str(), kShapeNames[pi % 6]);
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::string render_robustness_svg(const CorrelationSummary& summary) {
  const std::size_t n = summary.labels.size();
  if (n == 0) throw invalid_argument("robustness heatmap needs at least one condition");
  constexpr double kMargin = 12, kCell = 78;
  double label_w = 0;
  for (const auto& l : summary.labels) label_w = std::max(label_w, text_width(l, 11));
  const double heat_x = kMargin + label_w + 8;
  const double heat_y = kMargin + 24 + label_w + 8;
  const double side = kCell * static_cast<double>(n);
  const std::string title =
      printf_string("Correlation of metric distance vectors (mean \xc2\xb1 std over %zu seeds)", summary.seed_count);
  // The plus-minus sign is two bytes but one glyph.
  const double title_w = text_width(title, 14) - 0.6 * 14;
  const double width = std::max({heat_x + side + kMargin, heat_x + 260, kMargin + title_w + kMargin});
  const double colorbar_y = heat_y + side + 16;
  const double height = colorbar_y + 30 + kMargin;

  std::string svg = svg_open(width, height);
  svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\" font-weight=\"bold\">%s</text>\n", kMargin,
                       kMargin + 14, title.c_str());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double mean = summary.mean(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double sd = summary.std(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double scaled = (mean + 1.0) / 2.0;
      const double x = heat_x + kCell * static_cast<double>(j);
      const double y = heat_y + kCell * static_cast<double>(i);
      svg += printf_string(
          "<rect class=\"cell\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"%s\"/>\n", x, y, kCell,
          kCell, sequential_color(scaled).c_str());
      svg += printf_string(
          "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"middle\" fill=\"%s\">%.2f \xc2\xb1 %.2f</text>\n",
          x + kCell / 2, y + kCell / 2 + 4, text_color_for(scaled), mean, sd);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string label = xml_escape(summary.labels[i]);
    svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%s</text>\n", heat_x - 6,
                         heat_y + kCell * (static_cast<double>(i) + 0.5) + 4, label.c_str());
    const double x = heat_x + kCell * (static_cast<double>(i) + 0.5) + 4;
    const double y = heat_y - 6;
    svg += printf_string("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" transform=\"rotate(-90 %.1f %.1f)\">%s</text>\n",
                         x, y, x, y, label.c_str());
  }
  append_colorbar(svg, heat_x, colorbar_y, 240, "-1", "0", "1");
  svg += "</svg>\n";
  return svg;
}

}  // namespace fairlens

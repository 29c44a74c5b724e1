/*
 * Copyright (C) 2026 The Workgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "workgraph/sunburst.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "json.hpp"
#include "workgraph/error.h"

namespace workgraph {

namespace {

using json = nlohmann::json;

constexpr std::string_view kDocSchema = "workgraph-sunburst/1";

bool is_activity(const ActivitySnapshot& snapshot, NodeIndex node) {
  return snapshot.node(node).kind != NodeKind::kSourceTask;
}

class WeightCache {
 public:
  WeightCache(const ActivitySnapshot& snapshot, ArcWeighting weighting)
      : snapshot_(snapshot), weighting_(weighting), stamp_(snapshot.size(), 0) {}

  double operator()(NodeIndex node) {
    auto it = memo_.find(node.value);
    if (it != memo_.end()) return it->second;
    ++serial_;
    std::size_t descendants = 0, leaves = 0;
    std::vector<NodeIndex> stack{node};
    stamp_[node.value] = serial_;
    while (!stack.empty()) {
      const auto current = stack.back();
      stack.pop_back();
      bool leaf = true;
      for (const auto& link : snapshot_.children(current)) {
        if (!is_activity(snapshot_, link.node)) continue;
        leaf = false;
        if (stamp_[link.node.value] == serial_) continue;
        stamp_[link.node.value] = serial_;
        ++descendants;
        stack.push_back(link.node);
      }
      leaves += leaf;
    }
    const double weight = weighting_ == ArcWeighting::kDescendants
                              ? static_cast<double>(descendants + 1)
                              : static_cast<double>(leaves);
    memo_.emplace(node.value, weight);
    return weight;
  }

 private:
  const ActivitySnapshot& snapshot_;
  ArcWeighting weighting_;
  std::vector<std::size_t> stamp_;
  std::size_t serial_ = 0;
  std::map<std::uint32_t, double> memo_;
};

}  // namespace

SunburstModel build_sunburst(const ActivitySnapshot& snapshot,
                             const std::vector<double>& percent,
                             const SunburstOptions& options) {
  if (options.max_depth < 1) throw InvalidArgument("sunburst depth must be at least 1");
  if (!(options.color_scale_max > 0.0) || !std::isfinite(options.color_scale_max)) {
    throw InvalidArgument("color scale maximum must be positive");
  }
  if (percent.size() != snapshot.size()) {
    throw InvalidArgument("one percent value per snapshot node required");
  }
  if (!snapshot.has_root()) throw DataError("snapshot has no root");

  SunburstModel model;
  model.max_depth = options.max_depth;
  model.color_scale_max = options.color_scale_max;
  model.weighting = options.weighting;
  WeightCache weight(snapshot, options.weighting);
  std::vector<NodeIndex> arc_node;  // node behind each non-collection arc

  const auto make_arc = [&](NodeIndex node, int ring, double start, double end,
                            int parent) {
    const auto& n = snapshot.node(node);
    Arc arc;
    arc.node_id = n.id;
    arc.title = n.title;
    arc.ring = ring;
    arc.start = start;
    arc.end = end;
    arc.percent = percent[node.value];
    arc.intensity =
        std::min(arc.percent / 100.0 / options.color_scale_max, 1.0);
    arc.intensity = std::max(arc.intensity, 0.0);
    arc.gray = arc.percent == 0.0;
    arc.parent = parent;
    return arc;
  };

  // Depth-first so that the arc vector is in pre-order.
  const auto expand = [&](auto&& self, std::size_t arc_index, NodeIndex node) -> void {
    const Arc parent_arc = model.arcs[arc_index];
    if (parent_arc.ring + 1 >= options.max_depth) return;

    struct Child {
      NodeIndex node;
      std::string_view collection;
      std::string_view title;
      double weight;
    };
    std::vector<Child> children;
    for (const auto& link : snapshot.children(node)) {
      if (!is_activity(snapshot, link.node)) continue;
      const auto& label = snapshot.edge(link.edge).collection;
      children.push_back({link.node, label ? std::string_view(*label) : std::string_view(),
                          snapshot.node(link.node).title, weight(link.node)});
    }
    if (children.empty()) return;
    std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
      if (a.collection != b.collection) return a.collection < b.collection;
      return a.title < b.title;
    });
    double total = 0.0;
    for (const auto& c : children) total += c.weight;

    const double span = parent_arc.span();
    std::vector<std::pair<double, double>> bounds;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < children.size(); ++i) {
      const double start = parent_arc.start + span * (cumulative / total);
      cumulative += children[i].weight;
      // The last child closes exactly on the parent's end.
      const double end = i + 1 == children.size()
                             ? parent_arc.end
                             : parent_arc.start + span * (cumulative / total);
      bounds.emplace_back(start, end);
    }

    const int ring = parent_arc.ring + 1;
    for (std::size_t i = 0; i < children.size();) {
      std::size_t j = i;
      while (j < children.size() && children[j].collection == children[i].collection) ++j;
      if (!children[i].collection.empty()) {
        Arc sep;
        sep.title = std::string(children[i].collection);
        sep.ring = ring;
        sep.start = bounds[i].first;
        sep.end = bounds[j - 1].second;
        sep.collection = true;
        sep.gray = true;
        sep.parent = static_cast<int>(arc_index);
        model.arcs.push_back(std::move(sep));
        arc_node.push_back(NodeIndex{});
      }
      i = j;
    }
    for (std::size_t i = 0; i < children.size(); ++i) {
      model.arcs.push_back(make_arc(children[i].node, ring, bounds[i].first, bounds[i].second,
                                    static_cast<int>(arc_index)));
      arc_node.push_back(children[i].node);
      self(self, model.arcs.size() - 1, children[i].node);
    }
  };

  const auto root = snapshot.root();
  model.arcs.push_back(make_arc(root, 0, 0.0, 360.0, -1));
  arc_node.push_back(root);
  expand(expand, 0, root);

  // Dashed: rendered under two or more distinct parent nodes.
  std::map<std::uint32_t, std::set<std::uint32_t>> parents_of;
  for (std::size_t i = 1; i < model.arcs.size(); ++i) {
    const auto& arc = model.arcs[i];
    if (arc.collection) continue;
    parents_of[arc_node[i].value].insert(arc_node[static_cast<std::size_t>(arc.parent)].value);
  }
  for (std::size_t i = 1; i < model.arcs.size(); ++i) {
    auto& arc = model.arcs[i];
    if (!arc.collection) arc.dashed = parents_of[arc_node[i].value].size() >= 2;
  }
  return model;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Point {
  double x, y;
};

Point polar(double c, double r, double degrees) {
  const double rad = degrees * std::numbers::pi / 180.0;
  return {c + r * std::sin(rad), c - r * std::cos(rad)};
}

// Hex color between white (0) and the base blue (1).
std::string fill_color(const Arc& arc) {
  if (arc.gray) return "#d9d9d9";
  constexpr int kBase[3] = {0x08, 0x51, 0x9c};
  int rgb[3];
  for (int i = 0; i < 3; ++i) {
    rgb[i] = static_cast<int>(std::lround(255.0 + (kBase[i] - 255.0) * arc.intensity));
  }
  return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

std::string sector_path(double c, double inner, double outer, double start, double end) {
  const double span = end - start;
  if (span >= 360.0 - 1e-9) {
    // Full ring: two half arcs per circle.
    const auto o0 = polar(c, outer, 0), o1 = polar(c, outer, 180);
    std::string d = fmt::format("M{:.3f},{:.3f}A{:.3f},{:.3f} 0 1 1 {:.3f},{:.3f}"
                                "A{:.3f},{:.3f} 0 1 1 {:.3f},{:.3f}Z",
                                o0.x, o0.y, outer, outer, o1.x, o1.y, outer, outer, o0.x, o0.y);
    if (inner > 0.0) {
      const auto i0 = polar(c, inner, 0), i1 = polar(c, inner, 180);
      d += fmt::format("M{:.3f},{:.3f}A{:.3f},{:.3f} 0 1 0 {:.3f},{:.3f}"
                       "A{:.3f},{:.3f} 0 1 0 {:.3f},{:.3f}Z",
                       i0.x, i0.y, inner, inner, i1.x, i1.y, inner, inner, i0.x, i0.y);
    }
    return d;
  }
  const int large = span > 180.0 ? 1 : 0;
  const auto os = polar(c, outer, start), oe = polar(c, outer, end);
  const auto is = polar(c, inner, start), ie = polar(c, inner, end);
  return fmt::format("M{:.3f},{:.3f}A{:.3f},{:.3f} 0 {} 1 {:.3f},{:.3f}L{:.3f},{:.3f}"
                     "A{:.3f},{:.3f} 0 {} 0 {:.3f},{:.3f}Z",
                     os.x, os.y, outer, outer, large, oe.x, oe.y, ie.x, ie.y, inner, inner,
                     large, is.x, is.y);
}

}  // namespace

std::string emit_svg(const SunburstModel& model, const SvgOptions& options) {
  const double size = options.size;
  const double c = size / 2.0;
  const double margin = 10.0;
  const int rings = std::max(model.max_depth, 1);
  const double r0 = rings == 1 ? c - margin : (c - margin) / (2.0 * rings - 1.0) * 1.5;
  const double width = rings == 1 ? 0.0 : (c - margin - r0) / (rings - 1);
  constexpr double kSeparator = 3.0;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" "
      "height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
      options.size);
  out += fmt::format("<desc>sunburst; rings={}; color_scale_max={}</desc>\n", model.max_depth,
                     model.color_scale_max);
  out += "<g stroke=\"#ffffff\" stroke-width=\"0.5\">\n";
  for (const auto& arc : model.arcs) {
    double inner = 0.0, outer = r0;
    if (arc.ring > 0) {
      inner = r0 + (arc.ring - 1) * width;
      outer = inner + width;
    }
    if (arc.collection) {
      out += fmt::format("<path class=\"collection\" d=\"{}\" fill=\"#969696\"/>\n",
                         sector_path(c, inner, inner + kSeparator, arc.start, arc.end));
      continue;
    }
    if (arc.ring > 0) inner += kSeparator;
    const std::string stroke =
        arc.dashed ? " stroke=\"#808080\" stroke-dasharray=\"4 2\" stroke-width=\"1\"" : "";
    out += fmt::format("<path d=\"{}\" fill=\"{}\"{}><title>{} ({:.1f}%)</title></path>\n",
                       sector_path(c, inner, outer, arc.start, arc.end), fill_color(arc),
                       stroke, xml_escape(arc.title), arc.percent);
  }
  out += "</g>\n<g font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\" "
         "dominant-baseline=\"middle\">\n";
  for (const auto& arc : model.arcs) {
    if (arc.collection) continue;
    if (arc.ring == 0) {
      out += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\">{}</text>\n", c, c,
                         xml_escape(arc.title));
      continue;
    }
    if (arc.span() < options.label_min_degrees) continue;
    const double mid = (arc.start + arc.end) / 2.0;
    const double r = r0 + (arc.ring - 0.5) * width + kSeparator / 2.0;
    const auto p = polar(c, r, mid);
    // Radial text, flipped on the left half so it never reads upside down.
    double rotation = mid - 90.0;
    if (mid > 180.0) rotation -= 180.0;
    const auto fill = arc.intensity > 0.6 && !arc.gray ? "#ffffff" : "#000000";
    out += fmt::format(
        "<text x=\"{:.3f}\" y=\"{:.3f}\" transform=\"rotate({:.3f} {:.3f} {:.3f})\" "
        "fill=\"{}\">{}</text>\n",
        p.x, p.y, rotation, p.x, p.y, fill, xml_escape(arc.title));
  }
  out += "</g>\n</svg>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Structured document

namespace {

std::string_view weighting_name(ArcWeighting w) {
  return w == ArcWeighting::kLeaves ? "leaves" : "descendants";
}

json arc_fields(const Arc& arc) {
  json j = json::object();
  if (!arc.collection) j["node_id"] = arc.node_id;
  j["title"] = arc.title;
  j["ring"] = arc.ring;
  j["start"] = arc.start;
  j["end"] = arc.end;
  if (!arc.collection) {
    j["percent"] = arc.percent;
    j["intensity"] = arc.intensity;
    j["dashed"] = arc.dashed;
    j["gray"] = arc.gray;
  }
  return j;
}

}  // namespace

std::string emit_doc(const SunburstModel& model) {
  if (model.arcs.empty()) throw InvalidArgument("sunburst model has no arcs");
  std::vector<std::vector<std::size_t>> children(model.arcs.size());
  for (std::size_t i = 1; i < model.arcs.size(); ++i) {
    children[static_cast<std::size_t>(model.arcs[i].parent)].push_back(i);
  }
  const auto build = [&](auto&& self, std::size_t index) -> json {
    json j = arc_fields(model.arcs[index]);
    json collections = json::array();
    json kids = json::array();
    for (auto child : children[index]) {
      if (model.arcs[child].collection) {
        collections.push_back(arc_fields(model.arcs[child]));
      } else {
        kids.push_back(self(self, child));
      }
    }
    if (!collections.empty()) j["collections"] = std::move(collections);
    if (!kids.empty()) j["children"] = std::move(kids);
    return j;
  };
  json doc = json::object();
  doc["schema"] = kDocSchema;
  doc["max_depth"] = model.max_depth;
  doc["color_scale_max"] = model.color_scale_max;
  doc["weighting"] = weighting_name(model.weighting);
  doc["legend"] = {{"measure", "aggregated percent of items"},
                   {"intensity", "min(percent / 100 / color_scale_max, 1)"},
                   {"gray", "no items"},
                   {"dashed", "node drawn under two or more parents"}};
  doc["root"] = build(build, 0);
  return doc.dump(2) + "\n";
}

SunburstModel parse_doc(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SchemaError(fmt::format("sunburst document is not JSON: {}", e.what()));
  }
  try {
    if (doc.at("schema").get<std::string>() != kDocSchema) {
      throw SchemaError(fmt::format("sunburst schema must be {}", kDocSchema));
    }
    SunburstModel model;
    model.max_depth = doc.at("max_depth").get<int>();
    model.color_scale_max = doc.at("color_scale_max").get<double>();
    const auto weighting = doc.at("weighting").get<std::string>();
    if (weighting == "leaves") {
      model.weighting = ArcWeighting::kLeaves;
    } else if (weighting == "descendants") {
      model.weighting = ArcWeighting::kDescendants;
    } else {
      throw SchemaError(fmt::format("unknown weighting '{}'", weighting));
    }
    const auto read = [&](const json& j, bool collection, int parent) {
      Arc arc;
      arc.collection = collection;
      arc.title = j.at("title").get<std::string>();
      arc.ring = j.at("ring").get<int>();
      arc.start = j.at("start").get<double>();
      arc.end = j.at("end").get<double>();
      arc.parent = parent;
      if (collection) {
        arc.gray = true;
      } else {
        arc.node_id = j.at("node_id").get<std::string>();
        arc.percent = j.at("percent").get<double>();
        arc.intensity = j.at("intensity").get<double>();
        arc.dashed = j.at("dashed").get<bool>();
        arc.gray = j.at("gray").get<bool>();
      }
      return arc;
    };
    const auto walk = [&](auto&& self, const json& j, int parent) -> void {
      model.arcs.push_back(read(j, false, parent));
      const int index = static_cast<int>(model.arcs.size()) - 1;
      if (j.contains("collections")) {
        for (const auto& c : j.at("collections")) model.arcs.push_back(read(c, true, index));
      }
      if (j.contains("children")) {
        for (const auto& c : j.at("children")) self(self, c, index);
      }
    };
    walk(walk, doc.at("root"), -1);
    return model;
  } catch (const json::exception& e) {
    throw SchemaError(fmt::format("malformed sunburst document: {}", e.what()));
  }
}

}  // namespace workgraph

#include "histoscope/json_codec.hpp"

#include "histoscope/error.hpp"
#include "histoscope/palette.hpp"

namespace histoscope::json {

using nlohmann::json;

json stats_to_json(const RangeStatistics& stats) {
  return {
      {"pixel_count", stats.pixel_count},
      {"percent_of_total", stats.percent_of_total},
      {"entropy_bits", stats.entropy_bits},
      {"mean", stats.mean ? json(*stats.mean) : json(nullptr)},
      {"rms_contrast", stats.rms_contrast},
      {"total_intensity", stats.total_intensity},
  };
}

json layer_to_json(const WorkspaceState& ws, std::size_t index) {
  const Layer& layer = ws.layers().at(index);
  const ImageRecord& image = *layer.image;
  const Histogram& hist = *layer.histogram;
  return {
      {"index", index},
      {"name", image.source_name()},
      {"width", image.width()},
      {"height", image.height()},
      {"bit_depth", bits(image.bit_depth())},
      {"color_index", layer.color_index},
      {"color", to_hex(palette_color(layer.color_index))},
      {"total_pixels", hist.total_pixels()},
      {"max_count", hist.max_count()},
      {"min_intensity", *hist.min_present()},
      {"max_intensity", *hist.max_present()},
  };
}

json workspace_to_json(const WorkspaceState& ws) {
  json layers = json::array();
  for (std::size_t i = 0; i < ws.layers().size(); ++i) layers.push_back(layer_to_json(ws, i));
  return {
      {"domain_depth", bits(ws.domain_depth())},
      {"scale", std::string(to_string(ws.scale()))},
      {"y_limit", ws.y_limit()},
      {"range", {{"lo", ws.range().lo}, {"hi", ws.range().hi}}},
      {"overlay_count", ws.overlay_count()},
      {"images", std::move(layers)},
  };
}

json histogram_to_json(const Histogram& hist) {
  json out = {
      {"bit_depth", bits(hist.bit_depth())},
      {"total_pixels", hist.total_pixels()},
      {"max_count", hist.max_count()},
  };
  const auto counts = hist.counts();
  if (hist.bit_depth() == BitDepth::k8) {
    out["encoding"] = "dense";
    out["counts"] = std::vector<std::uint64_t>(counts.begin(), counts.end());
    return out;
  }
  json runs = json::array();
  std::size_t i = 0;
  while (i < counts.size()) {
    std::size_t j = i + 1;
    while (j < counts.size() && counts[j] == counts[i]) ++j;
    runs.push_back({counts[i], j - i});
    i = j;
  }
  out["encoding"] = "rle";
  out["runs"] = std::move(runs);
  return out;
}

Histogram histogram_from_json(const json& j) {
  const unsigned depth_bits = j.at("bit_depth").get<unsigned>();
  if (depth_bits != 8 && depth_bits != 16) throw std::invalid_argument("bit_depth must be 8 or 16");
  const BitDepth depth = depth_bits == 8 ? BitDepth::k8 : BitDepth::k16;
  std::vector<std::uint64_t> counts;
  if (j.at("encoding") == "dense") {
    counts = j.at("counts").get<std::vector<std::uint64_t>>();
  } else {
    for (const auto& run : j.at("runs")) {
      counts.insert(counts.end(), run.at(1).get<std::size_t>(), run.at(0).get<std::uint64_t>());
    }
  }
  return Histogram(depth, std::move(counts));
}

}  // namespace histoscope::json

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "histoscope/error.hpp"
#include "histoscope/ingest.hpp"
#include "histoscope/service.hpp"

namespace histoscope::cli {
namespace {

using Json = nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedFormat: return kUnsupportedFormat;
    case ErrorCode::SixteenBitColor: return kSixteenBitColor;
    case ErrorCode::OverlayLimitExceeded:
    case ErrorCode::DepthMismatch: return kWorkspaceError;
    case ErrorCode::NonInteger:
    case ErrorCode::InvalidLimit:
    case ErrorCode::RangeOutOfDomain:
    case ErrorCode::CanvasTooSmall: return kBadArguments;
    default: return kGenericError;
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_bytes(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream file(path, std::ios::binary);
  file.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!file) throw std::runtime_error(path.string() + ": cannot write file");
}

}  // namespace

double round_significant12(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return std::strtod(buffer, nullptr);
}

std::string full_repr(double value) {
  char buffer[40];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

std::string stats_json(const WorkspaceState& ws, int indent) {
  const auto stats = workspace_statistics(ws);
  Json images = Json::array();
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const ImageRecord& image = *ws.layers()[i].image;
    const RangeStatistics& s = stats[i];
    images.push_back({
        {"file", image.source_name()},
        {"bit_depth", bits(image.bit_depth())},
        {"width", image.width()},
        {"height", image.height()},
        {"pixel_count", s.pixel_count},
        {"percent_of_total", round_significant12(s.percent_of_total)},
        {"entropy_bits", round_significant12(s.entropy_bits)},
        {"mean", s.mean ? Json(round_significant12(*s.mean)) : Json(nullptr)},
        {"rms_contrast", round_significant12(s.rms_contrast)},
        {"total_intensity", s.total_intensity},
    });
  }
  const Json doc = {
      {"range", {{"lo", ws.range().lo}, {"hi", ws.range().hi}}},
      {"images", std::move(images)},
  };
  return doc.dump(indent) + "\n";
}

std::string stats_csv(const WorkspaceState& ws) {
  std::ostringstream out;
  out << "file,bit_depth,width,height,range_lo,range_hi,pixel_count,percent_of_total,entropy_bits,mean,"
         "rms_contrast,total_intensity\n";
  const auto stats = workspace_statistics(ws);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const ImageRecord& image = *ws.layers()[i].image;
    const RangeStatistics& s = stats[i];
    out << csv_quote(image.source_name()) << ',' << bits(image.bit_depth()) << ',' << image.width() << ','
        << image.height() << ',' << ws.range().lo << ',' << ws.range().hi << ',' << s.pixel_count << ','
        << full_repr(s.percent_of_total) << ',' << full_repr(s.entropy_bits) << ','
        << (s.mean ? full_repr(*s.mean) : std::string()) << ',' << full_repr(s.rms_contrast) << ','
        << s.total_intensity << '\n';
  }
  return out.str();
}

int run(const CliRequest& request, std::ostream& out, std::ostream& err) {
  if (request.inputs.empty()) {
    err << "histoscope: at least one input file is required\n";
    return kBadArguments;
  }
  const bool wants_plot = request.output == OutputKind::PlotPng || request.output == OutputKind::All;
  if (wants_plot && !request.out_path) {
    err << "histoscope: an output path (-o) is required for plots\n";
    return kBadArguments;
  }

  // Decode in parallel; report the first failure in input order.
  std::vector<std::future<ImageRecord>> pending;
  pending.reserve(request.inputs.size());
  for (const auto& path : request.inputs) {
    pending.push_back(std::async(std::launch::async,
                                 [&path, depth = request.csv_depth] { return load_image_file(path, depth); }));
  }
  std::vector<ImageRecord> images;
  std::optional<int> failure;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    try {
      images.push_back(pending[i].get());
    } catch (const Error& e) {
      if (!failure) {
        err << "histoscope: " << request.inputs[i].string() << ": " << to_string(e.code()) << ": " << e.what()
            << "\n";
        failure = exit_code_for(e.code());
      }
    } catch (const std::exception& e) {
      if (!failure) {
        err << "histoscope: " << request.inputs[i].string() << ": " << e.what() << "\n";
        failure = kGenericError;
      }
    }
  }
  if (failure) return *failure;

  for (const auto& image : images) {
    if (exceeds_recommended_size(image)) {
      err << "histoscope: warning: " << image.source_name() << " is " << image.width() << "x" << image.height()
          << "; images over " << kRecommendedMaxSide << " pixels per side are slow to explore\n";
    }
  }

  std::size_t current = 0;
  try {
    WorkspaceState ws = create_workspace(std::move(images.front()));
    for (current = 1; current < images.size(); ++current) ws = add_overlay(ws, std::move(images[current]));
    current = 0;
    if (request.range) ws = set_range(ws, request.range->first, request.range->second);
    ws = set_scale(ws, request.scale);
    if (request.y_limit) ws = set_y_limit(ws, *request.y_limit);

    if (wants_plot) {
      const auto png = render_workspace_png(ws, request.plot);
      write_bytes(*request.out_path, png.data(), png.size());
    }
    if (request.output != OutputKind::PlotPng) {
      const bool csv = request.output == OutputKind::StatsCsv ||
                       (request.output == OutputKind::All && request.all_report_csv);
      const std::string report = csv ? stats_csv(ws) : stats_json(ws);
      if (request.output != OutputKind::All && request.out_path) {
        write_bytes(*request.out_path, report.data(), report.size());
      } else {
        out << report;
      }
    }
  } catch (const Error& e) {
    err << "histoscope: ";
    if (current > 0) err << request.inputs[current].string() << ": ";
    err << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "histoscope: " << e.what() << "\n";
    return kGenericError;
  }
  return kOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"histoscope: pixel-intensity histograms, entropy and RMS contrast of 2D images"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("histoscope ") + HISTOSCOPE_VERSION);

  CliRequest request;
  std::vector<std::string> inputs;
  std::vector<std::int64_t> range;
  std::string scale = "linear";
  std::string format = "json";
  std::string out_path;
  int csv_depth = 8;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("inputs", inputs, "Image or CSV files; the first is the base, the rest are overlays")
        ->required();
    sub->add_option("--range", range, "Inclusive intensity range LO HI")->expected(2)->allow_extra_args(false);
    sub->add_option("--scale", scale, "Y-axis scale")->check(CLI::IsMember({"linear", "log10"}));
    sub->add_option("--y-limit", request.y_limit, "Y-axis limit (pixels per bin)");
    sub->add_option("--csv-depth", csv_depth, "Bit depth declared for CSV inputs")->check(CLI::IsMember({8, 16}));
    sub->add_option("-o,--output", out_path, "Output file");
  };

  CLI::App* stats = app.add_subcommand("stats", "Print the range statistics of each image");
  add_common(stats);
  stats->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  std::string plot_format;
  CLI::App* plot = app.add_subcommand("plot", "Render the histogram-workspace plot as PNG");
  add_common(plot);
  plot->add_option("--format", plot_format, "Also print statistics in this format")
      ->check(CLI::IsMember({"json", "csv"}));
  plot->add_option("--width", request.plot.canvas_width, "Canvas width in pixels");
  plot->add_option("--height", request.plot.canvas_height, "Canvas height in pixels");

  service::ServerOptions server_options;
  server_options.port = service::default_port();
  std::string static_dir;
  CLI::App* serve = app.add_subcommand("serve", "Run the local HTTP service for the browser UI");
  serve->add_option("--port", server_options.port, "Port (default $HISTOSCOPE_PORT or 8765)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--host", server_options.host, "Bind address");
  serve->add_option("--static-dir", static_dir, "Directory of UI assets to serve at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << e.what() << "\n";
      return kOk;
    }
    err << "histoscope: " << e.what() << "\n";
    return kBadArguments;
  }

  if (serve->parsed()) {
    if (!static_dir.empty()) server_options.static_dir = static_dir;
    service::SessionService sessions;
    service::HttpServer server(sessions, server_options);
    if (server.bind() < 0) {
      err << "histoscope: cannot bind " << server_options.host << ":" << server_options.port << "\n";
      return kGenericError;
    }
    out << "histoscope: listening on http://" << server_options.host << ":" << server.port() << std::endl;
    return server.listen() ? kOk : kGenericError;
  }

  for (const auto& input : inputs) request.inputs.emplace_back(input);
  if (!range.empty()) request.range = std::pair{range[0], range[1]};
  request.scale = parse_scale_mode(scale);
  request.csv_depth = csv_depth == 16 ? BitDepth::k16 : BitDepth::k8;
  if (!out_path.empty()) request.out_path = out_path;

  if (stats->parsed()) {
    request.output = format == "csv" ? OutputKind::StatsCsv : OutputKind::StatsJson;
  } else if (plot_format.empty()) {
    request.output = OutputKind::PlotPng;
  } else {
    request.output = OutputKind::All;
    request.all_report_csv = plot_format == "csv";
  }
  return run(request, out, err);
}

}  // namespace histoscope::cli

#include "gapinfo/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace gapinfo {

using nlohmann::json;

namespace {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "failed reading " + path.string());
  return buf.str();
}

std::string full_precision(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

json distribution_to_json(const TripartiteDistribution& dist) {
  const Shape& s = dist.shape();
  json probs = json::array();
  for (double p : dist.probs()) probs.push_back(p);
  return {{"shape", {{"bob", s.bob}, {"alice", s.alice}, {"eve", s.eve}}},
          {"order", kDistributionOrder},
          {"probs", std::move(probs)}};
}

TripartiteDistribution distribution_from_json(const json& doc) {
  Shape shape;
  std::vector<double> probs;
  std::string order;
  try {
    const json& s = doc.at("shape");
    shape = {s.at("bob").get<int>(), s.at("alice").get<int>(), s.at("eve").get<int>()};
    order = doc.at("order").get<std::string>();
    probs = doc.at("probs").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (order != kDistributionOrder) {
    throw Error(ErrorCode::WrongOrder,
                "order must be \"" + std::string(kDistributionOrder) + "\", got \"" + order + "\"");
  }
  try {
    return TripartiteDistribution::validate(
        Eigen::Map<const Eigen::VectorXd>(probs.data(), Eigen::Index(probs.size())), shape);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, e.what());
  }
}

TripartiteDistribution load_distribution(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return distribution_from_json(doc);
}

void save_distribution(const TripartiteDistribution& dist, const std::filesystem::path& path) {
  const Shape& s = dist.shape();
  std::string text = fmt::format(
      "{{\n  \"shape\": {{\"bob\": {}, \"alice\": {}, \"eve\": {}}},\n  \"order\": \"{}\",\n"
      "  \"probs\": [",
      s.bob, s.alice, s.eve, kDistributionOrder);
  for (Eigen::Index i = 0; i < dist.probs().size(); ++i) {
    if (i > 0) text += ", ";
    text += full_precision(dist.probs()[i]);
  }
  text += "]\n}\n";
  write_text_file(path, text);
}

json report_to_json(const InfoReport& r) {
  return {{"p_b", r.p_b},
          {"p_e", r.p_e},
          {"i_ab", r.i_ab},
          {"i_ae", r.i_ae},
          {"h_a", r.h_a},
          {"premise_holds", r.premise_holds},
          {"implication_violated", r.implication_violated},
          {"fano_slack_b", r.fano_slack_b},
          {"fano_slack_e", r.fano_slack_e}};
}

InfoReport report_from_json(const json& doc) {
  try {
    InfoReport r;
    r.p_b = doc.at("p_b").get<double>();
    r.p_e = doc.at("p_e").get<double>();
    r.i_ab = doc.at("i_ab").get<double>();
    r.i_ae = doc.at("i_ae").get<double>();
    r.h_a = doc.at("h_a").get<double>();
    r.premise_holds = doc.at("premise_holds").get<bool>();
    r.implication_violated = doc.at("implication_violated").get<bool>();
    r.fano_slack_b = doc.at("fano_slack_b").get<double>();
    r.fano_slack_e = doc.at("fano_slack_e").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

json search_result_to_json(const SearchResult& result, const SearchConfig& cfg) {
  json trace = json::array();
  for (const auto& t : result.trace) trace.push_back({t.iteration, t.objective});
  return {{"config",
           {{"shape", {{"bob", cfg.shape.bob}, {"alice", cfg.shape.alice}, {"eve", cfg.shape.eve}}},
            {"delta", cfg.delta},
            {"lambda", cfg.penalty_weight},
            {"restarts", cfg.restarts},
            {"max_iters", cfg.max_iters},
            {"init_step", cfg.init_step},
            {"seed", cfg.seed},
            {"converge_tol", cfg.converge_tol},
            {"include_family_warm_start", cfg.include_family_warm_start}}},
          {"distribution", distribution_to_json(result.best_dist)},
          {"report", report_to_json(result.report)},
          {"gap", result.report.i_ae - result.report.i_ab},
          {"objective", result.objective},
          {"feasible", result.feasible},
          {"restart_index", result.restart_index},
          {"iterations_used", result.iterations_used},
          {"trace", std::move(trace)}};
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no sweep rows");
  std::string out = "epsilon,p_b,p_e,i_ab,i_ae,gap\n";
  for (const auto& r : rows) {
    out += fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", r.epsilon, r.p_b,
                       r.p_e, r.i_ab, r.i_ae, r.gap);
  }
  return out;
}

void emit_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& path) {
  write_text_file(path, sweep_csv(rows));
}

std::optional<double> first_sign_change(std::span<const SweepRow> rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double g0 = rows[i - 1].gap;
    const double g1 = rows[i].gap;
    if ((g0 > 0.0) == (g1 > 0.0)) continue;
    const double t = g0 == g1 ? 0.0 : g0 / (g0 - g1);
    return rows[i - 1].epsilon + t * (rows[i].epsilon - rows[i - 1].epsilon);
  }
  return std::nullopt;
}

std::string sweep_svg(std::span<const SweepRow> rows) {
  if (rows.size() < 2) throw Error(ErrorCode::TooFewRows, "need at least two sweep rows");

  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  const double x_min = rows.front().epsilon;
  const double x_max = rows.back().epsilon;
  double y_min = 0.0, y_max = 0.0;
  for (const auto& r : rows) {
    y_min = std::min({y_min, r.i_ab, r.i_ae});
    y_max = std::max({y_max, r.i_ab, r.i_ae});
  }
  if (y_max - y_min <= 0.0) y_max = y_min + 1.0;
  y_max += 0.05 * (y_max - y_min);

  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

  auto polyline = [&](auto field, const char* color, const char* id) {
    std::string pts;
    for (const auto& r : rows) {
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", px(r.epsilon), py(field(r)));
    }
    return fmt::format(
        "  <polyline id=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n",
        id, color, pts);
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  svg += "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  svg += fmt::format(
      "  <line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
      kLeft, kTop, kTop + plot_h);
  svg += fmt::format(
      "  <line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
      kLeft, kTop + plot_h, kLeft + plot_w);

  for (int t = 0; t <= 4; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 4.0;
    const double yv = y_min + (y_max - y_min) * t / 4.0;
    svg += fmt::format(
        "  <text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\">{:.4f}</text>\n",
        px(xv), kTop + plot_h + 18, xv);
    svg += fmt::format(
        "  <text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"end\">{:.3f}</text>\n",
        kLeft - 6, py(yv) + 4, yv);
  }
  svg += fmt::format(
      "  <text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"14\" text-anchor=\"middle\">epsilon</text>\n",
      kLeft + plot_w / 2, kHeight - 15);
  svg += fmt::format(
      "  <text x=\"20\" y=\"{:.2f}\" font-size=\"14\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 20 {:.2f})\">mutual information (bits)</text>\n",
      kTop + plot_h / 2, kTop + plot_h / 2);

  svg += polyline([](const SweepRow& r) { return r.i_ab; }, "#1f77b4", "i_ab");
  svg += polyline([](const SweepRow& r) { return r.i_ae; }, "#d62728", "i_ae");
  svg += fmt::format(
      "  <text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" fill=\"#1f77b4\">I(A;B)</text>\n",
      kLeft + plot_w - 70, kTop + 16);
  svg += fmt::format(
      "  <text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" fill=\"#d62728\">I(A;E)</text>\n",
      kLeft + plot_w - 70, kTop + 34);

  if (const auto cross = first_sign_change(rows)) {
    const double x = px(*cross);
    svg += fmt::format(
        "  <line id=\"sign-change\" data-epsilon=\"{:.17g}\" x1=\"{:.2f}\" y1=\"{:.2f}\" "
        "x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n",
        *cross, x, kTop, x, kTop + plot_h);
    svg += fmt::format(
        "  <text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" fill=\"gray\">gap = 0 at {:.4f}</text>\n",
        x + 4, kTop + 12, *cross);
  }
  svg += "</svg>\n";
  return svg;
}

void render_sweep_svg(std::span<const SweepRow> rows, const std::filesystem::path& path) {
  write_text_file(path, sweep_svg(rows));
}

}  // namespace gapinfo

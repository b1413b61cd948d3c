#pragma once

// Model evaluation: top-t accuracy at several choice depths, per-class
// first-choice accuracy, and a first-choice confusion matrix. Reports
// serialize to a fixed-width text table, CSV, or JSON; the JSON form keeps
// full double precision so emit -> parse reproduces the report exactly.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "glyph/classifier.hpp"
#include "glyph/errors.hpp"
#include "glyph/parallel.hpp"

namespace glyph {

struct AccuracyReport {
  std::string category;
  long n_test = 0;
  std::map<int, double> acc_at;  // choice depth -> percentage
  std::map<std::string, double> per_class_acc;  // first-choice, per label
  std::vector<std::string> labels;  // confusion axis, sorted
  std::vector<std::vector<long>> confusion;  // [true][predicted], first choice

  bool operator==(const AccuracyReport&) const = default;
};

enum class ReportFormat { text, csv, json };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "text") return ReportFormat::text;
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw InvalidArgumentError("unknown report format '" + s +
                             "' (expected text, csv or json)");
}

// Scores every test sample against the model. acc_at(t) is the percentage
// of samples whose true label appears among the t nearest classes; the
// confusion matrix uses first choices only.
inline AccuracyReport evaluate(const Model& model,
                               const std::vector<FeatureSample>& test,
                               std::vector<int> depths = {1, 2, 3},
                               int jobs = 1) {
  if (test.empty()) throw DatasetError("no test samples to evaluate");
  if (depths.empty()) throw InvalidArgumentError("no choice depths given");
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  if (depths.front() < 1)
    throw InvalidArgumentError("choice depths must be >= 1");

  std::map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < model.codebooks.size(); ++i)
    label_index[model.codebooks[i].label] = i;
  for (const auto& s : test)
    if (!label_index.count(s.label))
      throw DatasetError("test label '" + s.label + "' is not in the model");

  const int max_depth = depths.back();

  // rank[i]: position of the true label among the ranked choices (0-based),
  // or max_depth if it is further down. first[i]: index of the top choice.
  std::vector<int> rank(test.size());
  std::vector<std::size_t> first(test.size());
  parallel_for(test.size(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const RankedChoices choices = classify(model, test[i].features, max_depth);
      first[i] = label_index.at(choices.front().label);
      int r = max_depth;
      for (std::size_t j = 0; j < choices.size(); ++j)
        if (choices[j].label == test[i].label) {
          r = static_cast<int>(j);
          break;
        }
      rank[i] = r;
    }
  });

  AccuracyReport rep;
  rep.category = model.category;
  rep.n_test = static_cast<long>(test.size());
  for (const auto& [label, _] : label_index) rep.labels.push_back(label);
  rep.confusion.assign(rep.labels.size(),
                       std::vector<long>(rep.labels.size(), 0));

  std::map<std::string, long> class_total, class_hit;
  std::vector<long> hits_at(static_cast<std::size_t>(max_depth) + 1, 0);
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (rank[i] < max_depth) ++hits_at[rank[i]];
    ++class_total[test[i].label];
    if (rank[i] == 0) ++class_hit[test[i].label];
    rep.confusion[label_index.at(test[i].label)][first[i]] += 1;
  }
  long cumulative = 0;
  std::size_t next_depth = 0;
  for (int t = 1; t <= max_depth; ++t) {
    cumulative += hits_at[t - 1];
    if (next_depth < depths.size() && depths[next_depth] == t) {
      rep.acc_at[t] = 100.0 * static_cast<double>(cumulative) /
                      static_cast<double>(test.size());
      ++next_depth;
    }
  }
  for (const auto& [label, total] : class_total)
    rep.per_class_acc[label] =
        100.0 * static_cast<double>(class_hit[label]) / static_cast<double>(total);
  return rep;
}

namespace detail {

inline std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}
inline std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}
inline std::string fixed2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}
inline std::string percent_cell(double value) {
  return pad_left(fixed2(value) + "%", 10);
}
inline std::string depth_heading(int t) {
  switch (t) {
    case 1: return "1st Choice";
    case 2: return "2nd Choice";
    case 3: return "3rd Choice";
    default: return "Top-" + std::to_string(t);
  }
}

}  // namespace detail

inline std::string format_report_text(const AccuracyReport& rep) {
  const std::size_t label_col = std::max<std::size_t>(8, rep.category.size());
  std::string out;
  out += detail::pad_right("Category", label_col);
  for (const auto& [t, _] : rep.acc_at)
    out += "  " + detail::pad_left(detail::depth_heading(t), 10);
  out += "\n";
  out += detail::pad_right(rep.category, label_col);
  for (const auto& [_, pct] : rep.acc_at) out += "  " + detail::percent_cell(pct);
  out += "\n\n";
  out += "Test samples: " + std::to_string(rep.n_test) + "\n\n";

  out += "Per-class accuracy (1st choice):\n";
  for (const auto& [label, pct] : rep.per_class_acc)
    out += "  " + detail::pad_right(label, 4) + detail::percent_cell(pct) + "\n";
  out += "\n";

  std::size_t cell = 4;
  for (const auto& label : rep.labels) cell = std::max(cell, label.size() + 1);
  out += "Confusion matrix (rows: true class, columns: 1st choice):\n";
  out += std::string(cell + 2, ' ');
  for (const auto& label : rep.labels) out += detail::pad_left(label, cell);
  out += "\n";
  for (std::size_t r = 0; r < rep.labels.size(); ++r) {
    out += detail::pad_left(rep.labels[r], cell) + "  ";
    for (long v : rep.confusion[r])
      out += detail::pad_left(std::to_string(v), cell);
    out += "\n";
  }
  return out;
}

inline std::string format_report_csv(const AccuracyReport& rep) {
  std::string header = "category,n_test";
  std::string row = rep.category + "," + std::to_string(rep.n_test);
  for (const auto& [t, pct] : rep.acc_at) {
    header += ",acc_at_" + std::to_string(t);
    row += "," + detail::fixed2(pct);
  }
  return header + "\n" + row + "\n";
}

inline std::string format_report_json(const AccuracyReport& rep) {
  nlohmann::json j;
  j["category"] = rep.category;
  j["n_test"] = rep.n_test;
  nlohmann::json acc = nlohmann::json::object();
  for (const auto& [t, pct] : rep.acc_at) acc[std::to_string(t)] = pct;
  j["acc_at"] = acc;
  j["per_class_acc"] = rep.per_class_acc;
  j["labels"] = rep.labels;
  j["confusion"] = rep.confusion;
  return j.dump(2) + "\n";
}

inline AccuracyReport parse_report_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("bad report JSON: ") + e.what());
  }
  try {
    AccuracyReport rep;
    rep.category = j.at("category").get<std::string>();
    rep.n_test = j.at("n_test").get<long>();
    for (const auto& [key, value] : j.at("acc_at").items())
      rep.acc_at[std::stoi(key)] = value.get<double>();
    rep.per_class_acc =
        j.at("per_class_acc").get<std::map<std::string, double>>();
    rep.labels = j.at("labels").get<std::vector<std::string>>();
    rep.confusion = j.at("confusion").get<std::vector<std::vector<long>>>();
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("report JSON missing fields: ") +
                            e.what());
  }
}

inline std::string format_report(const AccuracyReport& rep, ReportFormat fmt) {
  switch (fmt) {
    case ReportFormat::text: return format_report_text(rep);
    case ReportFormat::csv: return format_report_csv(rep);
    case ReportFormat::json: return format_report_json(rep);
  }
  throw InvalidArgumentError("unhandled report format");
}

inline void emit_report(const AccuracyReport& rep, ReportFormat fmt,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open report file for writing: " + path.string());
  const std::string text = format_report(rep, fmt);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error("report write failed: " + path.string());
}

}  // namespace glyph

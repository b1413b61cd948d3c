#pragma once

// Dataset ingestion and train/test splitting.
//
// On-disk layout:   root/<label>/<image files>
//              or:  root/<label>/<partition>/<image files>
// where <label> is the class symbol (directory name) and the optional
// <partition> subdirectory names a corpus section such as HSF_0. Writer ids
// are parsed from filenames that start with 'F' or 'f' followed by exactly
// four digits ("F0012_07.png" -> writer F0012).
//
// A split manifest names a category and gives each of train/test a writer
// selector (explicit id ranges, or "all") plus an optional partition filter.
// Manifest text format, one clause per line ('#' starts a comment):
//
//   category digits
//   train writers F0000-F0099
//   train partitions HSF_0
//   test writers F0100-F0149
//   test partitions HSF_0
//
// Ranges are inclusive and may be comma-separated; a bare "F0042" is the
// one-element range. "writers all" accepts every sample, including those
// without a parseable writer id; explicit ranges never match id-less
// samples, since writer disjointness would be unverifiable for them.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "glyph/errors.hpp"

namespace glyph {

struct LabeledSample {
  std::filesystem::path image_path;
  std::string label;
  std::optional<std::string> writer_id;   // normalized "F####"
  std::optional<std::string> partition;   // normalized upper-case, e.g. "HSF_0"
};

struct ScanResult {
  std::vector<LabeledSample> samples;
  std::vector<std::string> warnings;  // skipped entries, one message each
};

namespace detail {

inline std::string upper_copy(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// "F0012_07.png" -> "F0012"; requires exactly four digits after F/f with no
// fifth digit following, otherwise the filename has no writer id.
inline std::optional<std::string> parse_writer_id(const std::string& filename) {
  if (filename.size() < 5) return std::nullopt;
  if (filename[0] != 'F' && filename[0] != 'f') return std::nullopt;
  for (int i = 1; i <= 4; ++i)
    if (!std::isdigit(static_cast<unsigned char>(filename[i]))) return std::nullopt;
  if (filename.size() > 5 && std::isdigit(static_cast<unsigned char>(filename[5])))
    return std::nullopt;
  return "F" + filename.substr(1, 4);
}

inline bool has_image_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".png" || ext == ".bmp" || ext == ".txt";
}

}  // namespace detail

// Walks root/<label>[/<partition>]/<files>. Deterministic: entries are
// visited in lexicographic path order regardless of directory enumeration
// order. Non-image files and over-deep directories are skipped with a
// warning rather than failing the whole scan.
inline ScanResult scan_dataset(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root))
    throw DatasetError("dataset root is not a directory: " + root.string());

  auto sorted_entries = [](const fs::path& dir) {
    std::vector<fs::directory_entry> out;
    for (const auto& e : fs::directory_iterator(dir)) out.push_back(e);
    std::sort(out.begin(), out.end(),
              [](const fs::directory_entry& a, const fs::directory_entry& b) {
                return a.path().filename().string() < b.path().filename().string();
              });
    return out;
  };

  ScanResult result;
  auto add_file = [&result](const fs::path& file, const std::string& label,
                            const std::optional<std::string>& partition) {
    if (!detail::has_image_extension(file)) {
      result.warnings.push_back("skipped non-image file: " + file.string());
      return;
    }
    LabeledSample s;
    s.image_path = file;
    s.label = label;
    s.writer_id = detail::parse_writer_id(file.filename().string());
    s.partition = partition;
    result.samples.push_back(std::move(s));
  };

  for (const auto& label_entry : sorted_entries(root)) {
    if (!label_entry.is_directory()) {
      result.warnings.push_back("skipped stray file at dataset root: " +
                                label_entry.path().string());
      continue;
    }
    const std::string label = label_entry.path().filename().string();
    for (const auto& entry : sorted_entries(label_entry.path())) {
      if (entry.is_directory()) {
        const std::string partition =
            detail::upper_copy(entry.path().filename().string());
        for (const auto& file : sorted_entries(entry.path())) {
          if (file.is_directory()) {
            result.warnings.push_back("skipped nested directory: " +
                                      file.path().string());
            continue;
          }
          add_file(file.path(), label, partition);
        }
      } else {
        add_file(entry.path(), label, std::nullopt);
      }
    }
  }
  if (result.samples.empty())
    throw DatasetError("no samples found under " + root.string());
  return result;
}

struct WriterRange {
  int lo = 0;  // numeric part of "F####", inclusive
  int hi = 0;
  bool operator==(const WriterRange&) const = default;
};

struct Selector {
  bool match_all = false;            // "writers all"
  std::vector<WriterRange> writers;  // used when !match_all
  std::set<std::string> partitions;  // empty = no partition constraint

  bool matches(const LabeledSample& s) const {
    bool writer_ok = match_all;
    if (!writer_ok && s.writer_id) {
      const int num = std::stoi(s.writer_id->substr(1));
      for (const auto& r : writers)
        if (num >= r.lo && num <= r.hi) {
          writer_ok = true;
          break;
        }
    }
    if (!writer_ok) return false;
    if (partitions.empty()) return true;
    // Samples without a partition directory are not filtered on partition;
    // writer disjointness alone keeps the split sound for them.
    if (!s.partition) return true;
    return partitions.count(*s.partition) > 0;
  }
};

struct SplitManifest {
  std::string name;  // builtin name or source path, for messages
  std::string category;  // digits | uppercase | lowercase | custom
  Selector train;
  Selector test;

  // Structural disjointness: the two selectors must not be able to accept
  // the same writer. Overlapping writer ranges are tolerated only when the
  // partition sets are provably disjoint.
  void validate() const {
    if (category != "digits" && category != "uppercase" &&
        category != "lowercase" && category != "custom")
      throw ManifestError(name + ": unknown category '" + category + "'");
    if (!train.match_all && train.writers.empty())
      throw ManifestError(name + ": train selector has no writers clause");
    if (!test.match_all && test.writers.empty())
      throw ManifestError(name + ": test selector has no writers clause");

    bool writers_overlap = false;
    if (train.match_all || test.match_all) {
      writers_overlap = true;  // "all" spans every range
    } else {
      for (const auto& a : train.writers)
        for (const auto& b : test.writers)
          if (a.lo <= b.hi && b.lo <= a.hi) writers_overlap = true;
    }
    if (!writers_overlap) return;

    const bool partitions_disjoint =
        !train.partitions.empty() && !test.partitions.empty() &&
        [&] {
          for (const auto& p : train.partitions)
            if (test.partitions.count(p)) return false;
          return true;
        }();
    if (!partitions_disjoint)
      throw ManifestError(name + ": train and test selectors overlap");
  }
};

namespace detail {

inline int parse_writer_number(const std::string& token,
                               const std::string& context) {
  if (auto id = parse_writer_id(token); id && token.size() == 5)
    return std::stoi(id->substr(1));
  throw ManifestError(context + ": bad writer id '" + token +
                      "' (expected F followed by four digits)");
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::exchange(cur, ""));
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace detail

// Parses the manifest grammar shown at the top of this header.
inline SplitManifest parse_manifest(std::istream& in, const std::string& name) {
  SplitManifest m;
  m.name = name;
  bool saw_category = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::istringstream words(line);
    std::string first;
    if (!(words >> first)) continue;  // blank or comment-only line
    const std::string where = name + ":" + std::to_string(line_no);

    if (first == "category") {
      std::string value;
      if (!(words >> value))
        throw ManifestError(where + ": category needs a value");
      m.category = value;
      saw_category = true;
      continue;
    }
    if (first != "train" && first != "test")
      throw ManifestError(where + ": expected 'category', 'train' or 'test', got '" +
                          first + "'");
    Selector& sel = (first == "train") ? m.train : m.test;

    std::string what;
    if (!(words >> what))
      throw ManifestError(where + ": incomplete clause");
    std::string rest;
    std::getline(words, rest);
    const auto tokens = detail::split_list(rest);

    if (what == "writers") {
      if (tokens.size() == 1 && tokens[0] == "all") {
        sel.match_all = true;
        continue;
      }
      if (tokens.empty())
        throw ManifestError(where + ": writers clause needs ranges or 'all'");
      for (const auto& tok : tokens) {
        WriterRange r;
        if (auto dash = tok.find('-'); dash != std::string::npos) {
          r.lo = detail::parse_writer_number(tok.substr(0, dash), where);
          r.hi = detail::parse_writer_number(tok.substr(dash + 1), where);
        } else {
          r.lo = r.hi = detail::parse_writer_number(tok, where);
        }
        if (r.lo > r.hi)
          throw ManifestError(where + ": range '" + tok + "' is reversed");
        sel.writers.push_back(r);
      }
    } else if (what == "partitions") {
      if (tokens.empty())
        throw ManifestError(where + ": partitions clause needs names");
      for (const auto& tok : tokens)
        sel.partitions.insert(detail::upper_copy(tok));
    } else {
      throw ManifestError(where + ": expected 'writers' or 'partitions', got '" +
                          what + "'");
    }
  }
  if (!saw_category) throw ManifestError(name + ": missing category line");
  m.validate();
  return m;
}

inline SplitManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest: " + path.string());
  return parse_manifest(in, path.string());
}

// Built-in splits for the NIST Special Database 19 directory conventions:
// digits train on writers F0000-F0099 of HSF_0 and test on F0100-F0149 of
// HSF_0; letter categories train on F0000-F0999 of HSF_0/HSF_1 and test on
// F1000-F1499 of HSF_3.
inline std::optional<SplitManifest> builtin_manifest(const std::string& name) {
  SplitManifest m;
  m.name = name;
  if (name == "nist-digits") {
    m.category = "digits";
    m.train.writers = {{0, 99}};
    m.train.partitions = {"HSF_0"};
    m.test.writers = {{100, 149}};
    m.test.partitions = {"HSF_0"};
  } else if (name == "nist-uppercase" || name == "nist-lowercase") {
    m.category = (name == "nist-uppercase") ? "uppercase" : "lowercase";
    m.train.writers = {{0, 999}};
    m.train.partitions = {"HSF_0", "HSF_1"};
    m.test.writers = {{1000, 1499}};
    m.test.partitions = {"HSF_3"};
  } else {
    return std::nullopt;
  }
  m.validate();
  return m;
}

// A builtin name if it is one, otherwise a path to a manifest file.
inline SplitManifest resolve_manifest(const std::string& name_or_path) {
  if (auto builtin = builtin_manifest(name_or_path)) return *builtin;
  if (!std::filesystem::exists(name_or_path))
    throw ManifestError("'" + name_or_path +
                        "' is neither a built-in manifest name nor a file");
  return load_manifest(name_or_path);
}

struct Split {
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> test;
};

// Partitions samples by the manifest selectors, preserving scan order.
// Samples matching neither side are dropped.
inline Split apply_split(const std::vector<LabeledSample>& samples,
                         const SplitManifest& manifest) {
  manifest.validate();
  Split split;
  for (const auto& s : samples) {
    const bool in_train = manifest.train.matches(s);
    const bool in_test = manifest.test.matches(s);
    if (in_train && in_test)
      throw ManifestError(manifest.name + ": sample " + s.image_path.string() +
                          " matches both train and test selectors");
    if (in_train)
      split.train.push_back(s);
    else if (in_test)
      split.test.push_back(s);
  }
  return split;
}

// The class symbols a category is expected to contain; empty means
// unconstrained (custom datasets).
inline std::vector<std::string> category_alphabet(const std::string& category) {
  std::vector<std::string> out;
  if (category == "digits") {
    for (char c = '0'; c <= '9'; ++c) out.emplace_back(1, c);
  } else if (category == "uppercase") {
    for (char c = 'A'; c <= 'Z'; ++c) out.emplace_back(1, c);
  } else if (category == "lowercase") {
    for (char c = 'a'; c <= 'z'; ++c) out.emplace_back(1, c);
  }
  return out;
}

}  // namespace glyph

#include "mammo/dataio.hpp"

#include <fstream>
#include <set>

namespace mammo {

namespace fs = std::filesystem;

DatasetManifest load_manifest(const fs::path &csv) {
  std::ifstream in(csv);
  if (!in)
    throw DataError("cannot open manifest " + csv.string());
  DatasetManifest m;
  m.root = csv.parent_path();

  std::string line;
  if (!std::getline(in, line))
    throw DataError("empty manifest " + csv.string());
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != "path,label")
    throw DataError("manifest header must be 'path,label': " + csv.string());

  std::set<std::string> seen;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0)
      throw DataError(csv.string() + ":" + std::to_string(lineno) + ": expected path,label");
    std::string path = line.substr(0, comma);
    const auto label = parse_label(std::string_view(line).substr(comma + 1));
    if (!label)
      throw DataError(csv.string() + ":" + std::to_string(lineno) + ": unknown label");
    if (!seen.insert(path).second)
      throw DataError(csv.string() + ":" + std::to_string(lineno) + ": duplicate path " + path);
    m.entries.push_back({std::move(path), *label});
  }
  return m;
}

void save_manifest(const DatasetManifest &manifest, const fs::path &csv) {
  std::ofstream out(csv);
  if (!out)
    throw DataError("cannot write manifest " + csv.string());
  out << "path,label\n";
  for (const auto &e : manifest.entries)
    out << e.image_path << ',' << to_string(e.label) << '\n';
  if (!out)
    throw DataError("write failed: " + csv.string());
}

} // namespace mammo

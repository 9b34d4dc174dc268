#include "mammo/evaluation/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace mammo {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char *kColumns =
    "config_id,extractor,family,classifier,kernel,seed,weight_seed,fold,train_acc,test_acc,"
    "train_sec,test_sec";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    out.push_back(cur);
  if (!s.empty() && s.back() == sep)
    out.emplace_back();
  return out;
}

std::string conf_name(int i, int j) { return "c" + std::to_string(i) + std::to_string(j); }

std::string sanitize(std::string s) {
  for (char &c : s)
    if (c == ',' || c == '\n' || c == '\r')
      c = ';';
  return s;
}

Json summary(const Summary &s) { return Json{{"mean", s.mean}, {"std", s.std}}; }

Json matrix(const ConfusionMean &m) {
  Json rows = Json::array();
  for (int i = 0; i < kNumClasses; ++i) {
    Json r = Json::array();
    for (int j = 0; j < kNumClasses; ++j)
      r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Json to_json(const RunReport &report) {
  const Aggregates agg = report.aggregates();
  Json settings = Json::object();
  for (const auto &[k, v] : report.settings)
    settings[k] = v;

  Json runs = Json::array(), timing = Json::array();
  for (const RunRecord &r : report.runs) {
    Json conf = Json::array();
    for (int i = 0; i < kNumClasses; ++i) {
      Json row = Json::array();
      for (int j = 0; j < kNumClasses; ++j)
        row.push_back(r.confusion(i, j));
      conf.push_back(row);
    }
    runs.push_back(Json{{"seed", r.seed},
                        {"weight_seed", r.weight_seed},
                        {"fold", r.fold},
                        {"kernel", r.kernel},
                        {"train_acc", r.train_accuracy},
                        {"test_acc", r.test_accuracy},
                        {"confusion", conf},
                        {"error", r.error}});
    timing.push_back(Json{{"train_sec", r.train_seconds}, {"test_sec", r.test_seconds}});
  }
  return Json{
      {"version", RunReport::kVersion},
      {"configuration",
       {{"id", report.config.str()},
        {"extractor", report.config.extractor},
        {"family", report.config.family},
        {"classifier", report.config.classifier},
        {"kernel", report.config.kernel}}},
      {"seeds", report.seeds},
      {"classes", report.classes},
      {"settings", settings},
      {"results",
       {{"runs", runs},
        {"aggregate",
         {{"runs", agg.runs},
          {"train_acc", summary(agg.train_accuracy)},
          {"test_acc", summary(agg.test_accuracy)},
          {"confusion_mean", matrix(agg.confusion_mean)},
          {"confusion_std", matrix(agg.confusion_std)}}}}},
      {"timing",
       {{"runs", timing},
        {"aggregate",
         {{"train_sec", summary(agg.train_seconds)}, {"test_sec", summary(agg.test_seconds)}}}}},
  };
}

std::string to_csv(const RunReport &report) {
  std::ostringstream os;
  const ConfigurationId &c = report.config;
  os << "# version=" << RunReport::kVersion << "\n# config_id=" << c.str()
     << "\n# extractor=" << c.extractor << "\n# family=" << c.family
     << "\n# classifier=" << c.classifier << "\n# kernel=" << c.kernel << "\n# seeds=";
  for (std::size_t i = 0; i < report.seeds.size(); ++i)
    os << (i ? ";" : "") << report.seeds[i];
  os << "\n# classes=";
  for (std::size_t i = 0; i < report.classes.size(); ++i)
    os << (i ? ";" : "") << report.classes[i];
  os << '\n';
  for (const auto &[k, v] : report.settings)
    os << "# setting." << k << '=' << v << '\n';

  os << kColumns;
  for (int i = 0; i < kNumClasses; ++i)
    for (int j = 0; j < kNumClasses; ++j)
      os << ',' << conf_name(i, j);
  os << ",error\n";
  for (const RunRecord &r : report.runs) {
    os << c.str() << ',' << c.extractor << ',' << c.family << ',' << c.classifier << ','
       << r.kernel << ',' << r.seed << ',' << r.weight_seed << ',' << r.fold << ','
       << num(r.train_accuracy) << ',' << num(r.test_accuracy) << ',' << num(r.train_seconds)
       << ',' << num(r.test_seconds);
    for (int i = 0; i < kNumClasses; ++i)
      for (int j = 0; j < kNumClasses; ++j)
        os << ',' << r.confusion(i, j);
    os << ',' << sanitize(r.error) << '\n';
  }

  const Aggregates a = report.aggregates();
  os << "# aggregate,metric,mean,std\n# aggregate,runs," << a.runs << ",0\n";
  const std::pair<const char *, Summary> rows[] = {{"train_acc", a.train_accuracy},
                                                   {"test_acc", a.test_accuracy},
                                                   {"train_sec", a.train_seconds},
                                                   {"test_sec", a.test_seconds}};
  for (const auto &[name, s] : rows)
    os << "# aggregate," << name << ',' << num(s.mean) << ',' << num(s.std) << '\n';
  for (int i = 0; i < kNumClasses; ++i)
    for (int j = 0; j < kNumClasses; ++j)
      os << "# aggregate," << conf_name(i, j) << ',' << num(a.confusion_mean(i, j)) << ','
         << num(a.confusion_std(i, j)) << '\n';
  return os.str();
}

double to_double(const std::string &s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size())
    throw std::invalid_argument(s);
  return v;
}

std::uint64_t to_u64(const std::string &s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used);
  if (used != s.size())
    throw std::invalid_argument(s);
  return v;
}

RunReport from_json(const Json &j) {
  if (!j.contains("version") || j.at("version").get<int>() != RunReport::kVersion)
    throw ReportError("unsupported or missing report version");
  RunReport r;
  const Json &c = j.at("configuration");
  r.config = {c.at("extractor").get<std::string>(), c.at("family").get<std::string>(),
              c.at("classifier").get<std::string>(), c.at("kernel").get<std::string>()};
  r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  r.classes = j.at("classes").get<std::vector<int>>();
  for (const auto &[k, v] : j.at("settings").items())
    r.settings.emplace_back(k, v.get<std::string>());
  const Json &runs = j.at("results").at("runs");
  const Json &timing = j.at("timing").at("runs");
  if (runs.size() != timing.size())
    throw ReportError("results and timing sections disagree on the run count");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Json &x = runs[i];
    RunRecord rec;
    rec.seed = x.at("seed").get<std::uint64_t>();
    rec.weight_seed = x.at("weight_seed").get<std::uint64_t>();
    rec.fold = x.at("fold").get<int>();
    rec.kernel = x.at("kernel").get<std::string>();
    rec.train_accuracy = x.at("train_acc").get<double>();
    rec.test_accuracy = x.at("test_acc").get<double>();
    for (int a = 0; a < kNumClasses; ++a)
      for (int b = 0; b < kNumClasses; ++b)
        rec.confusion(a, b) = x.at("confusion").at(a).at(b).get<int>();
    rec.error = x.at("error").get<std::string>();
    rec.train_seconds = timing[i].at("train_sec").get<double>();
    rec.test_seconds = timing[i].at("test_sec").get<double>();
    r.runs.push_back(std::move(rec));
  }
  return r;
}

RunReport from_csv(const std::string &text) {
  RunReport r;
  std::istringstream is(text);
  std::string line;
  std::map<std::string, std::string> meta;
  bool header = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    if (line.rfind("# aggregate", 0) == 0)
      continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        continue;
      const std::string key = line.substr(2, eq - 2), value = line.substr(eq + 1);
      if (key.rfind("setting.", 0) == 0)
        r.settings.emplace_back(key.substr(8), value);
      else
        meta[key] = value;
      continue;
    }
    if (!header) {
      if (line.rfind(kColumns, 0) != 0)
        throw ReportError("line " + std::to_string(line_no) + ": unexpected column header");
      header = true;
      continue;
    }
    const std::vector<std::string> f = split(line, ',');
    constexpr std::size_t kFields = 12 + kNumClasses * kNumClasses + 1;
    if (f.size() != kFields)
      throw ReportError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(kFields) + " fields, got " + std::to_string(f.size()));
    RunRecord rec;
    try {
      rec.kernel = f[4];
      rec.seed = to_u64(f[5]);
      rec.weight_seed = to_u64(f[6]);
      rec.fold = static_cast<int>(to_u64(f[7]));
      rec.train_accuracy = to_double(f[8]);
      rec.test_accuracy = to_double(f[9]);
      rec.train_seconds = to_double(f[10]);
      rec.test_seconds = to_double(f[11]);
      for (int a = 0; a < kNumClasses; ++a)
        for (int b = 0; b < kNumClasses; ++b)
          rec.confusion(a, b) = static_cast<int>(to_u64(f[12 + 3 * a + b]));
    } catch (const std::logic_error &) {
      throw ReportError("line " + std::to_string(line_no) + ": malformed number");
    }
    rec.error = f.back();
    r.runs.push_back(std::move(rec));
  }
  if (!header)
    throw ReportError("report has no column header");
  if (meta["version"] != std::to_string(RunReport::kVersion))
    throw ReportError("unsupported or missing report version");
  r.config = {meta["extractor"], meta["family"], meta["classifier"], meta["kernel"]};
  for (const std::string &s : split(meta["seeds"], ';'))
    if (!s.empty())
      r.seeds.push_back(to_u64(s));
  for (const std::string &s : split(meta["classes"], ';'))
    if (!s.empty())
      r.classes.push_back(static_cast<int>(to_u64(s)));
  return r;
}

bool is_json(const std::string &text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

} // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv")
    return ReportFormat::Csv;
  if (name == "json")
    return ReportFormat::Json;
  return std::nullopt;
}

std::string report_to_string(const RunReport &report, ReportFormat format) {
  return format == ReportFormat::Json ? to_json(report).dump(2) + "\n" : to_csv(report);
}

void emit_report(const RunReport &report, const std::filesystem::path &path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ReportError("cannot write " + path.string());
  out << report_to_string(report, format);
  if (!out)
    throw ReportError("failed writing " + path.string());
}

RunReport parse_report(const std::string &text) {
  if (!is_json(text))
    return from_csv(text);
  try {
    return from_json(Json::parse(text));
  } catch (const nlohmann::json::exception &e) {
    throw ReportError(std::string("malformed JSON report: ") + e.what());
  }
}

RunReport load_report(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ReportError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_report(ss.str());
  } catch (const ReportError &e) {
    throw ReportError(path.string() + ": " + e.what());
  }
}

Aggregates embedded_aggregates(const std::string &text) {
  Aggregates a;
  if (is_json(text)) {
    const Json j = Json::parse(text);
    const Json &res = j.at("results").at("aggregate"), &tim = j.at("timing").at("aggregate");
    const auto get = [](const Json &s) {
      return Summary{s.at("mean").get<double>(), s.at("std").get<double>()};
    };
    a.runs = res.at("runs").get<int>();
    a.train_accuracy = get(res.at("train_acc"));
    a.test_accuracy = get(res.at("test_acc"));
    a.train_seconds = get(tim.at("train_sec"));
    a.test_seconds = get(tim.at("test_sec"));
    for (int i = 0; i < kNumClasses; ++i)
      for (int k = 0; k < kNumClasses; ++k) {
        a.confusion_mean(i, k) = res.at("confusion_mean").at(i).at(k).get<double>();
        a.confusion_std(i, k) = res.at("confusion_std").at(i).at(k).get<double>();
      }
    return a;
  }
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# aggregate,", 0) != 0)
      continue;
    const std::vector<std::string> f = split(line.substr(12), ',');
    if (f.size() != 3 || f[0] == "metric")
      continue;
    const Summary s{to_double(f[1]), to_double(f[2])};
    if (f[0] == "runs")
      a.runs = static_cast<int>(s.mean);
    else if (f[0] == "train_acc")
      a.train_accuracy = s;
    else if (f[0] == "test_acc")
      a.test_accuracy = s;
    else if (f[0] == "train_sec")
      a.train_seconds = s;
    else if (f[0] == "test_sec")
      a.test_seconds = s;
    else if (f[0].size() == 3 && f[0][0] == 'c') {
      const int i = f[0][1] - '0', k = f[0][2] - '0';
      a.confusion_mean(i, k) = s.mean;
      a.confusion_std(i, k) = s.std;
    }
  }
  return a;
}

RatioTable ratio_report(const std::vector<RunReport> &reports) {
  RatioTable t;
  for (const RunReport &r : reports) {
    const Aggregates a = r.aggregates();
    const std::string id = r.config.str();
    if (a.test_accuracy.mean < kNearChanceAccuracy) {
      t.excluded.push_back(id);
      continue;
    }
    if (!(a.train_seconds.mean > 0.0))
      throw ReportError(id + ": mean training time is zero");
    t.rows.push_back({id, a.test_accuracy.mean, a.train_seconds.mean,
                      a.test_accuracy.mean / a.train_seconds.mean});
  }
  std::stable_sort(t.rows.begin(), t.rows.end(),
                   [](const RatioRow &a, const RatioRow &b) { return a.ratio > b.ratio; });
  return t;
}

std::vector<PairwiseTest> pairwise_tests(const std::vector<RunReport> &reports, bool welch) {
  if (reports.size() < 2)
    throw ReportError("comparison needs at least two reports");
  for (const RunReport &r : reports)
    if (r.classes != reports.front().classes)
      throw ReportError("reports " + reports.front().config.str() + " and " + r.config.str() +
                        " cover different class sets");
  std::vector<PairwiseTest> out;
  for (std::size_t a = 0; a < reports.size(); ++a)
    for (std::size_t b = a + 1; b < reports.size(); ++b)
      out.push_back({reports[a].config.str(), reports[b].config.str(),
                     t_test(reports[a].test_accuracies(), reports[b].test_accuracies(), welch)});
  return out;
}

} // namespace mammo
